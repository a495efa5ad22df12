"""Run the full chain on the 2x4 weight matrix and its isotropy data.

Weight matrix -> admissibility and torsion -> isotropy checks -> Fano fan ->
Einstein verdict -> Sasaki-Einstein 5-manifold.
"""
from collections import Counter

from forge import asd, fanpoly as fp, reduction as red, sasaki as sk


def main():
    om = red.EXAMPLE_OMEGA
    table = red.cohomology_table(om)
    print(f"Omega = {om}")
    print(f"  admissible={red.is_admissible(om)} reduced={red.is_reduced(om)}")
    for row in table.rows():
        print("  " + row)

    data = asd.IsotropyData(asd.EXAMPLE_ISOTROPY)
    print(f"isotropy data {data.vectors}")
    print(f"  conditions a/b: {asd.check_conditions_ab(data)}")
    print(f"  strictly convex doubled sequence: {asd.check_calderbank_singer(data)}")
    print(f"  stabilizer orders: {dict(Counter(asd.stabilizer_orders(data)))}")

    fan = asd.fano_from_isotropy(data)
    rep = fp.einstein_verdict(fan)
    print(f"Fano fan rays {fan.ordered_rays}")
    print(f"  index={rep.index} vol={rep.volume} barycenter=({rep.barycenter[0]},{rep.barycenter[1]}) verdict={rep.einstein.value}")

    sr = sk.sasaki_report(fan)
    print(f"M^5: b2={sr.b2} spin={sr.spin} smooth={sr.smooth} pi1={sr.pi1_order} -> {sr.diffeotype}")
    print(f"  Vol(M) = {sr.volume_factor / 27} pi^3 = {sr.volume_se:.12f}")


if __name__ == "__main__":
    main()
