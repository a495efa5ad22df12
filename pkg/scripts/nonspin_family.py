"""Spin table of the repaired positive Ricci family Delta*_(k,p)."""
import argparse

from forge import fanpoly as fp, sasaki as sk


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=5)
    ap.add_argument("--pmax", type=int, default=5)
    args = ap.parse_args()

    print(f"{'k':>3} {'p':>3}  {'spin':5}  {'witness':14}  diffeotype")
    for k in range(1, args.kmax + 1):
        for p in range(args.pmax + 1):
            fan, l = sk.delta_kp_family(k, p, repair=True)
            w = sk.spin_witness(fan, l)
            dt = sk.classify_5mfd(fan.n_rays - 3, w is not None)
            print(f"{k:>3} {p:>3}  {str(w is not None):5}  {str(w):14}  {dt}")
    try:
        sk.delta_kp_family(2, 0)
    except fp.FanError as e:
        print(f"as printed: {e}")


if __name__ == "__main__":
    main()
