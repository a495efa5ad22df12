"""Write SVG drawings of the named fans and their anticanonical polygons."""
import argparse
from pathlib import Path

from forge import fanpoly as fp
from forge.cli import svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in ("square", "hexagon", "cp2", "f1", "octagon"):
        fan = fp.named_fan(name)
        poly = fp.anticanonical_polytope(fan)
        (out / f"{name}_fan.svg").write_text(svg.render_fan(fan.ordered_rays, title=name), encoding="utf-8")
        (out / f"{name}_polygon.svg").write_text(svg.render_polygon(poly.vertices, title=name), encoding="utf-8")
        print(f"wrote {name}_fan.svg, {name}_polygon.svg")


if __name__ == "__main__":
    main()
