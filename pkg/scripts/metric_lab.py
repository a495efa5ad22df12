"""Duality residuals, volumes and soliton vectors for the named polygons."""
import argparse
import time

import numpy as np

from forge import fanpoly as fp, metriclab as ml


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=["square", "hexagon", "cp2", "f1", "octagon"])
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--points", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    for name in args.names:
        poly = fp.anticanonical_polytope(fp.named_fan(name))
        prob = ml.MetricProblem.from_polytope(poly, ml.MetricLabConfig(grid=args.grid))
        xs = rng.uniform(-6, 6, (args.points, 2))
        ys = prob.moment(xs)
        dual = np.max(np.linalg.norm((prob.grad_G(ys) - xs).astype(float), axis=-1))
        t0 = time.perf_counter()
        est = ml.volume_estimate(prob)
        dt = time.perf_counter() - t0
        exact = float(fp.volume(poly))
        sol = ml.soliton_vector(poly.vertices)
        print(f"{name:8} duality={dual:.1e} vol={est.value:.10f} exact={exact:g} "
              f"rel={(est.value - exact) / exact:+.1e} R={est.R:.1f} ({dt:.1f}s) "
              f"b=({sol.b[0]:+.10f},{sol.b[1]:+.10f})")


if __name__ == "__main__":
    main()
