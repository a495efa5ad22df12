"""``forge`` command line: weights, fan, isotropy, join, render and metric.

Exit codes: 0 success, 1 unreadable input, 2 a mathematical precondition
fails, 3 a numerical method fails.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from .. import asd, fanpoly as fp, lattice as lat, metriclab as ml, reduction as red, sasaki as sk
from . import documents as docs
from . import svg

EXIT_OK, EXIT_PARSE, EXIT_MATH, EXIT_NUMERIC = 0, 1, 2, 3

MATH_ERRORS = (fp.FanError, fp.NotFanoError, fp.DegeneratePolytopeError, fp.UnsupportedDimensionError,
               red.WeightMatrixError, asd.IsotropyError, sk.SasakiError, lat.DimensionError,
               lat.DependentGeneratorsError)

DEFAULT_DUALITY_TOL = 1e-8


class Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which the exit-code contract reserves
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# -- formatting ------------------------------------------------------------------

def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "n/a"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "0" if abs(v) < 1e-12 else f"{v:.10g}"
    if isinstance(v, (tuple, list)):
        if v and all(isinstance(x, (tuple, list)) for x in v):
            return " ".join(svg.lattice_label(x) for x in v)
        return "(" + ",".join(fmt(x) for x in v) + ")"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def emit(command: str, values: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        doc = docs.report_document(command, {k: _jsonable(v) for k, v in values.items()})
        out.write(docs.dumps(doc))
    else:
        for k, v in values.items():
            out.write(f"{k}={fmt(v)}\n")


def pi_cubed(q: Fraction) -> str:
    """``q pi^3`` written as ``a·π³/b``."""
    q = Fraction(q)
    s = f"{q.numerator}π³"
    return s if q.denominator == 1 else f"{s}/{q.denominator}"


# -- loaders -----------------------------------------------------------------------

def _fan_from_doc(doc):
    rays = docs.int_rows(doc["rays"])
    fan = fp.AugmentedFan(rays)
    problems = fan.violations()
    if problems:
        raise Failure(EXIT_MATH, "invalid fan: " + "; ".join(problems))
    support = doc.get("support", {"anticanonical": True})
    h = None
    if "values" in support:
        vals = [docs.to_rational(v) for v in support["values"]]
        if len(vals) != len(rays):
            raise Failure(EXIT_PARSE, f"support has {len(vals)} values for {len(rays)} rays")
        h = fp.SupportFunction(tuple(vals))
    return fan, h


def _factor(d) -> sk.JoinFactor:
    if "sphere" in d:
        return sk.sphere(d["sphere"])
    return sk.JoinFactor(**d)


# -- commands ----------------------------------------------------------------------

def cmd_weights(args) -> int:
    doc = docs.load(args.file, ("weight_matrix",))
    try:
        om = red.WeightMatrix(docs.int_rows(doc["rows"]), doc.get("n"))
    except red.WeightMatrixError as e:
        raise Failure(EXIT_PARSE, str(e))
    nondeg = red.is_nondegenerate(om)
    admissible = red.is_admissible(om)
    reduced = red.is_reduced(om) if nondeg else None
    minors = om.deleted_minors()
    values = {
        "shape": f"{om.k}x{om.n}",
        "nondegenerate": nondeg,
        "reduced": reduced,
        "admissible": admissible,
        "determinantal_divisor": om.determinantal_divisor(),
        "minors": " ".join(f"{''.join(str(i + 1) for i in key)}:{v}" for key, v in sorted(minors.items())),
        "b2": om.k,
    }
    torsion = None
    if admissible and reduced and om.n == om.k + 2:
        torsion = red.torsion_order(om)
    values["torsion_order"] = torsion
    verdict = "admissible" if admissible else ("degenerate" if not nondeg else "inadmissible")
    summary = f"{verdict}, b2={om.k}"
    if torsion is not None:
        summary += f", |G|={torsion}"
    values["summary"] = summary
    emit("weights", values, args.json)
    return EXIT_OK if admissible else EXIT_MATH


def _fan_values(fan, h, which) -> dict:
    values = {"rays": fan.ordered_rays, "n_rays": fan.n_rays}
    if "einstein" in which:
        rep = fp.einstein_verdict(fan)
        values.update(fano=rep.is_fano, symmetric=rep.is_symmetric,
                      special_symmetric=rep.is_special_symmetric,
                      barycenter=rep.barycenter, einstein=rep.is_einstein)
    if "volume" in which:
        values["vol_sigma"] = fp.volume(fp.anticanonical_polytope(fan))
    if "index" in which:
        values["index"] = fp.index(fan)
    lift = h if h is not None else None
    if "smooth" in which or "spin" in which:
        if lift is None:
            lift = sk.anticanonical_root_lift(fan)
    if "smooth" in which:
        values["smooth"] = sk.total_space_smooth(fan, lift)
        values["pi1_order"] = sk.total_space_pi1_order(fan, lift)
    if "spin" in which:
        values["spin"] = sk.spin_w2(fan, lift)
    return values


FAN_FLAGS = ("einstein", "volume", "index", "smooth", "spin")


def cmd_fan(args) -> int:
    doc = docs.load(args.file, ("augmented_fan",))
    fan, h = _fan_from_doc(doc)
    which = [f for f in FAN_FLAGS if getattr(args, f)] or list(FAN_FLAGS)
    if not fp.is_fano(fan) and any(f in which for f in ("einstein", "volume", "index")):
        raise Failure(EXIT_MATH, "fan is not Fano: -K is not strictly upper convex")
    emit("fan", _fan_values(fan, h, which), args.json)
    return EXIT_OK


def cmd_isotropy(args) -> int:
    doc = docs.load(args.file, ("isotropy_data",))
    try:
        data = asd.IsotropyData(docs.int_rows(doc["vectors"]))
    except asd.IsotropyError as e:
        raise Failure(EXIT_MATH, f"isotropy data rejected: {e}")
    rep = asd.analyze_isotropy(data)
    if not rep.admits_asd_einstein:
        raise Failure(EXIT_MATH, "doubled isotropy sequence is not in strictly convex position "
                                 "(Calderbank-Singer condition fails)")
    fan = rep.fano_surface
    sr = sk.sasaki_report(fan)
    values = {
        "asd_einstein": True,
        "conditions_ab": rep.conditions_ab,
        "stabilizers": rep.stabilizer_orders,
        "b2_orbifold": rep.b2_orbifold,
        "fan_rays": fan.ordered_rays,
        "b2_surface": rep.b2_surface,
        "index": sr.index,
        "einstein": sr.einstein.value if sr.einstein is not None else None,
        "smooth": sr.smooth,
        "pi1_order": sr.pi1_order,
        "spin": sr.spin,
        "b2": sr.b2,
        "diffeotype": str(sr.diffeotype),
        "volume_se": pi_cubed(sr.volume_factor / 27) if sr.volume_factor is not None else None,
        "volume_se_float": sr.volume_se,
    }
    if args.emit_fan:
        with open(args.emit_fan, "w", encoding="utf-8") as fh:
            fh.write(docs.dumps(docs.fan_document(fan.ordered_rays)))
    emit("isotropy", values, args.json)
    return EXIT_OK


def cmd_join(args) -> int:
    doc = docs.load(args.file, ("join_spec",))
    try:
        f1, f2 = (_factor(d) for d in doc["factors"])
    except TypeError as e:
        raise Failure(EXIT_PARSE, str(e))
    k = doc.get("k")
    rep = sk.join(f1, f2, *(k or (None, None)))
    for note in rep.notes:
        print(f"warning: {note}", file=sys.stderr)
    values = {
        "dim": rep.dimension_out,
        "b2": rep.b2_out,
        "smooth": rep.smooth,
        "einstein": rep.einstein,
        "positive": rep.positive,
        "spin": rep.spin,
        "k": rep.k,
        "relative_indices": rep.relative_indices,
        "quotient_order": rep.quotient_order,
    }
    emit("join", values, args.json)
    return EXIT_OK


def cmd_render(args) -> int:
    doc = docs.load(args.file, ("augmented_fan", "polytope"))
    if doc["kind"] == "augmented_fan":
        rays = docs.int_rows(doc["rays"])
        text = svg.render_fan(rays)
    else:
        verts = [tuple(docs.to_rational(c) for c in v) for v in doc["vertices"]]
        text = svg.render_polygon(verts, doc.get("labels"))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _duality_tolerance(cli_value):
    if cli_value is not None:
        return cli_value
    env = os.environ.get("FORGE_TOLERANCE")
    if env is None:
        return DEFAULT_DUALITY_TOL
    try:
        return float(env)
    except ValueError:
        raise Failure(EXIT_PARSE, f"FORGE_TOLERANCE is not a number: {env!r}")


def cmd_metric(args) -> int:
    doc = docs.load(args.file, ("augmented_fan",))
    fan, _ = _fan_from_doc(doc)
    if not fp.is_fano(fan):
        raise Failure(EXIT_MATH, "fan is not Fano: -K is not strictly upper convex")
    tol = _duality_tolerance(args.duality_tol)
    cfg = ml.MetricLabConfig(duality_tol=tol, grid=args.grid)
    poly = fp.anticanonical_polytope(fan)
    problem = ml.MetricProblem.from_polytope(poly, cfg)
    rng = np.random.default_rng(args.seed)
    xs = rng.uniform(-5, 5, (args.points, 2))
    ys = problem.moment(xs)
    duality = float(np.max(np.linalg.norm((problem.grad_G(ys) - xs).astype(float), axis=-1)))
    hg = problem.hess_G(ys)
    ident = float(np.max(np.abs(np.linalg.inv(hg) @ hg - np.eye(2))))
    values = {"duality_residual": duality, "duality_ok": duality < tol, "hess_identity_err": ident}
    ok = duality < tol
    do_all = not (args.check_volume or args.soliton)
    if args.check_volume or do_all:
        exact = fp.volume(poly)
        est = ml.volume_estimate(problem, args.R)
        rel = abs(est.value - float(exact)) / float(exact)
        values.update(vol_exact=exact, vol_num=est.value, rel_err=rel, R=est.R, grid=est.grid,
                      unresolved=est.unresolved, volume_ok=rel < args.rel_tol)
        ok = ok and rel < args.rel_tol
    if args.soliton or do_all:
        sol = ml.soliton_vector(poly.vertices)
        b = tuple(0.0 if abs(x) < 1e-9 else float(x) for x in sol.b)
        values.update(soliton=b, soliton_residual=sol.residual, barycenter=fp.barycenter(poly))
    emit("metric", values, args.json)
    if not ok:
        print("error: numeric check outside tolerance", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="forge", description="Toric Sasaki-Einstein and 3-Sasakian invariants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.add_argument("--json", action="store_true", help="machine-readable report document")
        sp.set_defaults(func=func)
        return sp

    add("weights", cmd_weights, "admissibility and cohomology of a weight matrix")
    sp = add("fan", cmd_fan, "invariants of a two dimensional augmented fan")
    for f in FAN_FLAGS:
        sp.add_argument(f"--{f}", action="store_true")
    sp = add("isotropy", cmd_isotropy, "classify isotropy data and run the full chain")
    sp.add_argument("--emit-fan", metavar="PATH", help="write the Fano fan document here")
    add("join", cmd_join, "join of two Sasakian manifolds")
    sp = add("render", cmd_render, "SVG drawing of a fan or polygon")
    sp.add_argument("--svg", metavar="OUT", help="output file (default stdout)")
    sp = add("metric", cmd_metric, "numerical checks of the Guillemin metric")
    sp.add_argument("--check-volume", action="store_true")
    sp.add_argument("--soliton", action="store_true")
    sp.add_argument("--duality-tol", type=float, default=None,
                    help=f"default {DEFAULT_DUALITY_TOL:g} or $FORGE_TOLERANCE")
    sp.add_argument("--rel-tol", type=float, default=0.01)
    sp.add_argument("--R", type=float, default=None, help="quadrature half width (default: automatic)")
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--points", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8")
    except (AttributeError, ValueError):
        pass
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except docs.DocumentError as e:
        print(f"parse error: {args.file}: {e}", file=sys.stderr)
        return EXIT_PARSE
    except Failure as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ml.NewtonError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except MATH_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
