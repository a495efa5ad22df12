"""Sasakian total spaces over toric surfaces.

Given a surface fan and a support function ``h`` of a V-bundle, the cone over
the circle bundle is the toric variety whose fan is spanned by the lifted
points ``(n(rho), h(n(rho)))``. The total space is smooth when every lifted
2-cone (one per maximal cone downstairs) is smooth in Z^3.

Height convention: the Sasaki-Einstein circle bundle lives in the root
``K^{1/c}`` of the canonical bundle, ``c`` the index. With an index witness
``f`` (``<f, n(rho)> = 1 mod c`` on every ray) its heights are
``(1 - <f, n(rho)>) / c``, which is ``k`` itself when ``c = 1``.
"""
from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import fanpoly as fp
from . import lattice as lat
from .fanpoly import AugmentedFan, SupportFunction


class SasakiError(ValueError):
    pass


# -- cones and smoothness -----------------------------------------------------

def _int_heights(fan, h):
    h = h if isinstance(h, SupportFunction) else SupportFunction(tuple(h))
    if len(h) != fan.n_rays:
        raise ValueError(f"support function has {len(h)} values for {fan.n_rays} rays")
    if not h.is_integral():
        raise SasakiError("lift heights must be integers; clear denominators first")
    return h


def lifted_rays(fan: AugmentedFan, h) -> tuple:
    h = _int_heights(fan, h)
    return tuple(tuple(r) + (v,) for r, v in zip(fan.rays, h))


def cone_fan(fan: AugmentedFan, h) -> list[lat.LatticeCone]:
    """Lifted maximal cones, one per maximal cone of ``fan``."""
    if fan.dim not in (1, 2):
        raise fp.UnsupportedDimensionError("cone_fan lifts curves and surfaces only")
    up = lifted_rays(fan, h)
    if all(r[-1] == 0 for r in up):
        warnings.warn("h is identically zero: lifted cones lie in the zero-height plane", stacklevel=2)
    return [lat.LatticeCone(tuple(up[i] for i in c)) for c in fan.cones]


def total_space_smooth(fan: AugmentedFan, h) -> bool:
    """Every lifted maximal cone passes the minor-gcd smoothness test."""
    return all(c.is_smooth for c in cone_fan(fan, h))


def total_space_pi1_order(fan: AugmentedFan, h) -> int:
    """Index of the lattice spanned by the lifted rays (the order of pi_1 of the cone minus apex)."""
    up = lifted_rays(fan, h)
    return lat.maximal_minor_gcd(lat.transpose(up))


def anticanonical_root_lift(fan: AugmentedFan) -> SupportFunction:
    """Heights of ``K^{1/c}``: ``(1 - <f, n(rho)>) / c`` with ``c`` the index."""
    c = fp.index(fan)
    f, _ = fp.index_witness(fan, c)
    return SupportFunction(tuple((1 - lat.dot(f, r)) // c for r in fan.rays))


def canonical_lift(fan: AugmentedFan) -> SupportFunction:
    return fp.canonical_support(fan)


# -- spin ---------------------------------------------------------------------

def spin_witness(fan: AugmentedFan, l):
    """``(a, f)`` over F_2 with ``1 + a l(n) + <f, n> = 0 (mod 2)`` on every ray, or ``None``."""
    l = l if isinstance(l, SupportFunction) else SupportFunction(tuple(l))
    if not l.is_integral():
        raise SasakiError("spin test needs an integral support function")
    if len(l) != fan.n_rays:
        raise ValueError("support function length does not match rays")
    for a in (0, 1):
        for f in itertools.product((0, 1), repeat=fan.dim):
            if all((1 + a * lv + lat.dot(f, r)) % 2 == 0 for r, lv in zip(fan.rays, l)):
                return a, f
    return None


def spin_w2(fan: AugmentedFan, l) -> bool:
    """True iff w_2 of the circle bundle of ``l`` vanishes (an F_2 feasibility search)."""
    return spin_witness(fan, l) is not None


# -- five-manifold classification ---------------------------------------------

class DiffeoKind(enum.Enum):
    S5 = "S5"
    CONN_SUM_SXS = "ConnSumSxS"
    X_INF_CONN_SUM = "XInfConnSum"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Diffeotype:
    kind: DiffeoKind
    count: int = 0

    def __str__(self):
        if self.kind is DiffeoKind.S5:
            return "S⁵"
        if self.kind is DiffeoKind.CONN_SUM_SXS:
            return "S²×S³" if self.count == 1 else f"#{self.count}(S²×S³)"
        if self.kind is DiffeoKind.X_INF_CONN_SUM:
            return "X∞" if self.count == 0 else f"X∞#{self.count}(S²×S³)"
        return "unknown"


def classify_5mfd(b2: int, spin: bool) -> Diffeotype:
    """Simply connected toric 5-manifold from b_2 and w_2 (torsion-free H_2)."""
    if b2 < 0:
        raise ValueError("b2 must be non-negative")
    if spin:
        return Diffeotype(DiffeoKind.S5) if b2 == 0 else Diffeotype(DiffeoKind.CONN_SUM_SXS, b2)
    if b2 == 0:
        raise SasakiError("non-spin with b2 = 0 would need torsion in H_2 (excluded for toric M)")
    return Diffeotype(DiffeoKind.X_INF_CONN_SUM, b2 - 1)


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class SasakiReport:
    dimension: int
    b2: int
    spin: bool
    diffeotype: Diffeotype
    simply_connected: bool = True
    einstein: fp.Verdict | None = None
    index: int | None = None
    smooth: bool | None = None
    pi1_order: int | None = None
    volume_factor: Fraction | None = None
    volume_se: float | None = None

    def __post_init__(self):
        if self.einstein is fp.Verdict.EINSTEIN:
            if not self.spin or self.diffeotype.kind is DiffeoKind.X_INF_CONN_SUM:
                raise SasakiError("a toric Sasaki-Einstein 5-manifold must be spin")


def se_from_3sasakian(b2_S: int) -> SasakiReport:
    """SE 5-manifold attached to a 3-Sasakian 7-manifold with b_2 = b2_S."""
    if b2_S < 0:
        raise ValueError("b2_S must be non-negative")
    b2 = 2 * b2_S + 1
    return SasakiReport(dimension=5, b2=b2, spin=True, diffeotype=classify_5mfd(b2, True),
                        einstein=fp.Verdict.EINSTEIN)


def volume_se(fan: AugmentedFan) -> tuple[Fraction, float]:
    """``(2 c Vol(Sigma_{-k}), 2 c (pi/3)^3 Vol(Sigma_{-k}))`` for an Einstein Fano fan."""
    rep = fp.einstein_verdict(fan)
    if not rep.is_einstein:
        raise SasakiError("Futaki invariant is nonzero: no Sasaki-Einstein metric on this bundle")
    exact = 2 * rep.index * rep.volume
    return exact, float(exact) * (math.pi / 3) ** 3


def sasaki_report(fan: AugmentedFan) -> SasakiReport:
    """Full chain for the circle bundle of ``K^{1/c}`` over a Fano surface."""
    rep = fp.einstein_verdict(fan)
    lift = anticanonical_root_lift(fan)
    smooth = total_space_smooth(fan, lift)
    pi1 = total_space_pi1_order(fan, lift)
    spin = spin_w2(fan, lift)
    b2 = fan.n_rays - 3
    try:
        dt = classify_5mfd(b2, spin) if (smooth and pi1 == 1) else Diffeotype(DiffeoKind.UNKNOWN)
    except SasakiError:
        dt = Diffeotype(DiffeoKind.UNKNOWN)
    vf = vn = None
    if rep.is_einstein:
        vf, vn = volume_se(fan)
    return SasakiReport(dimension=5, b2=b2, spin=spin, diffeotype=dt, simply_connected=pi1 == 1,
                        einstein=rep.einstein, index=rep.index, smooth=smooth, pi1_order=pi1,
                        volume_factor=vf, volume_se=vn)


# -- the non-spin family --------------------------------------------------------

def delta_kp_rays(k: int, p: int, repair: bool = False) -> tuple:
    """Marked rays ``sigma_0..sigma_{k+2}``; ``repair`` negates second coordinates for j >= 2."""
    if k < 1 or p < 0:
        raise ValueError("need k >= 1 and p >= 0")
    if k == 1:
        rays = [(-1, 0), (0, 1), (1, 1 + p), (0, 2 + p)]
    else:
        rays = [(-1, 0), (0, 1)]
        rays += [(j - 1, j * (j - 1) // 2 - 1) for j in range(2, k + 1)]
        rays += [(k, (k + 1) * k // 2 - 1 + p), (0, (k + 1) * k // 2 + p)]
    if repair:
        rays = rays[:2] + [(x, -y) for x, y in rays[2:]]
    return tuple(rays)


def delta_kp_support(k: int) -> SupportFunction:
    return SupportFunction((0,) + (-1,) * (k + 2))


def delta_kp_family(k: int, p: int, repair: bool = False) -> tuple[AugmentedFan, SupportFunction]:
    """The fan and bundle data of the positive Ricci family.

    The printed data is incomplete as a fan; ``repair=True`` applies the sign
    repair and re-validates completeness, strict upper convexity of ``l`` and
    that the marked rays generate Z^2.
    """
    fan = AugmentedFan(delta_kp_rays(k, p, repair))
    l = delta_kp_support(k)
    v = fan.violations()
    if v:
        raise fp.FanError(f"Delta*_({k},{p}){' (repaired)' if repair else ''}: " + "; ".join(v))
    if not fp.is_strictly_upper_convex(fan, l):
        raise fp.FanError(f"l is not strictly upper convex on Delta*_({k},{p})")
    if lat.maximal_minor_gcd(lat.transpose(fan.rays)) != 1:
        raise fp.FanError(f"marked rays of Delta*_({k},{p}) do not generate Z^2")
    return fan, l


def nonspin_report(k: int, p: int) -> SasakiReport:
    fan, l = delta_kp_family(k, p, repair=True)
    spin = spin_w2(fan, l)
    b2 = fan.n_rays - 3
    return SasakiReport(dimension=5, b2=b2, spin=spin, diffeotype=classify_5mfd(b2, spin),
                        smooth=total_space_smooth(fan, -l), pi1_order=total_space_pi1_order(fan, -l))


# -- joins --------------------------------------------------------------------

@dataclass(frozen=True)
class JoinFactor:
    """Invariants of a quasi-regular Sasakian manifold of dimension 2m+1."""

    m: int
    b2: int
    index: int
    order: int = 1
    einstein: bool = True
    positive: bool = True
    spin: bool | None = True
    name: str = ""

    @property
    def dimension(self) -> int:
        return 2 * self.m + 1


def sphere(m: int) -> JoinFactor:
    """Round S^{2m+1}: index m+1, regular."""
    return JoinFactor(m=m, b2=0, index=m + 1, order=1, spin=True, name=f"S^{2 * m + 1}")


@dataclass(frozen=True)
class JoinReport:
    dims: tuple
    relative_indices: tuple
    k: tuple
    quotient_order: int
    smooth: bool
    dimension_out: int
    b2_out: int
    einstein: bool
    positive: bool
    spin: bool | None
    transverse_weights: tuple
    notes: tuple = field(default=())


def relative_indices(i1: int, i2: int) -> tuple[int, int]:
    g = math.gcd(i1, i2)
    return i1 // g, i2 // g


def join(r1: JoinFactor, r2: JoinFactor, k1: int | None = None, k2: int | None = None) -> JoinReport:
    """Invariants of ``M1 *_{k1,k2} M2``; defaults to the relative indices."""
    l1, l2 = relative_indices(r1.index, r2.index)
    if k1 is None or k2 is None:
        k1, k2 = l1, l2
    if k1 < 1 or k2 < 1:
        raise ValueError("k1, k2 must be positive")
    notes = []
    g = math.gcd(k1, k2)
    if g != 1:
        notes.append(f"gcd(k1,k2) = {g}: join with ({k1},{k2}) is the Z_{g} quotient of the ({k1 // g},{k2 // g}) join")
        k1, k2 = k1 // g, k2 // g
    smooth = math.gcd(r1.order * k2, r2.order * k1) == 1
    if r1.spin is False or r2.spin is False:
        spin = False
    else:
        spin = None
    denom = r1.m + r2.m + 1
    return JoinReport(
        dims=(r1.m, r2.m),
        relative_indices=(l1, l2),
        k=(k1, k2),
        quotient_order=g,
        smooth=smooth,
        dimension_out=2 * (r1.m + r2.m) + 1,
        b2_out=r1.b2 + r2.b2 + 1,
        einstein=r1.einstein and r2.einstein and (k1, k2) == (l1, l2),
        positive=r1.positive and r2.positive,
        spin=spin,
        transverse_weights=(Fraction(r1.m + 1, denom), Fraction(r2.m + 1, denom)),
        notes=tuple(notes),
    )


def join_factor(rep: JoinReport, r1: JoinFactor, r2: JoinFactor) -> JoinFactor:
    """The join as a factor for further joins (index gcd, order lcm)."""
    return JoinFactor(m=r1.m + r2.m, b2=rep.b2_out, index=math.gcd(r1.index, r2.index),
                      order=math.lcm(r1.order, r2.order), einstein=rep.einstein,
                      positive=rep.positive, spin=rep.spin,
                      name=f"{r1.name}*{r2.name}" if r1.name and r2.name else "")


def iterated_join(base: JoinFactor, others) -> list[JoinReport]:
    reports = []
    cur = base
    for o in others:
        rep = join(cur, o)
        reports.append(rep)
        cur = join_factor(rep, cur, o)
    return reports


def fan_order(fan: AugmentedFan) -> int:
    """lcm of the local uniformizing group orders ``|det(n_i, n_j)|`` over maximal cones."""
    return math.lcm(*(abs(fp.cross(fan.rays[i], fan.rays[j])) for i, j in fan.cones))


def eschenburg_weights(p1: int, p2: int, p3: int) -> tuple[int, int, int]:
    """Weights of the weighted projective plane attached to ``Omega = (p1, p2, p3)``."""
    return p2 + p3, p1 + p3, p1 + p2
