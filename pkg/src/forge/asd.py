"""Toric anti-self-dual Einstein orbifolds described by isotropy data.

Isotropy data is a sequence ``v_0, ..., v_{k+2}`` in Z^2 with
``v_0 = -v_{k+2}``. Doubling it to ``v_0, ..., v_{k+2}, -v_1, ..., -v_{k+1}``
gives a centrally symmetric cyclic sequence; when that sequence is in strictly
convex position its points are the marked rays of a special symmetric toric
Fano surface.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import lattice as lat
from .fanpoly import AugmentedFan, convex_hull, cross


class IsotropyError(ValueError):
    """Isotropy data is malformed or fails the classification check."""


@dataclass(frozen=True)
class IsotropyData:
    """Vectors ``v_0..v_{k+2}``; requires ``v_0 = -v_{k+2}`` and consecutive independence."""

    vectors: tuple

    def __post_init__(self):
        vs = lat.as_int_matrix(self.vectors)
        if len(vs) < 3:
            raise IsotropyError("isotropy data needs at least three vectors (k >= 0)")
        if any(len(v) != 2 for v in vs):
            raise IsotropyError("isotropy vectors must lie in Z^2")
        if vs[0] != tuple(-x for x in vs[-1]):
            raise IsotropyError(f"v_0 = {vs[0]} is not -v_(k+2) = {tuple(-x for x in vs[-1])}")
        for i in range(1, len(vs)):
            if cross(vs[i - 1], vs[i]) == 0:
                raise IsotropyError(f"v_{i - 1} and v_{i} are linearly dependent")
        object.__setattr__(self, "vectors", vs)

    @property
    def k(self) -> int:
        return len(self.vectors) - 3

    def doubled(self) -> tuple:
        """``v_0, ..., v_{k+2}, -v_1, ..., -v_{k+1}``."""
        vs = self.vectors
        return vs + tuple(tuple(-x for x in v) for v in vs[1:-1])


def _as_data(data) -> IsotropyData:
    return data if isinstance(data, IsotropyData) else IsotropyData(tuple(map(tuple, data)))


def check_conditions_ab(data) -> bool:
    """Conditions a (m_i strictly increasing) and b (edge slopes strictly increasing), literally."""
    vs = _as_data(data).vectors
    ms = [v[0] for v in vs]
    if any(ms[i] >= ms[i + 1] for i in range(len(ms) - 1)):
        return False
    slopes = []
    for i in range(1, len(vs)):
        dm = vs[i][0] - vs[i - 1][0]
        if dm == 0:
            return False
        slopes.append(Fraction(vs[i][1] - vs[i - 1][1], dm))
    return all(slopes[i] < slopes[i + 1] for i in range(len(slopes) - 1))


def _strictly_convex_cycle(points) -> bool:
    pts = [tuple(p) for p in points]
    if len(set(pts)) != len(pts) or len(pts) < 3:
        return False
    hull = [tuple(int(c) for c in p) for p in convex_hull(pts)]
    if len(hull) != len(pts):
        return False
    # same cyclic order as the hull, in either orientation
    start = hull.index(pts[0])
    fwd = hull[start:] + hull[:start]
    if fwd == pts:
        return True
    rev = [fwd[0]] + fwd[1:][::-1]
    return rev == pts


def check_calderbank_singer(data) -> bool:
    """Whether the doubled sequence is the vertex cycle of a strictly convex polygon."""
    return _strictly_convex_cycle(_as_data(data).doubled())


def _windows(data):
    """All isotropy sequences obtained by cyclic relabeling and reversal."""
    cyc = list(data.doubled())
    n = len(cyc)
    half = n // 2
    for seq in (cyc, cyc[::-1]):
        for s in range(n):
            yield [seq[(s + j) % n] for j in range(half + 1)]


def arrange_ab_search(data, bound: int | None = None):
    """Bounded search for a relabeling and GL(2, Z) map making conditions a/b hold.

    Returns ``(gamma, vectors)`` for the first arrangement found, else ``None``.
    The second row of ``gamma`` only matters up to adding multiples of the
    first row (that shifts every slope by the same amount), so only the first
    row and the determinant sign are searched. The default bound is twice the
    largest coordinate.
    """
    data = _as_data(data)
    if bound is None:
        bound = 2 * max(abs(x) for v in data.vectors for x in v)
    rows = [(p, q) for p in range(-bound, bound + 1) for q in range(-bound, bound + 1)
            if math.gcd(p, q) == 1]
    for window in _windows(data):
        for p, q in rows:
            ms = [p * v[0] + q * v[1] for v in window]
            if any(ms[i] >= ms[i + 1] for i in range(len(ms) - 1)):
                continue
            _, x, y = lat.xgcd(p, q)  # p x + q y = 1
            for sign in (1, -1):
                gamma = ((p, q), (-sign * y, sign * x))
                cand = [lat.mat_vec(gamma, v) for v in window]
                if check_conditions_ab(cand):
                    return gamma, tuple(cand)
    return None


def stabilizer_orders(data) -> tuple[int, ...]:
    """``|det(v_{i-1}, v_i)|`` for i = 1..k+2: orders of the vertex stabilizers."""
    vs = _as_data(data).vectors
    return tuple(abs(cross(vs[i - 1], vs[i])) for i in range(1, len(vs)))


def fano_from_isotropy(data) -> AugmentedFan:
    """The special symmetric Fano fan whose marked rays are the doubled sequence."""
    data = _as_data(data)
    if not check_calderbank_singer(data):
        raise IsotropyError("doubled isotropy sequence is not in strictly convex position")
    return AugmentedFan(data.doubled()).validate()


def full_fan_labels(data) -> tuple:
    """Rays ``rho_1..rho_{2n}`` with ``rho_j = v_j`` (j <= k+2) and ``rho_{2n} = v_0``."""
    cyc = _as_data(data).doubled()
    return cyc[1:] + cyc[:1]


def divisor_fans(data, i: int) -> tuple[AugmentedFan, AugmentedFan]:
    """Fans of the divisors D and D-bar for 1 <= i <= k+2.

    D has rays ``rho_1..rho_i, -rho_i + rho_{i+1}, rho_{n+i+1}..rho_{2n}`` and
    D-bar is its negative.
    """
    data = _as_data(data)
    n = data.k + 2
    if not 1 <= i <= n:
        raise IndexError(f"divisor index {i} outside 1..{n}")
    rho = (None,) + full_fan_labels(data)  # 1-based
    new = tuple(b - a for a, b in zip(rho[i], rho[i + 1]))
    rays = list(rho[1:i + 1]) + [new] + list(rho[n + i + 1:2 * n + 1])
    d = AugmentedFan(tuple(rays))
    dbar = AugmentedFan(tuple(tuple(-x for x in r) for r in rays))
    return d, dbar


@dataclass(frozen=True)
class AsdReport:
    admits_asd_einstein: bool
    conditions_ab: bool
    stabilizer_orders: tuple
    b2_orbifold: int
    fano_surface: AugmentedFan | None
    b2_surface: int | None


def analyze_isotropy(data) -> AsdReport:
    data = _as_data(data)
    ok = check_calderbank_singer(data)
    fan = fano_from_isotropy(data) if ok else None
    return AsdReport(
        admits_asd_einstein=ok,
        conditions_ab=check_conditions_ab(data),
        stabilizer_orders=stabilizer_orders(data),
        b2_orbifold=data.k,
        fano_surface=fan,
        b2_surface=fan.b2() if fan is not None else None,
    )


EXAMPLE_ISOTROPY = ((-7, -2), (-5, -2), (-1, -1), (5, 1), (7, 2))
SQUARE_ISOTROPY = ((-1, 0), (0, 1), (1, 0))
HEXAGON_ISOTROPY = ((-1, 0), (0, 1), (1, 1), (1, 0))
