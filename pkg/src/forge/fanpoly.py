"""Augmented fans, support functions, polytopes and the per-fan invariants.

Conventions
-----------
* A fan is stored with its rays in the order the caller gave them. For n = 2
  the maximal cones are the consecutive pairs in counterclockwise angular
  order, exposed through :attr:`AugmentedFan.ccw_order` and
  :attr:`AugmentedFan.cones` (tuples of indices into ``rays``).
* ``h`` describes the polytope ``Sigma_h = {m : <m, n(rho)> >= h(n(rho))}``.
  The canonical support function is ``k == 1``, so ``Sigma_{-k}`` is the
  anticanonical polytope.
* Upper convex means ``h(n + n') >= h(n) + h(n')``, i.e. ``h`` is the minimum
  of the linear functions ``l_sigma``.

Only n = 2 is supported by the geometric operations (vertex enumeration,
shoelace integrals, symmetry search). A one dimensional fan (two opposite rays)
is accepted so that CP^1 can be lifted in :mod:`forge.sasaki`.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from . import lattice as lat


class FanError(ValueError):
    """The ray data does not define a valid augmented fan."""


class NotFanoError(ValueError):
    """The operation requires a Fano fan."""


class DegeneratePolytopeError(ValueError):
    """The polytope is empty or not full dimensional."""


class UnsupportedDimensionError(NotImplementedError):
    pass


# -- exact planar helpers -----------------------------------------------------

def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v):
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_ccw(vectors: Sequence, center=(0, 0)) -> list:
    """Sort planar points by exact angle around ``center``, starting at the +x axis."""
    rel = {i: (v[0] - center[0], v[1] - center[1]) for i, v in enumerate(vectors)}
    order = sorted(rel, key=cmp_to_key(lambda a, b: _angle_cmp(rel[a], rel[b])))
    return [vectors[i] for i in order]


def convex_hull(points: Iterable) -> list:
    """Vertices of the convex hull in ccw order (collinear points dropped)."""
    pts = sorted(set((Fraction(p[0]), Fraction(p[1])) for p in points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross((out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                                          (p[0] - out[-1][0], p[1] - out[-1][1])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 3 else hull


def _frac_pair(p):
    return (Fraction(p[0]), Fraction(p[1]))


# -- fans ---------------------------------------------------------------------

@dataclass(frozen=True)
class AugmentedFan:
    """A complete simplicial fan with a marked lattice point on every ray.

    Parameters
    ----------
    rays
        The marked points ``n(rho)``; they need not be primitive.
    cones
        Only needed for ``dim >= 3``. In dimensions 1 and 2 the cones are
        implied by the angular order.
    """

    rays: tuple
    dim: int | None = None
    cones_given: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        rays = lat.as_int_matrix(self.rays)
        if not rays:
            raise FanError("a fan needs at least one ray")
        d = len(rays[0])
        if self.dim is not None and self.dim != d:
            raise FanError(f"declared dim {self.dim} but rays have length {d}")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "dim", d)
        if self.cones_given is not None:
            object.__setattr__(self, "cones_given", tuple(tuple(c) for c in self.cones_given))

    # ordering and cones
    @property
    def ccw_order(self) -> tuple[int, ...]:
        if self.dim == 1:
            return tuple(sorted(range(len(self.rays)), key=lambda i: -self.rays[i][0]))
        if self.dim != 2:
            raise UnsupportedDimensionError("angular order only exists for n = 2")
        idx = list(range(len(self.rays)))
        return tuple(sorted(idx, key=cmp_to_key(lambda a, b: _angle_cmp(self.rays[a], self.rays[b]))))

    @property
    def cones(self) -> tuple[tuple[int, ...], ...]:
        if self.dim == 1:
            return tuple((i,) for i in range(len(self.rays)))
        if self.dim == 2:
            o = self.ccw_order
            return tuple((o[i], o[(i + 1) % len(o)]) for i in range(len(o)))
        if self.cones_given is None:
            raise UnsupportedDimensionError("cones must be given explicitly for n >= 3")
        return self.cones_given

    @property
    def ordered_rays(self) -> tuple:
        return tuple(self.rays[i] for i in self.ccw_order)

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def b2(self) -> int:
        """Second Betti number of the surface: #rays - dim."""
        return self.n_rays - self.dim

    def violations(self) -> list[str]:
        """Human readable list of violated fan axioms (empty when valid)."""
        out = []
        if any(not any(r) for r in self.rays):
            return ["zero ray"]
        if self.dim == 1:
            signs = sorted(1 if r[0] > 0 else -1 for r in self.rays)
            if signs != [-1, 1]:
                out.append("fan not complete" if len(set(signs)) == 1 else "rays with equal direction")
            return out
        if self.dim != 2:
            for c in self.cones:
                if lat.rank([self.rays[i] for i in c]) != len(c):
                    out.append(f"cone {c} not simplicial")
            return out
        prims = [lat.primitive(r) for r in self.rays]
        if len(set(prims)) != len(prims):
            out.append("rays with equal direction")
        if len(self.rays) < 3:
            out.append("fan not complete")
            return out
        o = self.ordered_rays
        for i in range(len(o)):
            u, v = o[i], o[(i + 1) % len(o)]
            if cross(u, v) <= 0 and lat.primitive(u) != lat.primitive(v):
                out.append("fan not complete")
                break
        return out

    @property
    def is_valid(self) -> bool:
        return not self.violations()

    def validate(self) -> "AugmentedFan":
        v = self.violations()
        if v:
            raise FanError("; ".join(v))
        return self

    def transform(self, gamma) -> "AugmentedFan":
        """Image of the fan under an integral matrix acting on N."""
        return AugmentedFan(tuple(lat.mat_vec(gamma, r) for r in self.rays))

    def primitive_rays(self) -> tuple:
        return tuple(lat.primitive(r) for r in self.rays)

    def labels(self) -> tuple[int, ...]:
        """Marking multiplicities a_rho (n(rho) = a_rho * primitive generator)."""
        return tuple(lat.content(r) for r in self.rays)


@dataclass(frozen=True)
class SupportFunction:
    """Values ``h(n(rho))`` on the marked points, in the fan's ray order."""

    values: tuple

    def __post_init__(self):
        vals = []
        for v in self.values:
            f = Fraction(v)
            vals.append(f.numerator if f.denominator == 1 else f)
        object.__setattr__(self, "values", tuple(vals))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __neg__(self):
        return SupportFunction(tuple(-v for v in self.values))

    def scale(self, c) -> "SupportFunction":
        return SupportFunction(tuple(c * v for v in self.values))

    def shift(self, fan: AugmentedFan, f) -> "SupportFunction":
        """``h + f`` for ``f`` in M: translates Sigma_h by ``f``."""
        return SupportFunction(tuple(v + lat.dot(f, r) for v, r in zip(self.values, fan.rays)))

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.values)


def _check_support(fan, h):
    if not isinstance(h, SupportFunction):
        h = SupportFunction(tuple(h))
    if len(h) != fan.n_rays:
        raise ValueError(f"support function has {len(h)} values for {fan.n_rays} rays")
    return h


def canonical_support(fan: AugmentedFan) -> SupportFunction:
    """``k`` with ``k(n(rho)) = 1`` on every ray; the anticanonical one is ``-k``."""
    return SupportFunction((1,) * fan.n_rays)


def anticanonical_support(fan: AugmentedFan) -> SupportFunction:
    return -canonical_support(fan)


def _require_2d(fan):
    if fan.dim != 2:
        raise UnsupportedDimensionError(f"only n = 2 is supported, got n = {fan.dim}")


def cone_linear_function(fan: AugmentedFan, h, cone) -> tuple[Fraction, Fraction]:
    """The ``l_sigma`` in M_Q agreeing with ``h`` on the generators of ``cone``."""
    i, j = cone
    sol = lat.solve_rational([fan.rays[i], fan.rays[j]], [h[i], h[j]])
    if sol is None:
        raise FanError(f"cone {cone} is degenerate")
    return sol


def is_strictly_upper_convex(fan: AugmentedFan, h) -> bool:
    """Whether ``h`` is upper convex with pairwise distinct ``l_sigma``.

    For each maximal cone the function ``l_sigma`` must be strictly larger
    than ``h`` on every ray outside the cone. On a complete planar fan this is
    the same as the check across each pair of adjacent cones, but it costs
    nothing to test globally.
    """
    _require_2d(fan)
    fan.validate()
    h = _check_support(fan, h)
    for cone in fan.cones:
        l = cone_linear_function(fan, h, cone)
        for r, (ray, hv) in enumerate(zip(fan.rays, h)):
            if r in cone:
                continue
            if lat.dot(l, ray) <= hv:
                return False
    return True


def is_fano(fan: AugmentedFan) -> bool:
    """Marked points are the vertices of a convex polygon containing 0 inside."""
    _require_2d(fan)
    if not fan.is_valid:
        return False
    o = fan.ordered_rays
    n = len(o)
    for i in range(n):
        a, b, c = o[i - 1], o[i], o[(i + 1) % n]
        if cross((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1])) <= 0:
            return False
    return True


def _require_fano(fan):
    if not is_fano(fan):
        v = fan.violations()
        raise NotFanoError("fan is not Fano" + (f" ({'; '.join(v)})" if v else ""))


# -- polytopes ----------------------------------------------------------------

@dataclass(frozen=True)
class RationalPolytope:
    """``{m : <m, normal_i> >= offset_i}`` with cached ccw vertices.

    ``labels[i]`` is the multiplicity of ``normals[i]`` over its primitive
    vector. ``vertices`` is empty for an empty polytope and has fewer than
    three entries when the polytope is a point or a segment.
    """

    normals: tuple
    offsets: tuple
    labels: tuple
    vertices: tuple

    @classmethod
    def from_halfplanes(cls, normals, offsets) -> "RationalPolytope":
        normals = lat.as_int_matrix(normals)
        offsets = tuple(Fraction(x) for x in offsets)
        if len(normals) != len(offsets):
            raise ValueError("normals and offsets differ in length")
        pts = set()
        for i, j in itertools.combinations(range(len(normals)), 2):
            if cross(normals[i], normals[j]) == 0:
                continue
            p = lat.solve_rational([normals[i], normals[j]], [offsets[i], offsets[j]])
            if all(lat.dot(p, nv) >= off for nv, off in zip(normals, offsets)):
                pts.add(p)
        verts = tuple(convex_hull(pts)) if len(pts) > 2 else _order_small(pts)
        labels = tuple(lat.content(nv) for nv in normals)
        return cls(normals, offsets, labels, verts)

    @classmethod
    def from_vertices(cls, vertices, labels=None) -> "RationalPolytope":
        """Polytope with the given vertices; facet normals are ``label * primitive inward normal``."""
        hull = convex_hull(vertices)
        if len(hull) < 3:
            raise DegeneratePolytopeError("vertices do not span a polygon")
        m = len(hull)
        if labels is None:
            labels = (1,) * m
        if len(labels) != m:
            raise ValueError(f"{len(labels)} labels for {m} edges")
        normals, offsets = [], []
        for i in range(m):
            p, q = hull[i], hull[(i + 1) % m]
            d = (q[0] - p[0], q[1] - p[1])
            den = math.lcm(d[0].denominator, d[1].denominator)
            nv = lat.primitive((-int(d[1] * den), int(d[0] * den)))
            nv = tuple(labels[i] * c for c in nv)
            normals.append(nv)
            offsets.append(lat.dot(p, nv))
        return cls(tuple(normals), tuple(offsets), tuple(int(a) for a in labels), tuple(hull))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.vertices) >= 3

    def contains(self, m, strict=False) -> bool:
        vals = [lat.dot(m, nv) - off for nv, off in zip(self.normals, self.offsets)]
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    def facets(self) -> list[int]:
        """Indices of constraints that are tight along an edge."""
        out = []
        m = len(self.vertices)
        if m < 3:
            return out
        for k, (nv, off) in enumerate(zip(self.normals, self.offsets)):
            tight = [lat.dot(v, nv) == off for v in self.vertices]
            if sum(tight) >= 2:
                out.append(k)
        return out

    def lattice_points(self) -> list[tuple[int, int]]:
        """``Sigma cap M``, i.e. the monomial basis of sections of the bundle."""
        if self.is_empty:
            return []
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        out = []
        for x in range(math.ceil(min(xs)), math.floor(max(xs)) + 1):
            for y in range(math.ceil(min(ys)), math.floor(max(ys)) + 1):
                if self.contains((x, y)):
                    out.append((x, y))
        return out

    def translate(self, f) -> "RationalPolytope":
        return RationalPolytope.from_halfplanes(
            self.normals, tuple(off + lat.dot(f, nv) for nv, off in zip(self.normals, self.offsets)))


def _order_small(pts):
    return tuple(sorted(pts))


def polytope_from_support(fan: AugmentedFan, h) -> RationalPolytope:
    """The (possibly empty) polytope ``Sigma_h``."""
    _require_2d(fan)
    h = _check_support(fan, h)
    return RationalPolytope.from_halfplanes(fan.rays, h.values)


def fan_from_polytope(poly: RationalPolytope) -> tuple[AugmentedFan, SupportFunction]:
    """Normal fan with markings ``n = label * primitive inward normal`` and ``h = offset``."""
    if not poly.is_full_dimensional:
        raise DegeneratePolytopeError("need a full dimensional polytope")
    idx = poly.facets()
    rays = tuple(poly.normals[k] for k in idx)
    h = SupportFunction(tuple(poly.offsets[k] for k in idx))
    return AugmentedFan(rays), h


# -- integrals ----------------------------------------------------------------

def _require_polygon(poly):
    if not poly.is_full_dimensional:
        raise DegeneratePolytopeError("polytope is empty or lower dimensional")


def volume(poly: RationalPolytope) -> Fraction:
    """Exact Euclidean area (0 for empty, point and segment)."""
    v = poly.vertices
    if len(v) < 3:
        return Fraction(0)
    s = sum(cross(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))
    return Fraction(abs(s), 2)


def barycenter(poly: RationalPolytope) -> tuple[Fraction, Fraction]:
    """Exact centroid from the shoelace moment formulas."""
    _require_polygon(poly)
    v = poly.vertices
    a = cx = cy = Fraction(0)
    for i in range(len(v)):
        p, q = v[i], v[(i + 1) % len(v)]
        c = cross(p, q)
        a += c
        cx += (p[0] + q[0]) * c
        cy += (p[1] + q[1]) * c
    a /= 2
    return (cx / (6 * a), cy / (6 * a))


# -- index and symmetry -------------------------------------------------------

def index(fan: AugmentedFan) -> int:
    """Largest ``m`` such that ``-k`` is divisible by ``m`` in the orbifold Picard group.

    ``m`` works iff some ``f`` in M has ``<f, n(rho)> = 1 (mod m)`` for every ray.
    Every integer relation ``sum c_rho n(rho) = 0`` then forces
    ``sum c_rho = 0 (mod m)``, so candidates are the divisors of the gcd of the
    coefficient sums over a kernel basis; each candidate is confirmed by
    searching ``f`` over ``(Z/m)^2``.
    """
    _require_2d(fan)
    _require_fano(fan)
    cols = lat.transpose(fan.rays)
    kernel = lat.integer_kernel(cols)
    g = lat.gcd_all(sum(c) for c in kernel)
    if g == 0:
        raise FanError("rays admit no relation with nonzero coefficient sum")
    for m in sorted((d for d in range(1, g + 1) if g % d == 0), reverse=True):
        if _index_witness(fan, m) is not None:
            return m
    raise AssertionError("m = 1 always admits a witness")


def _index_witness(fan, m):
    for f in itertools.product(range(m), repeat=2):
        if all((lat.dot(f, r) - 1) % m == 0 for r in fan.rays):
            return f
    return None


def index_witness(fan: AugmentedFan, m: int | None = None):
    """``(f, h)`` with ``m * h(n(rho)) = -1 + <f, n(rho)>``; ``m`` defaults to the index."""
    if m is None:
        m = index(fan)
    f = _index_witness(fan, m)
    if f is None:
        return None
    return f, SupportFunction(tuple((lat.dot(f, r) - 1) // m for r in fan.rays))


def unimodular_maps(src: Sequence, dst: Sequence) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """All ``gamma`` in GL(2, Z) mapping the point set ``src`` onto ``dst``.

    A map sending the points to each other is fixed by the images of two
    independent points, so the search is finite and exact.
    """
    src = [tuple(p) for p in src]
    dst_set = set(tuple(p) for p in dst)
    if len(src) != len(dst_set) or len(set(src)) != len(src):
        return []
    a = src[0]
    b = next((p for p in src[1:] if cross(a, p) != 0), None)
    if b is None:
        raise UnsupportedDimensionError("points do not span the plane")
    dab = cross(a, b)
    out = set()
    for ia, ib in itertools.permutations(dst_set, 2):
        if abs(cross(ia, ib)) != abs(dab):
            continue
        # gamma [a b] = [ia ib]  ->  gamma = [ia ib] adj([a b]) / det
        num = ((ia[0] * b[1] - ib[0] * a[1], -ia[0] * b[0] + ib[0] * a[0]),
               (ia[1] * b[1] - ib[1] * a[1], -ia[1] * b[0] + ib[1] * a[0]))
        if any(x % dab for row in num for x in row):
            continue
        g = tuple(tuple(x // dab for x in row) for row in num)
        if abs(g[0][0] * g[1][1] - g[0][1] * g[1][0]) != 1:
            continue
        if set(lat.mat_vec(g, p) for p in src) == dst_set:
            out.add(g)
    return sorted(out)


def symmetry_group(fan: AugmentedFan) -> list:
    """``W_0``: the elements of GL(2, Z) permuting the marked rays."""
    _require_2d(fan)
    return unimodular_maps(fan.rays, fan.rays)


NEG_ID = ((-1, 0), (0, -1))


def symmetry(fan: AugmentedFan) -> tuple[bool, bool]:
    """``(is_symmetric, is_special_symmetric)``."""
    group = symmetry_group(fan)
    stacked = [tuple(g[i][j] - (i == j) for j in range(2)) for g in group for i in range(2)]
    symmetric = lat.rank(stacked) == 2 if stacked else False
    return symmetric, NEG_ID in group


def fans_isomorphic(a: AugmentedFan, b: AugmentedFan) -> bool:
    """Whether some element of GL(2, Z) maps the marked rays of ``a`` onto those of ``b``."""
    _require_2d(a)
    _require_2d(b)
    return bool(unimodular_maps(a.rays, b.rays))


# -- verdict ------------------------------------------------------------------

class Verdict(enum.Enum):
    EINSTEIN = "Einstein"
    SOLITON_ONLY = "SolitonOnly"


@dataclass(frozen=True)
class FanoReport:
    is_fano: bool
    index: int
    is_symmetric: bool
    is_special_symmetric: bool
    barycenter: tuple
    volume: Fraction
    einstein: Verdict
    symmetry_order: int = 1

    @property
    def is_einstein(self) -> bool:
        return self.einstein is Verdict.EINSTEIN


def einstein_verdict(fan: AugmentedFan) -> FanoReport:
    """Einstein iff the Futaki invariant (barycenter of Sigma_{-k}) vanishes."""
    _require_2d(fan)
    _require_fano(fan)
    poly = polytope_from_support(fan, anticanonical_support(fan))
    bc = barycenter(poly)
    group = symmetry_group(fan)
    sym, special = symmetry(fan)
    return FanoReport(
        is_fano=True,
        index=index(fan),
        is_symmetric=sym,
        is_special_symmetric=special,
        barycenter=bc,
        volume=volume(poly),
        einstein=Verdict.EINSTEIN if bc == (0, 0) else Verdict.SOLITON_ONLY,
        symmetry_order=len(group),
    )


def anticanonical_polytope(fan: AugmentedFan) -> RationalPolytope:
    return polytope_from_support(fan, anticanonical_support(fan))


# -- named fans used throughout the tests and scripts -----------------------

SQUARE_RAYS = ((1, 0), (0, 1), (-1, 0), (0, -1))
HEXAGON_RAYS = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
CP2_RAYS = ((1, 0), (0, 1), (-1, -1))
OCTAGON_RAYS = ((1, 1), (5, 2), (7, 2), (5, 1), (-1, -1), (-5, -2), (-7, -2), (-5, -1))
F1_RAYS = ((1, 0), (0, 1), (0, -1), (-1, 1))


def named_fan(name: str) -> AugmentedFan:
    table = {"square": SQUARE_RAYS, "hexagon": HEXAGON_RAYS, "cp2": CP2_RAYS,
             "octagon": OCTAGON_RAYS, "f1": F1_RAYS}
    return AugmentedFan(table[name])
