"""Exact integer and rational linear algebra.

Everything here works on plain Python ints (arbitrary precision) and
:class:`fractions.Fraction`; no floating point is used anywhere in this module.
Vectors are tuples of ints, matrices are tuples of row tuples.

Smoothness of a simplicial cone
-------------------------------
Let tau_1..tau_r in Z^d be linearly independent, V their real span and
L = V cap Z^d the saturated lattice. The lattice points of the real cone that
are *not* non-negative integer combinations of the tau_i are exactly the
translates of the nonzero points of the half-open parallelepiped
P = {sum c_i tau_i : 0 <= c_i < 1}, and |P cap Z^d| = [L : Z tau]. A basis of a
saturated sublattice extends to a basis of Z^d, so the gcd of its maximal minors
is 1, and the gcd of the maximal minors of tau is therefore [L : Z tau]. Hence

    cone is smooth  <=>  P cap Z^d = {0}  <=>  gcd of r x r minors of tau = 1.

Primitivity of every generator is implied by (and checked alongside) the minor
condition. :func:`cone_is_smooth` uses the minor criterion;
:func:`fundamental_parallelepiped_points` is the brute-force enumeration.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Rational = Fraction
IntVector = tuple
IntMatrix = tuple


class DimensionError(ValueError):
    """Matrix or vector shapes are inconsistent."""


class DependentGeneratorsError(ValueError):
    """Cone generators are linearly dependent over Q."""


def as_int_vector(v: Iterable) -> tuple[int, ...]:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            x = x.numerator
        if isinstance(x, bool) or int(x) != x:
            raise ValueError(f"non-integral entry {x!r}")
        out.append(int(x))
    return tuple(out)


def as_int_matrix(rows: Iterable[Iterable]) -> tuple[tuple[int, ...], ...]:
    m = tuple(as_int_vector(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise DimensionError("ragged matrix")
    return m


def transpose(rows: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(zip(*rows))


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionError(f"length mismatch {len(u)} != {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(r, v) for r in rows)


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, (abs(int(x)) for x in values), 0)


def content(v: Sequence[int]) -> int:
    """gcd of the entries; 0 for the zero vector."""
    return gcd_all(v)


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    c = content(v)
    if c == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // c for x in v)


def det(rows: Sequence[Sequence]) -> int | Fraction:
    """Exact determinant (Bareiss fraction-free elimination for ints)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for r in rows for x in r):
        return _det_fraction(rows)
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_fraction(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return result


def rank(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def solve_rational(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``rows @ x = rhs`` exactly; ``None`` when inconsistent.

    The system must have a unique solution when consistent (full column rank).
    """
    m = len(rows)
    if m != len(rhs):
        raise DimensionError("rhs length does not match row count")
    n = len(rows[0]) if m else 0
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][n] != 0 for i in range(r, m)):
        return None
    if r < n:
        raise DependentGeneratorsError("system does not have a unique solution")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return tuple(x)


# -- minors ------------------------------------------------------------------

def minor_determinants(omega: Sequence[Sequence[int]]) -> dict[tuple[int, ...], int]:
    """Every k x k column minor of a k x n matrix.

    Keys are ascending 0-based tuples of the *retained* columns.
    """
    omega = as_int_matrix(omega)
    k = len(omega)
    n = len(omega[0]) if k else 0
    if k > n:
        raise DimensionError(f"need k <= n, got {k} x {n}")
    cols = transpose(omega) if k else ()
    out = {}
    for idx in itertools.combinations(range(n), k):
        out[idx] = det(transpose([cols[i] for i in idx])) if k else 1
    return out


def deleted_minors(omega: Sequence[Sequence[int]], n: int | None = None) -> dict[tuple[int, ...], int]:
    """Minors keyed by the ascending 0-based tuple of *deleted* columns.

    ``n`` is only needed for the empty (k = 0) matrix.
    """
    omega = as_int_matrix(omega)
    if omega:
        n = len(omega[0])
    elif n is None:
        raise DimensionError("column count of an empty matrix must be given")
    k = len(omega)
    if k > n:
        raise DimensionError(f"need k <= n, got {k} x {n}")
    if not omega:
        return {tuple(d): 1 for d in itertools.combinations(range(n), n)}
    full = set(range(n))
    return {tuple(sorted(full - set(keep))): v for keep, v in minor_determinants(omega).items()}


def maximal_minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the r x r minors of an r x d integer matrix (r <= d)."""
    return gcd_all(minor_determinants(rows).values())


# -- Hermite normal form and kernels -----------------------------------------

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive and entries above each pivot lie in [0, pivot).
    """
    h, _ = _hnf_with_transform(as_int_matrix(rows))
    return tuple(r for r in h if any(r))


def _hnf_with_transform(a):
    a = [list(r) for r in a]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            g, s, t = xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            a[r], a[i] = ([s * x + t * y for x, y in zip(a[r], a[i])],
                          [-q * x + p * y for x, y in zip(a[r], a[i])])
            u[r], u[i] = ([s * x + t * y for x, y in zip(u[r], u[i])],
                          [-q * x + p * y for x, y in zip(u[r], u[i])])
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            f = a[i][c] // a[r][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                u[i] = [x - f * y for x, y in zip(u[i], u[r])]
        r += 1
    return [tuple(x) for x in a], [tuple(x) for x in u]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[tuple[int, ...], ...]:
    """A Z-basis of {x in Z^n : A x = 0}, in Hermite normal form."""
    a = as_int_matrix(a)
    if a:
        n = len(a[0])
    elif ncols is None:
        raise DimensionError("column count of an empty matrix must be given")
    else:
        n = ncols
    if not a or n == 0:
        return hermite_normal_form([[int(i == j) for j in range(n)] for i in range(n)]) if n else ()
    h, u = _hnf_with_transform(transpose(a))
    kernel = [u[i] for i in range(n) if not any(h[i])]
    return hermite_normal_form(kernel) if kernel else ()


# -- cones -------------------------------------------------------------------

def _check_independent(gens):
    if not gens:
        raise DependentGeneratorsError("no generators")
    if len({len(g) for g in gens}) != 1:
        raise DimensionError("generators of different lengths")
    if rank(gens) != len(gens):
        raise DependentGeneratorsError(f"generators {gens} are linearly dependent")


def cone_is_smooth(generators: Sequence[Sequence[int]]) -> bool:
    """Whether a simplicial cone's lattice points are the Z>=0 span of its generators."""
    gens = as_int_matrix(generators)
    _check_independent(gens)
    return all(is_primitive(g) for g in gens) and maximal_minor_gcd(gens) == 1


def _coefficients(gens, point):
    # gens independent, so picking rows of a nonzero maximal minor gives a square system
    cols = transpose(gens)  # d x r
    r = len(gens)
    for rows in itertools.combinations(range(len(cols)), r):
        sub = [cols[i] for i in rows]
        if det(sub) != 0:
            x = solve_rational(sub, [point[i] for i in rows])
            full = tuple(sum(c * g[j] for c, g in zip(x, gens)) for j in range(len(point)))
            return x if full == tuple(point) else None
    raise DependentGeneratorsError("generators are dependent")


def fundamental_parallelepiped_points(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All lattice points sum c_i tau_i with 0 <= c_i < 1 (brute force over the bounding box)."""
    gens = as_int_matrix(generators)
    _check_independent(gens)
    d = len(gens[0])
    lo = [sum(min(0, g[j]) for g in gens) for j in range(d)]
    hi = [sum(max(0, g[j]) for g in gens) for j in range(d)]
    out = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        c = _coefficients(gens, p)
        if c is not None and all(0 <= x < 1 for x in c):
            out.append(tuple(p))
    return sorted(out)


@dataclass(frozen=True)
class LatticeCone:
    """Cone R>=0 tau_1 + ... + R>=0 tau_r in R^d with integral generators."""

    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = as_int_matrix(self.generators)
        if not gens:
            raise ValueError("a cone needs at least one generator")
        if any(not any(g) for g in gens):
            raise ValueError("cone generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @property
    def dimension(self) -> int:
        """Ambient dimension d."""
        return len(self.generators[0])

    @property
    def is_simplicial(self) -> bool:
        return rank(self.generators) == len(self.generators)

    @property
    def is_strongly_convex(self) -> bool:
        """No line in the cone, i.e. 0 is not a proper convex combination of generators.

        Exact: by Caratheodory it suffices to test affinely independent subsets
        of at most d + 1 generators.
        """
        if self.is_simplicial:
            return True
        gens = self.generators
        d = self.dimension
        for size in range(2, min(len(gens), d + 1) + 1):
            for sub in itertools.combinations(gens, size):
                # sum l_i g_i = 0, sum l_i = 1
                rows = [list(col) for col in transpose(sub)] + [[1] * size]
                rhs = [0] * d + [1]
                try:
                    lam = solve_rational(rows, rhs)
                except DependentGeneratorsError:
                    continue
                if lam is not None and all(x >= 0 for x in lam):
                    return False
        return True

    @property
    def is_smooth(self) -> bool:
        return cone_is_smooth(self.generators)

    def parallelepiped_points(self) -> list[tuple[int, ...]]:
        return fundamental_parallelepiped_points(self.generators)
