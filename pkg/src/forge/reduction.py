"""Weight matrices of toric 3-Sasakian reductions.

A k x n integral matrix ``Omega`` defines a subtorus T^k of Sp(n); the quotient
of S^{4n-1} is smooth exactly when ``Omega`` is admissible. For n = k + 2 the
cohomology of the quotient is a fixed table apart from one torsion group whose
order is a weighted spanning-tree count, computed here two ways.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lattice as lat


class WeightMatrixError(ValueError):
    """Weight matrix fails a precondition (shape, degeneracy, admissibility)."""


@dataclass(frozen=True)
class WeightMatrix:
    """Integral k x n weight matrix. ``n`` must be given when k = 0."""

    rows: tuple
    n: int | None = None

    def __post_init__(self):
        rows = lat.as_int_matrix(self.rows)
        if rows:
            n = len(rows[0])
            if self.n is not None and self.n != n:
                raise WeightMatrixError(f"declared n = {self.n} but rows have length {n}")
        elif self.n is None:
            raise WeightMatrixError("n must be given for an empty weight matrix")
        else:
            n = self.n
        if len(rows) > n:
            raise WeightMatrixError(f"need k <= n, got {len(rows)} x {n}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n", n)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.k, self.n)

    def minors(self) -> dict[tuple[int, ...], int]:
        """k x k minors keyed by retained columns (0-based)."""
        if not self.rows:
            return {(): 1}
        return lat.minor_determinants(self.rows)

    def deleted_minors(self) -> dict[tuple[int, ...], int]:
        """k x k minors keyed by deleted columns (0-based)."""
        return lat.deleted_minors(self.rows, self.n)

    def determinantal_divisor(self) -> int:
        return lat.gcd_all(self.minors().values())

    def normal_form(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """``(a, b)`` when the matrix is ``[I_k | a | b]``, else ``None``."""
        if self.n != self.k + 2:
            return None
        for i, r in enumerate(self.rows):
            if any(r[j] != (i == j) for j in range(self.k)):
                return None
        return tuple(r[-2] for r in self.rows), tuple(r[-1] for r in self.rows)

    def act(self, g=None, perm=None, signs=None) -> "WeightMatrix":
        """Apply ``g`` in GL(k, Z) on the left and a signed column permutation."""
        rows = self.rows
        if g is not None:
            rows = tuple(tuple(sum(g[i][t] * rows[t][j] for t in range(self.k)) for j in range(self.n))
                         for i in range(self.k))
        if perm is not None:
            rows = tuple(tuple(r[p] for p in perm) for r in rows)
        if signs is not None:
            rows = tuple(tuple(s * x for s, x in zip(signs, r)) for r in rows)
        return WeightMatrix(rows, self.n)


def _as_wm(omega) -> WeightMatrix:
    return omega if isinstance(omega, WeightMatrix) else WeightMatrix(tuple(map(tuple, omega)))


def is_nondegenerate(omega) -> bool:
    return all(v != 0 for v in _as_wm(omega).minors().values())


def _require_nondegenerate(om):
    if not is_nondegenerate(om):
        zero = [tuple(i + 1 for i in key) for key, v in om.minors().items() if v == 0]
        raise WeightMatrixError(f"degenerate weight matrix: vanishing minors on columns {zero}")


def is_reduced(omega) -> bool:
    om = _as_wm(omega)
    _require_nondegenerate(om)
    return om.determinantal_divisor() == 1


def gcd_admissible(omega) -> bool:
    """The gcd condition alone: every k+1 columns have minors with gcd d."""
    om = _as_wm(omega)
    minors = om.minors()
    d = lat.gcd_all(minors.values())
    for cols in itertools.combinations(range(om.n), om.k + 1):
        g = lat.gcd_all(minors[sub] for sub in itertools.combinations(cols, om.k))
        if g != d:
            return False
    return True


def normal_form_admissible(a: Sequence[int], b: Sequence[int]) -> bool:
    """Fast criterion for ``[I | a | b]``: nonzero entries, coprime rows, no repeated row up to sign."""
    if any(x == 0 for x in itertools.chain(a, b)):
        return False
    if any(math.gcd(x, y) != 1 for x, y in zip(a, b)):
        return False
    for i, j in itertools.combinations(range(len(a)), 2):
        if (a[i], b[i]) in ((a[j], b[j]), (-a[j], -b[j])):
            return False
    return True


def is_admissible(omega, strict: bool = False) -> bool:
    """Nondegenerate and gcd-admissible.

    A degenerate matrix is reported as not admissible; with ``strict=True`` it
    raises :class:`WeightMatrixError` instead.
    """
    om = _as_wm(omega)
    if strict:
        _require_nondegenerate(om)
    verdict = is_nondegenerate(om) and gcd_admissible(om)
    nf = om.normal_form()
    if nf is not None:
        fast = normal_form_admissible(*nf)
        if fast != verdict:
            raise AssertionError(f"normal-form and gcd criteria disagree on {om.rows}")
    return verdict


# -- torsion ------------------------------------------------------------------

def _edge_weights(om):
    if om.n != om.k + 2:
        raise WeightMatrixError(f"torsion order needs n = k + 2, got {om.k} x {om.n}")
    return {e: abs(v) for e, v in om.deleted_minors().items()}


MAX_ENUMERATION_K = 8


def spanning_tree_sum(omega) -> int:
    """Sum over spanning trees of K_{k+2} of the product of |Delta_{s,t}| (enumeration)."""
    om = _as_wm(omega)
    w = _edge_weights(om)
    if om.k > MAX_ENUMERATION_K:
        raise WeightMatrixError(f"enumeration limited to k <= {MAX_ENUMERATION_K}")
    nv = om.n
    edges = sorted(w)
    total = 0
    for tree in itertools.combinations(edges, nv - 1):
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for s, t in tree:
            rs, rt = find(s), find(t)
            if rs == rt:
                ok = False
                break
            parent[rs] = rt
        if ok:
            total += math.prod(w[e] for e in tree)
    return total


def matrix_tree_sum(omega) -> int:
    """Same sum via the weighted Matrix-Tree theorem (a Laplacian cofactor)."""
    om = _as_wm(omega)
    w = _edge_weights(om)
    nv = om.n
    lap = [[0] * nv for _ in range(nv)]
    for (s, t), x in w.items():
        lap[s][t] -= x
        lap[t][s] -= x
        lap[s][s] += x
        lap[t][t] += x
    return int(lat.det([row[1:] for row in lap[1:]]))


CROSS_CHECK_K = 4


def torsion_order(omega) -> int:
    """Order of the torsion group in H^4 of the quotient.

    Uses the Matrix-Tree cofactor; for k <= 4 the explicit enumeration is run
    as well and the two are asserted equal.
    """
    om = _as_wm(omega)
    value = matrix_tree_sum(om)
    if om.k <= CROSS_CHECK_K:
        enum_value = spanning_tree_sum(om)
        if enum_value != value:
            raise AssertionError(f"tree enumeration {enum_value} != Matrix-Tree {value}")
    return value


@dataclass(frozen=True)
class CohomologyTable:
    betti: tuple
    torsion_order: int

    @property
    def b2(self) -> int:
        return self.betti[2]

    def rows(self) -> list[str]:
        out = []
        for p, b in enumerate(self.betti):
            if p == 4:
                out.append(f"H^4 = G (order {self.torsion_order})")
            else:
                out.append(f"H^{p} = " + ("0" if b == 0 else ("Z" if b == 1 else f"Z^{b}")))
        return out


def cohomology_table(omega) -> CohomologyTable:
    """Cohomology of the 7-dimensional quotient of a reduced admissible k x (k+2) matrix."""
    om = _as_wm(omega)
    if om.n != om.k + 2:
        raise WeightMatrixError(f"cohomology table needs n = k + 2, got {om.k} x {om.n}")
    if not is_admissible(om):
        raise WeightMatrixError("weight matrix is not admissible")
    if not is_reduced(om):
        raise WeightMatrixError("weight matrix is not reduced (d != 1)")
    k = om.k
    return CohomologyTable((1, 0, k, 0, 0, k, 0, 1), torsion_order(om))


# -- moment map ---------------------------------------------------------------

def moment_residual(omega, z, w, check_sphere: bool = True, tol: float = 1e-9) -> np.ndarray:
    """Components of the hyperkaehler moment map at ``u_l = z_l + w_l j``.

    Returns a (k, 3) array; row j holds the coefficients of the quaternion
    units (i, j, k) in ``mu^j = i A + 2 k B`` with
    ``A = sum a_l (|z_l|^2 - |w_l|^2)`` and ``B = sum a_l conj(w_l) z_l``.
    Since ``k B = i conj(B) j``, the three coefficients are
    ``(A, 2 Im B, 2 Re B)``.
    """
    om = _as_wm(omega)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape != (om.n,) or w.shape != (om.n,):
        raise WeightMatrixError(f"expected vectors of length {om.n}")
    if check_sphere:
        r2 = float(np.sum(np.abs(z) ** 2 + np.abs(w) ** 2))
        if abs(r2 - 1.0) > tol:
            raise ValueError(f"point not on the unit sphere (|u|^2 = {r2})")
    a = np.array(om.rows, dtype=float).reshape(om.k, om.n)
    A = a @ (np.abs(z) ** 2 - np.abs(w) ** 2)
    B = a @ (np.conj(w) * z)
    return np.stack([A, 2 * B.imag, 2 * B.real], axis=1)


def quotient_lattice_map(omega) -> tuple[tuple[int, ...], ...]:
    """Images ``q(e_l)`` of the standard basis under Z^n -> Z^{n-k} (kernel of Omega).

    This is raw material only; it is not claimed to give isotropy data.
    """
    om = _as_wm(omega)
    ker = lat.integer_kernel(om.rows, om.n) if om.rows else lat.integer_kernel((), om.n)
    return lat.transpose(ker)


EXAMPLE_OMEGA = ((1, 0, 1, 1), (0, 1, 1, 2))
