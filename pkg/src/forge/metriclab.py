"""Numerical checks of the Guillemin metric on a labelled polytope.

The polytope is ``Sigma = {y : l_k(y) = <y, u_k> - lambda_k >= 0}``. The
symplectic potential is ``G(y) = 1/2 sum_k l_k(y) log l_k(y)`` and its Legendre
dual ``F`` is the Kaehler potential on the open orbit, ``x = grad G(y)``.
Everything here is float64; the exact polytope data comes from
:mod:`forge.fanpoly`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from . import fanpoly as fp


class NewtonError(RuntimeError):
    """Newton iteration failed to converge."""


def _ext(q) -> np.longdouble:
    q = Fraction(q)
    return np.longdouble(q.numerator) / np.longdouble(q.denominator)


# a point whose line search cannot make progress is accepted below this residual
STALL_TOL = 1e-8


@dataclass(frozen=True)
class MetricLabConfig:
    # minimum cutoff; long facet normals push it up, see cutoff_radius
    R: float = 12.0
    grid: int = 200
    newton_tol: float = 1e-11
    max_iter: int = 200
    duality_tol: float = 1e-8


@dataclass
class MetricProblem:
    """Affine functions ``l_k(y) = <y, u_k> - lambda_k`` cutting out Sigma."""

    normals: np.ndarray
    lambdas: np.ndarray
    vertices: np.ndarray = field(default=None)
    config: MetricLabConfig = field(default_factory=MetricLabConfig)

    # extended precision copies, exact when built from rationals
    normals_ext: np.ndarray = field(default=None, repr=False)
    lambdas_ext: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.normals_ext is None:
            self.normals_ext = np.asarray(self.normals, dtype=np.longdouble)
        if self.lambdas_ext is None:
            self.lambdas_ext = np.asarray(self.lambdas, dtype=np.longdouble)
        self.normals = np.asarray(self.normals, dtype=float)
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        if self.vertices is not None:
            self.vertices = np.asarray(self.vertices, dtype=float)
        if self.normals.ndim != 2 or self.normals.shape[0] != self.lambdas.shape[0]:
            raise ValueError("normals must be (K, n) and lambdas (K,)")

    @classmethod
    def from_polytope(cls, poly: fp.RationalPolytope, config: MetricLabConfig | None = None):
        if not poly.is_full_dimensional:
            raise fp.DegeneratePolytopeError("metric lab needs a full dimensional polytope")
        idx = poly.facets()
        normals = [[Fraction(c) for c in poly.normals[i]] for i in idx]
        offsets = [Fraction(poly.offsets[i]) for i in idx]
        return cls(np.array([[float(c) for c in u] for u in normals]),
                   np.array([float(q) for q in offsets]),
                   np.array([[float(c) for c in v] for v in poly.vertices]),
                   config or MetricLabConfig(),
                   np.array([[_ext(c) for c in u] for u in normals], dtype=np.longdouble),
                   np.array([_ext(q) for q in offsets], dtype=np.longdouble))

    @classmethod
    def anticanonical(cls, fan: fp.AugmentedFan, config: MetricLabConfig | None = None):
        return cls.from_polytope(fp.anticanonical_polytope(fan), config)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def l(self, y) -> np.ndarray:
        """Facet values; longdouble input is evaluated in extended precision."""
        y = np.asarray(y)
        if y.dtype == np.longdouble:
            return y @ self.normals_ext.T - self.lambdas_ext
        return y.astype(float) @ self.normals.T - self.lambdas

    def l_infinity(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float) @ self.normals.sum(axis=0)

    def center(self) -> np.ndarray:
        if self.vertices is None:
            raise ValueError("vertices unknown")
        return self.vertices.mean(axis=0)

    def _interior(self, y):
        l = self.l(y)
        if np.any(l <= 0):
            raise ValueError("point is not in the interior of Sigma")
        return l

    # potentials ------------------------------------------------------------
    def potential_G(self, y):
        l = self._interior(y)
        return 0.5 * np.sum(l * np.log(l), axis=-1)

    def grad_G(self, y):
        l = self._interior(y)
        u = self.normals_ext if l.dtype == np.longdouble else self.normals
        return 0.5 * (1.0 + np.log(l)) @ u

    def hess_G(self, y):
        """Always float64, so the result can go straight into numpy.linalg."""
        l = self._interior(y).astype(float)
        u = self.normals
        return 0.5 * np.einsum("...k,ki,kj->...ij", 1.0 / l, u, u)

    # Legendre dual -----------------------------------------------------------
    def solve_moment(self, x):
        """Vectorised damped Newton for ``grad G(y) = x``.

        Returns ``(Y, resolved)``. A point is resolved when its residual is
        below ``newton_tol * (1 + |x|)``, or when the line search can no longer
        decrease ``G(y) - <x, y>`` and the residual is below ``STALL_TOL``.
        Far out in x the solution sits closer to the boundary than float64 can
        represent; such points stay unresolved.
        """
        X = np.atleast_2d(np.asarray(x, dtype=float))
        cfg = self.config
        Y = np.repeat(self.center()[None, :], X.shape[0], axis=0)
        active = np.ones(X.shape[0], dtype=bool)
        resolved = np.zeros(X.shape[0], dtype=bool)
        xnorm = 1 + np.linalg.norm(X, axis=-1)

        def phi(Yp, Xp):
            l = Yp @ self.normals.T - self.lambdas
            return 0.5 * np.sum(l * np.log(l), axis=-1) - np.sum(Xp * Yp, axis=-1)

        for _ in range(cfg.max_iter):
            ids = np.where(active)[0]
            if ids.size == 0:
                break
            Ya, Xa = Y[ids], X[ids]
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                l = Ya @ self.normals.T - self.lambdas
                g = 0.5 * (1.0 + np.log(l)) @ self.normals - Xa
                H = 0.5 * np.einsum("pk,ki,kj->pij", 1.0 / l, self.normals, self.normals)
                finite = np.isfinite(H).all(axis=(1, 2)) & np.isfinite(g).all(axis=1)
                step = np.zeros_like(Ya)
                if finite.any():
                    try:
                        step[finite] = -np.linalg.solve(H[finite], g[finite][..., None])[..., 0]
                    except np.linalg.LinAlgError:  # exactly singular in float64, far out
                        step[finite] = -(np.linalg.pinv(H[finite]) @ g[finite][..., None])[..., 0]
            res = np.linalg.norm(g, axis=-1)
            conv = finite & (res <= cfg.newton_tol * xnorm[ids])
            resolved[ids[conv]] = True
            active[ids[conv | ~finite]] = False
            todo = np.where(finite & ~conv)[0]
            if todo.size == 0:
                continue
            Yt, Xt, st = Ya[todo], Xa[todo], step[todo]
            f0 = phi(Yt, Xt)
            slope = np.sum(g[todo] * st, axis=-1)
            t = np.ones(todo.size)
            pending = np.ones(todo.size, dtype=bool)
            for _ in range(60):
                if not pending.any():
                    break
                pi = np.where(pending)[0]
                trial = Yt[pi] + t[pi, None] * st[pi]
                lt = trial @ self.normals.T - self.lambdas
                ok = np.all(lt > 0, axis=-1)
                if ok.any():
                    q = np.where(ok)[0]
                    r = pi[q]
                    fv = phi(trial[q], Xt[r])
                    armijo = fv <= f0[r] + 1e-4 * t[r] * slope[r]
                    # once the predicted decrease drowns in rounding, fall back
                    # to requiring a smaller gradient residual
                    tiny = -slope[r] < 1e-11 * (1 + np.abs(f0[r]))
                    gt = 0.5 * (1.0 + np.log(lt[q])) @ self.normals - Xt[r]
                    shrink = np.linalg.norm(gt, axis=-1) < res[todo[r]]
                    ok[q] = armijo | (tiny & shrink)
                t[pi[~ok]] *= 0.5
                pending[pi[ok]] = False
            moved = ~pending
            Y[ids[todo[moved]]] = Yt[moved] + t[moved, None] * st[moved]
            stuck = ids[todo[pending]]
            floor = res[todo[pending]] <= STALL_TOL * xnorm[stuck]
            resolved[stuck[floor]] = True
            active[stuck] = False
        left = np.where(active)[0]
        if left.size:
            with np.errstate(all="ignore"):
                l = Y[left] @ self.normals.T - self.lambdas
                res = np.linalg.norm(0.5 * (1.0 + np.log(l)) @ self.normals - X[left], axis=-1)
            resolved[left[res <= STALL_TOL * xnorm[left]]] = True
        return Y, resolved

    def polish(self, x, y, steps: int = 6) -> np.ndarray:
        """Iterative refinement of ``grad G(y) = x`` in longdouble.

        Near the boundary the closest float64 point can leave a residual of
        order 1e-9, because Hess G grows like 1/l. Residuals are computed in
        extended precision and corrections solved in float64; a step is only
        kept where it lowers the residual and stays inside Sigma.
        """
        X = np.atleast_2d(np.asarray(x, dtype=np.longdouble))
        Y = np.atleast_2d(np.asarray(y)).astype(np.longdouble)

        def residual(Yp, Xp):
            l = self.l(Yp)
            return 0.5 * (1.0 + np.log(l)) @ self.normals_ext - Xp

        r = residual(Y, X)
        rn = np.linalg.norm(r.astype(float), axis=-1)
        for _ in range(steps):
            H = self.hess_G(Y)
            d = np.linalg.solve(H, r.astype(float)[..., None])[..., 0]
            trial = Y - d.astype(np.longdouble)
            inside = np.all(self.l(trial) > 0, axis=-1)
            with np.errstate(all="ignore"):
                rt = residual(np.where(inside[:, None], trial, Y), X)
            rtn = np.linalg.norm(rt.astype(float), axis=-1)
            better = inside & (rtn < rn)
            if not better.any():
                break
            Y[better], r[better], rn[better] = trial[better], rt[better], rtn[better]
        return Y

    def moment(self, x) -> np.ndarray:
        """``y`` in the interior of Sigma with ``grad G(y) = x``; raises if unresolved.

        The result is longdouble (see :meth:`polish`).
        """
        x = np.asarray(x, dtype=float)
        Y, ok = self.solve_moment(x)
        if not ok.all():
            X = np.atleast_2d(x)
            bad = np.where(~ok)[0]
            with np.errstate(all="ignore"):
                l = Y[bad] @ self.normals.T - self.lambdas
                resid = np.linalg.norm(0.5 * (1.0 + np.log(l)) @ self.normals - X[bad], axis=-1)
            raise NewtonError(f"Newton did not converge at {bad.size} points "
                              f"(max residual {np.nanmax(resid):.3e}, min l {np.min(l):.3e})")
        Y = self.polish(np.atleast_2d(x), Y)
        return Y[0] if x.ndim == 1 else Y

    def potential_F(self, x):
        y = self.moment(x)
        return np.sum(np.asarray(x) * y, axis=-1) - self.potential_G(y)

    def hess_F(self, x):
        return np.linalg.inv(self.hess_G(self.moment(x)))


@dataclass
class VolumeEstimate:
    value: float
    R: float
    grid: int
    unresolved: int
    unresolved_mass: float


# unresolved quadrature points must lie this close to the boundary of Sigma
UNRESOLVED_L_MAX = 1e-8


# rough log of the tail prefactor, fitted on the long-normal examples
_TAIL_OFFSET = 3.0


def cutoff_radius(problem: MetricProblem, layer: float = 1e-3) -> float:
    """Half width of the quadrature box so the cut-off tail is about ``layer`` of the area.

    Near facet k the moment map behaves like ``x ~ u_k log(l_k) / 2``, so the
    mass outside the box decays like ``exp(-2 R / |u_k|)``. Never below
    ``config.R``.
    """
    umax = float(np.max(np.linalg.norm(problem.normals, axis=1)))
    return max(problem.config.R, 0.5 * umax * (math.log(1.0 / layer) + _TAIL_OFFSET))


def volume_estimate(problem: MetricProblem, R: float | None = None, grid: int | None = None) -> VolumeEstimate:
    """Midpoint-grid quadrature of ``det Hess F`` over a box of half width R.

    ``R`` defaults to :func:`cutoff_radius`.

    The box is centred at ``grad G`` of the vertex average. Points whose
    preimage lies within float resolution of the boundary are kept with their
    (negligible) integrand value and counted in ``unresolved``; any other
    Newton failure raises :class:`NewtonError`.
    """
    R = cutoff_radius(problem) if R is None else R
    grid = problem.config.grid if grid is None else grid
    n = problem.dim
    x0 = problem.grad_G(problem.center())
    h = 2 * R / grid
    axes = [x0[i] - R + h * (np.arange(grid) + 0.5) for i in range(n)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    ys, ok = problem.solve_moment(pts)
    with np.errstate(all="ignore"):
        l = ys @ problem.normals.T - problem.lambdas
        vals = 1.0 / np.linalg.det(0.5 * np.einsum("pk,ki,kj->pij", 1.0 / l, problem.normals, problem.normals))
    vals = np.where(np.isfinite(vals), vals, 0.0)
    bad = ~ok
    if bad.any():
        lmin = np.min(np.where(l > 0, l, 0.0)[bad], axis=-1)
        if np.any(lmin > UNRESOLVED_L_MAX):
            raise NewtonError(f"Newton failed at {int(np.sum(lmin > UNRESOLVED_L_MAX))} interior quadrature points")
    mass = float(np.sum(vals[bad]) * h ** n) if bad.any() else 0.0
    return VolumeEstimate(float(np.sum(vals) * h ** n), R, grid, int(bad.sum()), mass)  # np.sum is pairwise


def numeric_volume(problem: MetricProblem, R: float | None = None, grid: int | None = None) -> float:
    return volume_estimate(problem, R, grid).value


# -- soliton ----------------------------------------------------------------------

def exp_divided_difference(nodes) -> float:
    """``exp[a_0, ..., a_m]`` from the exponential of the bidiagonal node matrix."""
    a = np.asarray(nodes, dtype=float)
    m = a.size
    J = np.diag(a) + np.diag(np.ones(m - 1), -1)
    return float(expm(J)[m - 1, 0])


def _cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _triangles(vertices):
    v = np.asarray(vertices, dtype=float)
    return [(v[0], v[i], v[i + 1]) for i in range(1, len(v) - 1)]


def exp_moments(vertices, b):
    """``(Z, first, second)``: integrals of e^{<b,y>}, y e^{<b,y>} and y y^T e^{<b,y>} over the polygon."""
    b = np.asarray(b, dtype=float)
    Z = 0.0
    first = np.zeros(2)
    second = np.zeros((2, 2))
    for tri in _triangles(vertices):
        p = np.array(tri)
        area2 = abs(_cross2(p[1] - p[0], p[2] - p[0]))  # = 2 * area
        a = p @ b
        Z += area2 * exp_divided_difference(a)
        for i in range(3):
            first += area2 * exp_divided_difference(np.append(a, a[i])) * p[i]
            for j in range(3):
                c = exp_divided_difference(np.append(a, [a[i], a[j]])) * (2 if i == j else 1)
                second += area2 * c * np.outer(p[i], p[j])
    return Z, first, second


@dataclass
class SolitonResult:
    b: np.ndarray
    residual: float
    iterations: int
    converged: bool


def soliton_vector(vertices, tol: float = 1e-12, max_iter: int = 100) -> SolitonResult:
    """Minimise ``log int_Sigma e^{<b,y>} dy``; the minimiser has ``int y e^{<b,y>} = 0``."""
    verts = np.asarray([[float(c) for c in v] for v in vertices])
    b = np.zeros(2)
    Z, m1, m2 = exp_moments(verts, b)
    res = float(np.linalg.norm(m1 / Z))
    for it in range(1, max_iter + 1):
        if res < tol:
            return SolitonResult(b, res, it - 1, True)
        mean = m1 / Z
        cov = m2 / Z - np.outer(mean, mean)
        step = -np.linalg.solve(cov, mean)
        f0 = math.log(Z)
        t = 1.0
        while t > 1e-12:
            Zt, m1t, m2t = exp_moments(verts, b + t * step)
            if math.log(Zt) <= f0 + 1e-4 * t * float(mean @ step) + 1e-15 * abs(f0):
                break
            t *= 0.5
        b = b + t * step
        Z, m1, m2 = Zt, m1t, m2t
        res = float(np.linalg.norm(m1 / Z))
    if res < tol:
        return SolitonResult(b, res, max_iter, True)
    raise NewtonError(f"soliton solve did not converge (residual {res:.3e})")


def futaki_quadrature(vertices) -> np.ndarray:
    """Barycenter by fan triangulation with per-triangle centroids."""
    tot = 0.0
    acc = np.zeros(2)
    for tri in _triangles(vertices):
        p = np.array(tri)
        area = 0.5 * abs(_cross2(p[1] - p[0], p[2] - p[0]))
        tot += area
        acc += area * p.mean(axis=0)
    return acc / tot
