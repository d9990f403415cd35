"""Scalar cut-off kernels.

    ell(t)      = exp(-1/t) for t > 0, else 0
    lambda(t)   = (1/alpha) * int_0^t ell(3x) ell(3-3x) dx
    phi(t)      = int_0^{1/2+t} lambda(x) dx

``lambda`` is served from a cubic Hermite table built on the exact closed-form
derivative, and ``phi`` is the exact antiderivative of that table, so both
are cheap to evaluate on large arrays.  The table is validated against direct
adaptive quadrature when the context is built.

Every evaluator accepts floats, numpy arrays or :class:`~fatcw.dual.Dual`.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from . import dual as dl
from .quadrature import adaptive_gauss_legendre, fixed_gauss_legendre


def ell(t):
    """exp(-1/t) for t > 0 and 0 otherwise."""
    if isinstance(t, dl.Dual):
        v = ell(t.val)
        tv = np.where(t.val > 0, t.val, 1.0)
        return dl.Dual(v, np.where(t.val > 0, v / tv**2, 0.0) * t.der)
    t = np.asarray(t, dtype=float)
    pos = t > 0
    out = np.zeros_like(t)
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / t[pos])
    return out if out.ndim else float(out)


def bump_integrand(x):
    """ell(3x) * ell(3 - 3x), the unnormalised derivative of lambda."""
    return ell(3.0 * np.asarray(x, dtype=float)) * ell(3.0 - 3.0 * np.asarray(x, dtype=float))


_TAYLOR_CUTOFF = 1e-4


def s_func(x):
    """sin(pi x / 2) / x, with the removable singularity filled in by a series."""
    if isinstance(x, dl.Dual):
        xv = x.val
        small = np.abs(xv) < _TAYLOR_CUTOFF
        safe = np.where(small, 1.0, xv)
        h = 0.5 * np.pi
        exact_d = (h * np.cos(h * safe) * safe - np.sin(h * safe)) / safe**2
        # s'(x) ~ -(pi/2)^3 x / 3 near zero
        series_d = -(h**3) * xv / 3.0 + h**5 * xv**3 / 30.0
        return dl.Dual(s_func(xv), np.where(small, series_d, exact_d) * x.der)
    x = np.asarray(x, dtype=float)
    y = 0.5 * np.pi * x
    small = np.abs(x) < _TAYLOR_CUTOFF
    safe = np.where(small, 1.0, x)
    y2 = y * y
    series = 0.5 * np.pi * (1.0 - y2 / 6.0 + y2 * y2 / 120.0 - y2 * y2 * y2 / 5040.0)
    out = np.where(small, series, np.sin(0.5 * np.pi * safe) / safe)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SmoothingParams:
    """Collar-smoothing parameter; epsilon must lie in (0, 1/22)."""

    epsilon: float = 1.0 / 32.0

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0 / 22.0):
            raise ValueError(f"epsilon must lie in (0, 1/22), got {self.epsilon}")


class CacheValidationError(RuntimeError):
    pass


def _scalar_or_array(x):
    return x if np.ndim(x) else float(x)


@dataclass(frozen=True)
class KernelContext:
    """Immutable bundle of alpha and the lambda/phi tables.

    Build with :meth:`build` (or use :func:`default_context`).
    """

    alpha: float
    quad_tol: float
    cells: int
    lambda_table: np.ndarray = field(repr=False)  # lambda at nodes
    slope_table: np.ndarray = field(repr=False)  # lambda' at nodes
    phi_table: np.ndarray = field(repr=False)  # int_0^{node} lambda
    cache_error: float = 0.0

    @classmethod
    def build(cls, cells=2048, quad_tol=1e-12, order=20, validate=True, cache_budget=1e-10):
        nodes = np.linspace(0.0, 1.0, cells + 1)
        h = 1.0 / cells
        panel = fixed_gauss_legendre(bump_integrand, nodes[:-1], nodes[1:], order)
        cum = np.concatenate([[0.0], np.cumsum(panel)])
        alpha = float(cum[-1])
        lam = cum / alpha
        # symmetrise so lambda(t) + lambda(1-t) = 1 holds to rounding
        lam = 0.5 * (lam + 1.0 - lam[::-1])
        lam[0], lam[-1] = 0.0, 1.0
        slope = bump_integrand(nodes) / alpha
        cell_int = h * (lam[:-1] + lam[1:]) / 2 + h * h * (slope[:-1] - slope[1:]) / 12
        phi_nodes = np.concatenate([[0.0], np.cumsum(cell_int)])
        ctx = cls(
            alpha=alpha,
            quad_tol=quad_tol,
            cells=cells,
            lambda_table=lam,
            slope_table=slope,
            phi_table=phi_nodes,
        )
        if validate:
            err = ctx._validate(cache_budget)
            object.__setattr__(ctx, "cache_error", err)
        return ctx

    def _validate(self, budget):
        alpha_direct, _ = adaptive_gauss_legendre(bump_integrand, 0.0, 1.0, tol=self.quad_tol)
        if abs(alpha_direct - self.alpha) > budget * self.alpha:
            raise CacheValidationError(f"alpha mismatch {alpha_direct} vs {self.alpha}")
        probes = np.linspace(0.0, 1.0, 41)[1:-1] + 1.0 / (7.0 * self.cells)
        cached = self.lam(probes)
        direct = np.array([self.lam_direct(t) for t in probes])
        err = float(np.max(np.abs(cached - direct)))
        if err > budget:
            raise CacheValidationError(f"lambda cache error {err:.3e} exceeds {budget:.1e}")
        if abs(self.phi_table[-1] - 0.5) > budget:
            raise CacheValidationError("phi table does not close at 1/2")
        return err

    # -- table evaluation ------------------------------------------------
    def _locate(self, x):
        y = x * self.cells
        k = np.minimum(np.floor(y), self.cells - 1).astype(int)
        k = np.maximum(k, 0)
        return k, y - k

    def _hermite(self, x):
        k, s = self._locate(x)
        h = 1.0 / self.cells
        f0, f1 = self.lambda_table[k], self.lambda_table[k + 1]
        d0, d1 = self.slope_table[k], self.slope_table[k + 1]
        s2 = s * s
        s3 = s2 * s
        return (
            (2 * s3 - 3 * s2 + 1) * f0
            + (s3 - 2 * s2 + s) * h * d0
            + (-2 * s3 + 3 * s2) * f1
            + (s3 - s2) * h * d1
        )

    def _hermite_integral(self, x):
        k, s = self._locate(x)
        h = 1.0 / self.cells
        f0, f1 = self.lambda_table[k], self.lambda_table[k + 1]
        d0, d1 = self.slope_table[k], self.slope_table[k + 1]
        s2 = s * s
        s3 = s2 * s
        s4 = s3 * s
        part = (
            (s4 / 2 - s3 + s) * f0
            + (s4 / 4 - 2 * s3 / 3 + s2 / 2) * h * d0
            + (-s4 / 2 + s3) * f1
            + (s4 / 4 - s3 / 3) * h * d1
        )
        return self.phi_table[k] + h * part

    # -- public kernels --------------------------------------------------
    def lam(self, t):
        """lambda(t): 0 for t <= 0, 1 for t >= 1, smooth increasing between."""
        if isinstance(t, dl.Dual):
            return dl.Dual(self.lam(t.val), self.lam_prime(t.val) * t.der)
        t = np.asarray(t, dtype=float)
        x = np.clip(t, 0.0, 1.0)
        # clip the interpolant's rounding-level overshoot near the flat ends
        out = np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, np.clip(self._hermite(x), 0.0, 1.0)))
        return _scalar_or_array(out)

    def lam_prime(self, t):
        """Closed form ell(3t) ell(3-3t) / alpha."""
        if isinstance(t, dl.Dual):
            return dl.Dual(self.lam_prime(t.val), self.lam_second(t.val) * t.der)
        return _scalar_or_array(bump_integrand(t) / self.alpha)

    def lam_second(self, t):
        """(1-2t) / (3 t^2 (1-t)^2) * lambda'(t) on (0,1), 0 elsewhere."""
        t = np.asarray(t, dtype=float)
        inside = (t > 0) & (t < 1)
        ts = np.where(inside, t, 0.5)
        fac = (1 - 2 * ts) / (3 * ts**2 * (1 - ts) ** 2)
        out = np.where(inside, fac * bump_integrand(ts) / self.alpha, 0.0)
        return _scalar_or_array(out)

    def phi(self, t):
        """phi(t): 0 for t <= -1/2, t for t >= 1/2, int_0^{1/2+t} lambda between."""
        if isinstance(t, dl.Dual):
            return dl.Dual(self.phi(t.val), self.lam(0.5 + t.val) * t.der)
        t = np.asarray(t, dtype=float)
        x = np.clip(0.5 + t, 0.0, 1.0)
        mid = np.maximum(self._hermite_integral(x), 0.0)
        out = np.where(t <= -0.5, 0.0, np.where(t >= 0.5, t, mid))
        return _scalar_or_array(out)

    def lam_direct(self, t, tol=None):
        """lambda(t) by adaptive quadrature (no table); scalar only."""
        x = min(max(float(t), 0.0), 1.0)
        val, _ = adaptive_gauss_legendre(bump_integrand, 0.0, x, tol=tol or self.quad_tol)
        return val / self.alpha

    def lam_eps(self, params, t):
        e = params.epsilon
        return self.lam((t - e) / (1.0 - 2.0 * e))

    @property
    def lam_prime_max(self):
        """lambda'(1/2) = ell(3/2)^2 / alpha, the global maximum of lambda'."""
        return math.exp(-4.0 / 3.0) / self.alpha


def p_a(ctx, a, x):
    """phi(3x/2 - a) / x for x > 0; 0 near the origin (a > 1/2)."""
    if a <= 0.5:
        raise ValueError("p_a needs a > 1/2")
    xv = dl.value(x)
    pos = np.asarray(xv) > 0
    denom = dl.where(pos, x, 1.0)
    num = ctx.phi(1.5 * x - a)
    out = dl.where(pos, num / denom, 0.0)
    if not isinstance(out, dl.Dual):
        return _scalar_or_array(out)
    return out


def f_profile(ctx, params, t, x):
    """f(t, x) = x + t * lambda_eps(4 - 2x)."""
    return x + t * ctx.lam_eps(params, 4.0 - 2.0 * x)


def g_profile(ctx, params, t, x):
    """g(t, x) = x - t * lambda_eps(2x)."""
    return x - t * ctx.lam_eps(params, 2.0 * x)


@lru_cache(maxsize=None)
def default_context():
    return KernelContext.build()
