"""Handle maps R^n x D^m -> D^{n,m} and their inverses.

    Phi(u, v)     = (alpha(|u|, |v|) u,     beta(|u|, |v|) v)
    Phi_hat(u, v) = (alpha_hat(|u|, |v|) u, beta(|u|, |v|) v)

with

    alpha     = 3/2 - p_1(|u|) (1 - cos(pi |v| / 2))
    alpha_hat = 3/2 - p_1(|u|) + p_2(|u|) cos(pi |v| / 2)
    beta      = 1 + phi(3|u|/2 - 1) s(|v|).

Both maps act radially, so inversion reduces to a 2x2 problem in the radii
(ru, rv) -> (X, Y) = (ru * alpha, rv * beta).  That problem is solved with a
damped Newton iteration on dual-number Jacobians; points where Newton stalls
fall back to nested bisection, which is guaranteed by the monotonicity of
Y in rv and of X along the level sets of Y.
"""

from dataclasses import dataclass

import numpy as np

from . import dual as dl
from .handle import BOUNDARY_TOL, HandleSpec, defect_radii
from .kernels import p_a, s_func

HALF_PI = 0.5 * np.pi


class NotInHandle(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class MapDiagnostics:
    jacobian_det: np.ndarray
    residual: np.ndarray
    newton_iters: np.ndarray
    used_fallback: np.ndarray


# -- radial coefficients -------------------------------------------------

def alpha_coef(ctx, u, v):
    return 1.5 - p_a(ctx, 1.0, u) * (1.0 - dl.cos(HALF_PI * v))


def alpha_hat_coef(ctx, u, v):
    return 1.5 - p_a(ctx, 1.0, u) + p_a(ctx, 2.0, u) * dl.cos(HALF_PI * v)


def beta_coef(ctx, u, v):
    return 1.0 + ctx.phi(1.5 * u - 1.0) * s_func(v)


def radial_phi(ctx, ru, rv):
    return ru * alpha_coef(ctx, ru, rv), rv * beta_coef(ctx, ru, rv)


def radial_phi_hat(ctx, ru, rv):
    return ru * alpha_hat_coef(ctx, ru, rv), rv * beta_coef(ctx, ru, rv)


_RADIAL = {"phi": radial_phi, "phi_hat": radial_phi_hat}


def radial_jacobian(ctx, ru, rv, kind="phi"):
    """Entries (dX/dru, dX/drv, dY/dru, dY/drv) of the radial map, by dual numbers."""
    f = _RADIAL[kind]
    ru = np.asarray(ru, dtype=float)
    rv = np.asarray(rv, dtype=float)
    ru, rv = np.broadcast_arrays(ru, rv)
    x1, y1 = f(ctx, dl.Dual.variable(ru), dl.Dual(rv, 0.0))
    x2, y2 = f(ctx, dl.Dual(ru, 0.0), dl.Dual.variable(rv))
    return dl.derivative(x1), dl.derivative(x2), dl.derivative(y1), dl.derivative(y2)


def radial_jacobian_det(ctx, ru, rv, kind="phi"):
    a, b, c, d = radial_jacobian(ctx, ru, rv, kind)
    return a * d - b * c


# -- full maps -----------------------------------------------------------

def _split(spec, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1:] != (spec.n,) and not (spec.n == 0 and u.size == 0):
        raise ValueError(f"u must have trailing dimension {spec.n}")
    if v.shape[-1:] != (spec.m,) and not (spec.m == 0 and v.size == 0):
        raise ValueError(f"v must have trailing dimension {spec.m}")
    ru = np.linalg.norm(u, axis=-1) if spec.n else np.zeros(v.shape[:-1])
    rv = np.linalg.norm(v, axis=-1) if spec.m else np.zeros(u.shape[:-1])
    return u, v, ru, rv


def _forward(ctx, spec, u, v, coef):
    u, v, ru, rv = _split(spec, u, v)
    if np.any(rv > 1.0 + 1e-12):
        raise DomainError("v must lie in the closed unit disk")
    a = coef(ctx, ru, rv)
    b = beta_coef(ctx, ru, rv)
    return np.asarray(a)[..., None] * u, np.asarray(b)[..., None] * v


def phi_map(ctx, spec, u, v):
    """Diffeomorphism R^n x D^m -> D^{n,m}.  Accepts batches (..., n), (..., m)."""
    return _forward(ctx, spec, u, v, alpha_coef)


def phi_hat_map(ctx, spec, u, v):
    """Smooth homeomorphism onto D^{n,m}, singular on |u| = 1."""
    return _forward(ctx, spec, u, v, alpha_hat_coef)


# -- radial inversion ----------------------------------------------------

def _newton(ctx, f, X, Y, ru, rv, max_iter, tol):
    ru = ru.copy()
    rv = rv.copy()
    iters = np.zeros(X.shape, dtype=int)
    active = np.ones(X.shape, dtype=bool)
    scale = 1.0 + np.abs(X) + np.abs(Y)

    def resid(a, b, idx):
        fx, fy = f(ctx, a, b)
        return fx - X[idx], fy - Y[idx]

    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        a, b = ru[idx], rv[idx]
        x1, y1 = f(ctx, dl.Dual.variable(a), dl.Dual(b, 0.0))
        x2, y2 = f(ctx, dl.Dual(a, 0.0), dl.Dual.variable(b))
        fx, fy = x1.val - X[idx], y1.val - Y[idx]
        r0 = np.hypot(fx, fy)
        done = r0 <= tol * scale[idx]
        active[idx[done]] = False
        keep = ~done
        if not keep.any():
            break
        idx, a, b, fx, fy, r0 = idx[keep], a[keep], b[keep], fx[keep], fy[keep], r0[keep]
        j11, j21 = x1.der[keep], y1.der[keep]
        j12, j22 = x2.der[keep], y2.der[keep]
        det = j11 * j22 - j12 * j21
        bad = np.abs(det) < 1e-300
        det = np.where(bad, 1.0, det)
        da = -(j22 * fx - j12 * fy) / det
        db = -(-j21 * fx + j11 * fy) / det
        step = np.ones(idx.size)
        new_a, new_b = a, b
        pending = np.ones(idx.size, dtype=bool)
        for _ in range(40):
            ca = np.maximum(a + step * da, 0.0)
            cb = np.clip(b + step * db, 0.0, 1.0)
            ga, gb = resid(ca, cb, idx)
            better = np.hypot(ga, gb) < r0
            take = pending & better
            new_a = np.where(take, ca, new_a)
            new_b = np.where(take, cb, new_b)
            pending &= ~better
            if not pending.any():
                break
            step = np.where(pending, 0.5 * step, step)
        stalled = pending | bad
        ru[idx] = new_a
        rv[idx] = new_b
        iters[idx] += 1
        active[idx[stalled]] = False
        # stalled points are handed to the fallback below
        iters[idx[stalled]] = -1
    fx, fy = f(ctx, ru, rv)
    ok = (np.hypot(fx - X, fy - Y) <= tol * scale) & (iters >= 0)
    return ru, rv, iters, ok


def _bisect(fun, target, lo, hi, iters=200):
    """Vectorised bisection for increasing ``fun`` with fun(lo) <= target <= fun(hi)."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        up = fun(mid) < target
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
        if np.all(hi - lo <= 4e-16 * np.maximum(1.0, hi)):
            break
    return 0.5 * (lo + hi)


def _solve_rv(ctx, f, ru, Y):
    """rv in [0, 1] with Y-radius equal to Y (clamped to the ends)."""
    lo = np.zeros_like(ru)
    hi = np.ones_like(ru)
    return _bisect(lambda r: f(ctx, ru, r)[1], Y, lo, hi, iters=80)


def _bisection_invert(ctx, f, X, Y):
    # Y(ru, 1) = 1 + phi(3ru/2 - 1) is the largest Y reachable at ru
    ru_floor = np.zeros_like(X)
    need = Y > 1.0
    if need.any():
        top = Y[need] / 1.5 + 2.0
        ru_floor[need] = _bisect(lambda r: 1.0 + ctx.phi(1.5 * r - 1.0), Y[need], np.zeros_like(top), top)

    def x_along(r):
        return f(ctx, r, _solve_rv(ctx, f, r, Y_cur))[0]

    Y_cur = Y
    hi = np.maximum(ru_floor, X / 1.5) + 1.0
    for _ in range(60):
        short = x_along(hi) < X
        if not short.any():
            break
        hi = np.where(short, ru_floor + 2.0 * (hi - ru_floor), hi)
    ru = _bisect(x_along, X, ru_floor, hi, iters=80)
    rv = _solve_rv(ctx, f, ru, Y)
    return ru, rv


def invert_radial(ctx, X, Y, kind="phi", max_iter=200, tol=1e-14):
    """Solve radial_<kind>(ru, rv) = (X, Y) for ru >= 0, rv in [0, 1]."""
    f = _RADIAL[kind]
    X = np.atleast_1d(np.asarray(X, dtype=float))
    Y = np.atleast_1d(np.asarray(Y, dtype=float))
    X, Y = np.broadcast_arrays(X, Y)
    X = X.copy()
    Y = Y.copy()
    ru0 = 2.0 * X / 3.0
    rv0 = np.minimum(Y, 1.0)
    wall = np.zeros(X.shape, dtype=bool)
    if kind == "phi_hat":
        # X >= 1 exactly when ru >= 1; start on the correct side of the wall
        beyond = X > 1.0 + 1e-12
        ru0 = np.where(beyond, np.maximum(ru0 + 0.5, 1.0), ru0)
        rv0 = np.where(beyond, 0.5, rv0)
        # images of the wall |u| = 1 have X = 1 and Y = rv + sin(pi rv / 2) / 2;
        # the map is flat there, so solve the profile directly
        wall = (np.abs(X - 1.0) <= 1e-12) & (Y <= 1.5 + 1e-12)
    ru, rv, iters, ok = _newton(ctx, f, X, Y, ru0, rv0, max_iter, tol)
    if wall.any():
        ru[wall] = 1.0
        rv[wall] = _bisect(lambda r: r + 0.5 * np.sin(HALF_PI * r), Y[wall],
                           np.zeros(wall.sum()), np.ones(wall.sum()))
        iters[wall] = 0
    fallback = ~ok & ~wall
    if fallback.any():
        a, b = _bisection_invert(ctx, f, X[fallback], Y[fallback])
        # polish; accept only if the residual does not grow
        pa, pb, _, pok = _newton(ctx, f, X[fallback], Y[fallback], a, b, 20, tol)
        fa, fb = f(ctx, a, b)
        ga, gb = f(ctx, pa, pb)
        use = np.hypot(ga - X[fallback], gb - Y[fallback]) <= np.hypot(fa - X[fallback], fb - Y[fallback])
        ru[fallback] = np.where(use, pa, a)
        rv[fallback] = np.where(use, pb, b)
    fx, fy = f(ctx, ru, rv)
    residual = np.hypot(fx - X, fy - Y)
    return ru, rv, iters, fallback, residual


def _inverse(ctx, spec, x, y, kind, coef, accept):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y, X, Y = _split(spec, x, y)
    batch = X.shape
    Xf = np.atleast_1d(X).reshape(-1)
    Yf = np.atleast_1d(Y).reshape(-1)
    if np.any(defect_radii(ctx, Xf, Yf) < -BOUNDARY_TOL):
        raise NotInHandle("point lies outside the fat handle")
    if spec.m == 0:
        # alpha = alpha_hat = 3/2 with v = 0
        ru, rv = Xf / 1.5, np.zeros_like(Xf)
        iters = np.zeros(Xf.shape, int)
        fallback = np.zeros(Xf.shape, bool)
        residual = np.zeros_like(Xf)
    elif spec.n == 0:
        # beta(0, rv) = 1
        ru, rv = np.zeros_like(Yf), Yf.copy()
        iters = np.zeros(Xf.shape, int)
        fallback = np.zeros(Xf.shape, bool)
        residual = np.zeros_like(Xf)
    else:
        ru, rv, iters, fallback, residual = invert_radial(ctx, Xf, Yf, kind)
        if np.any(~np.isfinite(residual)) or np.any(residual > accept * (1 + Xf + Yf)):
            raise NoConvergence(f"radial inversion failed, worst residual {np.nanmax(residual):.3e}")
    a = np.asarray(coef(ctx, ru, rv)).reshape(batch)
    b = np.asarray(beta_coef(ctx, ru, rv)).reshape(batch)
    u = x / a[..., None]
    v = y / b[..., None]
    det = radial_jacobian_det(ctx, ru, rv, kind) if spec.n and spec.m else np.full(ru.shape, np.nan)
    diag = MapDiagnostics(
        jacobian_det=np.asarray(det).reshape(batch),
        residual=residual.reshape(batch),
        newton_iters=iters.reshape(batch),
        used_fallback=fallback.reshape(batch),
    )
    return u, v, diag


def theta_map(ctx, spec, x, y, diagnostics=False):
    """Inverse of :func:`phi_map`.  Raises NotInHandle for points off the handle."""
    u, v, diag = _inverse(ctx, spec, x, y, "phi", alpha_coef, accept=1e-10)
    return (u, v, diag) if diagnostics else (u, v)


def phi_hat_inverse(ctx, spec, x, y, diagnostics=False):
    """Inverse of :func:`phi_hat_map`.

    The map is flat to all orders on |u| = 1, so parameters within roughly
    5e-3 of the wall have float-identical images; there the returned point is
    an exact preimage of the image but not necessarily the original parameter.
    """
    u, v, diag = _inverse(ctx, spec, x, y, "phi_hat", alpha_hat_coef, accept=1e-9)
    return (u, v, diag) if diagnostics else (u, v)


# -- Jacobian diagnostics ------------------------------------------------

def phi11_jacobian(ctx, u, v):
    """det d(x, y)/d(u, v) for the planar map Phi_{1,1}, by dual numbers."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)

    def f(a, b):
        ra, rb = dl.absolute(a), dl.absolute(b)
        return alpha_coef(ctx, ra, rb) * a, beta_coef(ctx, ra, rb) * b

    x1, y1 = f(dl.Dual.variable(u), dl.Dual(v, 0.0))
    x2, y2 = f(dl.Dual(u, 0.0), dl.Dual.variable(v))
    det = x1.der * y2.der - x2.der * y1.der
    return det if det.ndim else float(det)


def phi11_jacobian_fd(ctx, u, v, h=1e-6):
    """Central-difference counterpart of :func:`phi11_jacobian`."""
    spec = HandleSpec(1, 1)

    def f(a, b):
        x, y = phi_map(ctx, spec, np.atleast_1d(a)[..., None], np.atleast_1d(b)[..., None])
        return x[..., 0], y[..., 0]

    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    vp = np.minimum(v + h, 1.0)
    vm = np.maximum(v - h, -1.0)
    xa, ya = f(u + h, v)
    xb, yb = f(u - h, v)
    xc, yc = f(u, vp)
    xd, yd = f(u, vm)
    dxu, dyu = (xa - xb) / (2 * h), (ya - yb) / (2 * h)
    dxv, dyv = (xc - xd) / (vp - vm), (yc - yd) / (vp - vm)
    return dxu * dyv - dxv * dyu


def phi_hat_jacobian_defect(ctx, v, ru=1.0):
    """|det| of the radial Jacobian of Phi_hat at |u| = ru (zero on the wall)."""
    return np.abs(radial_jacobian_det(ctx, np.full(np.shape(v), ru, dtype=float), v, "phi_hat"))


def wall_profile(rv):
    """Y-radius of Phi_hat on |u| = 1: rv + sin(pi rv / 2) / 2, covering [0, 3/2]."""
    rv = np.asarray(rv, dtype=float)
    return rv + 0.5 * np.sin(HALF_PI * rv)
