"""Collar smoothing of a handle attachment, in radial coordinates.

The model boundary near a handle has two sheets:

* the flange side, points (u, v) with |u| = 1 and |v| = w >= 1, and
* the handle side, points (u', v') with |u'| = r <= 1 and |v'| = 1.

The collar parameter t in [-1/4, 1/4] pushes the boundary in or out; the map
``psi`` realises that push piecewise, and ``kappa`` is the height that rounds
off the corner r = w = 1.  The curve Psi(x, kappa(x)) is the smoothed
boundary profile.
"""

from dataclasses import dataclass
import enum

import numpy as np

from .kernels import SmoothingParams, f_profile, g_profile


class Side(enum.Enum):
    FAR_FIELD = "far-field"
    FLANGE = "flange"
    HANDLE = "handle"


class OutOfDomain(ValueError):
    pass


T_MAX = 0.25


@dataclass(frozen=True)
class CollarPoint:
    side: Side
    r: float
    w: float
    t: float
    du: tuple = (1.0,)
    dv: tuple = (1.0,)

    def __post_init__(self):
        if abs(self.t) > T_MAX + 1e-15:
            raise OutOfDomain(f"collar parameter {self.t} outside [-1/4, 1/4]")
        if self.side is Side.FLANGE and not (1.0 <= self.w <= 2.0 and self.r == 1.0):
            raise OutOfDomain("flange-side points need r = 1 and w in [1, 2]")
        if self.side is Side.HANDLE and not (0.0 <= self.r <= 1.0 and self.w == 1.0):
            raise OutOfDomain("handle-side points need w = 1 and r in [0, 1]")
        if self.side is Side.FAR_FIELD and self.w < 2.0:
            raise OutOfDomain("far-field points need w >= 2")


def piece_bounds(params):
    """Piece domains of the radial action on each side (closed where limits exist)."""
    e = params.epsilon
    return {
        Side.FLANGE: {1: ((4 - e) / 2, 2.0), 2: (1.5, 2.0), 3: (1.0, (3 + e) / 2)},
        Side.HANDLE: {1: ((1 - e) / 2, 1.0), 2: (0.0, 0.5), 3: (0.0, e / 2)},
    }


def flange_piece(ctx, params, piece, t, w):
    """New v-radius from flange piece ``piece`` (1, 2 or 3)."""
    if piece == 1:
        return np.asarray(w, dtype=float) + 0.0 * t
    if piece == 2:
        return f_profile(ctx, params, t, w)
    if piece == 3:
        return w + t
    raise ValueError(piece)


def handle_piece(ctx, params, piece, t, r):
    """New u-radius from handle piece ``piece`` (1, 2 or 3)."""
    if piece == 1:
        return r - t
    if piece == 2:
        return g_profile(ctx, params, t, r)
    if piece == 3:
        return np.asarray(r, dtype=float) + 0.0 * t
    raise ValueError(piece)


def flange_piece_index(params, w):
    w = np.asarray(w, dtype=float)
    e = params.epsilon
    return np.where(w <= (3 + e) / 2, 3, np.where(w >= (4 - e) / 2, 1, 2))


def handle_piece_index(params, r):
    r = np.asarray(r, dtype=float)
    e = params.epsilon
    return np.where(r >= (1 - e) / 2, 1, np.where(r <= e / 2, 3, 2))


def psi_radial(ctx, params, side, r, w, t):
    """Radial action of the collar map: returns new (r, w)."""
    r = np.asarray(r, dtype=float)
    w = np.asarray(w, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > T_MAX + 1e-15):
        raise OutOfDomain("collar parameter outside [-1/4, 1/4]")
    if side is Side.FAR_FIELD:
        return r + 0.0 * t, w + 0.0 * t
    if side is Side.FLANGE:
        if np.any(w < 1.0) or np.any(w > 2.0):
            raise OutOfDomain("flange-side w must lie in [1, 2]")
        k = flange_piece_index(params, w)
        out = np.select([k == 1, k == 2, k == 3],
                        [flange_piece(ctx, params, i, t, w) for i in (1, 2, 3)])
        return (1.0 - t) * r, out
    if side is Side.HANDLE:
        if np.any(r < 0.0) or np.any(r > 1.0):
            raise OutOfDomain("handle-side r must lie in [0, 1]")
        k = handle_piece_index(params, r)
        out = np.select([k == 1, k == 2, k == 3],
                        [handle_piece(ctx, params, i, t, r) for i in (1, 2, 3)])
        return out, (1.0 + t) * w
    raise OutOfDomain(side)


def psi_map(ctx, params, p):
    """Collar map on a :class:`CollarPoint`; returns full (u, v) vectors."""
    r, w = psi_radial(ctx, params, p.side, p.r, p.w, p.t)
    du = np.asarray(p.du, dtype=float)
    dv = np.asarray(p.dv, dtype=float)
    return float(r) * du / np.linalg.norm(du), float(w) * dv / np.linalg.norm(dv)


def kappa(ctx, side, r, w):
    """Corner height: phi(1 - w) on the flange, phi(r - 1) on the handle, 0 far out."""
    r = np.asarray(r, dtype=float)
    w = np.asarray(w, dtype=float)
    if side is Side.FAR_FIELD:
        return np.zeros(np.broadcast(r, w).shape) if np.ndim(r) or np.ndim(w) else 0.0
    if side is Side.FLANGE:
        if np.any(w < 1.0):
            raise OutOfDomain("flange-side w must be >= 1")
        return ctx.phi(1.0 - w)
    if side is Side.HANDLE:
        if np.any(r > 1.0) or np.any(r < 0.0):
            raise OutOfDomain("handle-side r must lie in [0, 1]")
        return ctx.phi(r - 1.0)
    raise OutOfDomain(side)


@dataclass(frozen=True)
class ProfileCurve:
    r: np.ndarray
    w: np.ndarray
    tags: np.ndarray  # e.g. "flange-2", "handle-1"

    def __len__(self):
        return len(self.r)

    @property
    def points(self):
        return np.column_stack([self.r, self.w])

    def max_step(self):
        return float(np.max(np.hypot(np.diff(self.r), np.diff(self.w))))


def _flange_profile(ctx, params, w):
    return psi_radial(ctx, params, Side.FLANGE, np.ones_like(w), w, kappa(ctx, Side.FLANGE, 1.0, w))


def _handle_profile(ctx, params, r):
    return psi_radial(ctx, params, Side.HANDLE, r, np.ones_like(r), kappa(ctx, Side.HANDLE, r, 1.0))


def smoothed_boundary_profile(ctx, params=None, samples=512, far_to=None):
    """Sample Psi(x, kappa(x)) from the far flange (w = 2) to the handle axis (r = 0)."""
    params = params or SmoothingParams()
    if samples < 16:
        raise ValueError("need at least 16 samples")
    half = samples // 2
    w = np.linspace(2.0, 1.0, half)
    r = np.linspace(1.0, 0.0, samples - half + 1)[1:]
    fr, fw = _flange_profile(ctx, params, w)
    hr, hw = _handle_profile(ctx, params, r)
    tags = [f"flange-{k}" for k in flange_piece_index(params, w)]
    tags += [f"handle-{k}" for k in handle_piece_index(params, r)]
    rr, ww = np.concatenate([fr, hr]), np.concatenate([fw, hw])
    if far_to is not None and far_to > 2.0:
        wf = np.linspace(far_to, 2.0, max(2, half // 4))[:-1]
        rr = np.concatenate([np.ones_like(wf), rr])
        ww = np.concatenate([wf, ww])
        tags = ["far-field"] * len(wf) + tags
    return ProfileCurve(rr, ww, np.array(tags))


def _unit_tangent(p0, p1, p2, h):
    # second-order one-sided difference; p0 is the junction point
    d = (-3 * p0 + 4 * p1 - p2) / (2 * h)
    return d / np.linalg.norm(d)


def junction_defects(ctx, params=None, h=1e-4):
    """|T_left - T_right| for unit tangents at each piece junction of the profile.

    Junctions are the flange piece boundaries, the corner r = w = 1 (where the
    flange and handle sheets meet) and the handle piece boundaries.  Tangents
    are oriented along the profile: w decreasing, then r decreasing.
    """
    params = params or SmoothingParams()
    e = params.epsilon

    def fl(w):
        r, ww = _flange_profile(ctx, params, np.asarray(w, dtype=float))
        return np.array([r, ww], dtype=float)

    def hd(r):
        rr, w = _handle_profile(ctx, params, np.asarray(r, dtype=float))
        return np.array([rr, w], dtype=float)

    out = {}
    for name, b in (("flange 1|2", (4 - e) / 2), ("flange 2|3", (3 + e) / 2)):
        p0 = fl(b)
        before = -_unit_tangent(p0, fl(b + h), fl(b + 2 * h), h)
        after = _unit_tangent(p0, fl(b - h), fl(b - 2 * h), h)
        out[name] = float(np.linalg.norm(before - after))
    p0 = fl(1.0)
    before = -_unit_tangent(p0, fl(1.0 + h), fl(1.0 + 2 * h), h)
    after = _unit_tangent(hd(1.0), hd(1.0 - h), hd(1.0 - 2 * h), h)
    out["corner"] = float(np.linalg.norm(before - after))
    out["corner gap"] = float(np.linalg.norm(p0 - hd(1.0)))
    for name, b in (("handle 1|2", (1 - e) / 2), ("handle 2|3", e / 2)):
        p0 = hd(b)
        before = -_unit_tangent(p0, hd(b + h), hd(b + 2 * h), h)
        after = _unit_tangent(p0, hd(b - h), hd(b - 2 * h), h)
        out[name] = float(np.linalg.norm(before - after))
    return out


def turning_rate(curve):
    """Max turning angle per unit arc length between consecutive segments."""
    d = np.diff(curve.points, axis=0)
    ds = np.linalg.norm(d, axis=1)
    keep = ds > 0
    d, ds = d[keep], ds[keep]
    ang = np.arctan2(d[:, 1], d[:, 0])
    turn = np.abs(np.angle(np.exp(1j * np.diff(ang))))
    return float(np.max(turn / (0.5 * (ds[1:] + ds[:-1]))))


@dataclass(frozen=True)
class MonotonicityReport:
    t_values: np.ndarray
    min_slope_f: np.ndarray
    min_slope_g: np.ndarray
    bound: np.ndarray

    @property
    def worst_margin(self):
        return float(np.min(np.minimum(self.min_slope_f, self.min_slope_g) - self.bound))

    def passed(self, tol=1e-6):
        return self.worst_margin >= -tol


def monotonicity_audit(ctx, params=None, t_values=None, x_grid=None):
    """Smallest finite-difference slopes of f(t, .) and g(t, .) against 1 - 4|t|."""
    params = params or SmoothingParams()
    t_values = np.linspace(-T_MAX, T_MAX, 9) if t_values is None else np.asarray(t_values, float)
    x = np.linspace(-0.5, 2.5, 30001) if x_grid is None else np.asarray(x_grid, float)
    mf, mg = [], []
    for t in t_values:
        if abs(t) > T_MAX + 1e-15:
            raise OutOfDomain("monotonicity is only claimed for |t| <= 1/4")
        fs = np.diff(f_profile(ctx, params, t, x)) / np.diff(x)
        gs = np.diff(g_profile(ctx, params, t, x)) / np.diff(x)
        mf.append(fs.min())
        mg.append(gs.min())
    return MonotonicityReport(t_values, np.array(mf), np.array(mg), 1.0 - 4.0 * np.abs(t_values))


def overlap_agreement(ctx, params=None, points=1000, t_values=None):
    """Largest disagreement between adjacent pieces on each overlap of their domains."""
    params = params or SmoothingParams()
    t_values = np.linspace(-T_MAX, T_MAX, 9) if t_values is None else np.asarray(t_values, float)
    bounds = piece_bounds(params)
    out = {}
    for side, fn in ((Side.FLANGE, flange_piece), (Side.HANDLE, handle_piece)):
        b = bounds[side]
        for i, j in ((1, 2), (2, 3)):
            lo = max(b[i][0], b[j][0])
            hi = min(b[i][1], b[j][1])
            x = np.linspace(lo, hi, points)
            worst = 0.0
            for t in t_values:
                worst = max(worst, float(np.max(np.abs(fn(ctx, params, i, t, x) - fn(ctx, params, j, t, x)))))
            out[f"{side.value} {i}&{j}"] = worst
    return out


def injectivity_check(ctx, params=None, t=0.1, samples=10_000, seed=0):
    """Minimum image distance among Psi(., t) samples from both sheets (radial plane)."""
    from scipy.spatial import cKDTree

    params = params or SmoothingParams()
    rng = np.random.Generator(np.random.Philox(seed))
    k = samples // 2
    w = np.sort(rng.uniform(1.0, 2.0, k))
    r = np.sort(rng.uniform(0.0, 1.0, samples - k))
    fr, fw = psi_radial(ctx, params, Side.FLANGE, np.ones_like(w), w, t)
    hr, hw = psi_radial(ctx, params, Side.HANDLE, r, np.ones_like(r), t)
    img = np.column_stack([np.concatenate([fr, hr]), np.concatenate([fw, hw])])
    dom = np.column_stack([np.concatenate([np.ones_like(w), r]), np.concatenate([w, np.ones_like(r)])])
    dist, idx = cKDTree(img).query(img, k=2)
    ratio = dist[:, 1] / np.linalg.norm(dom - dom[idx[:, 1]], axis=1)
    return float(dist[:, 1].min()), float(ratio.min())
