"""The fat handle D^{n,m} and its distinguished subsets.

    D^{n,m} = {(u, v) in R^n x R^m : |u| >= 1 - phi(2 - |u| - |v|)}

The flange is the part with |u| >= 1 and its wall (the flange core) is
|u| = 1, |v| <= 3/2.  All predicates depend only on the radii, so most
functions here come in a radial, array-friendly form.
"""

from dataclasses import dataclass, field
import enum

import numpy as np

BOUNDARY_TOL = 1e-9


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class HandleSpec:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.n + self.m < 1:
            raise ValueError(f"invalid handle dimensions ({self.n}, {self.m})")

    @property
    def has_flange(self):
        return self.n >= 1


@dataclass(frozen=True)
class HandlePoint:
    """A point (u, v) of R^n x R^m with cached radii."""

    u: np.ndarray
    v: np.ndarray
    ru: float = field(init=False)
    rv: float = field(init=False)

    def __post_init__(self):
        u = np.atleast_1d(np.asarray(self.u, dtype=float)).reshape(-1)
        v = np.atleast_1d(np.asarray(self.v, dtype=float)).reshape(-1)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "ru", float(np.sqrt(u @ u)) if u.size else 0.0)
        object.__setattr__(self, "rv", float(np.sqrt(v @ v)) if v.size else 0.0)

    @classmethod
    def empty_u(cls, v):
        return cls(np.zeros(0), v)

    @classmethod
    def empty_v(cls, u):
        return cls(u, np.zeros(0))

    @classmethod
    def from_radii(cls, ru, rv, du, dv):
        return cls(ru * np.asarray(du, dtype=float), rv * np.asarray(dv, dtype=float))

    @property
    def dims(self):
        return (self.u.size, self.v.size)


def check_dims(spec, p):
    if p.dims != (spec.n, spec.m):
        raise DimensionMismatch(f"point has dims {p.dims}, handle is ({spec.n}, {spec.m})")


class RegionClass(enum.Enum):
    INTERIOR_OF_HANDLE = "interior"
    FLANGE = "flange"
    FLANGE_CORE = "flange-core"
    BOUNDARY_D = "boundary-d"
    BOUNDARY_S = "boundary-s"
    OUTSIDE = "outside"


_CODES = list(RegionClass)


def defect_radii(ctx, ru, rv):
    """|u| - 1 + phi(2 - |u| - |v|); nonnegative exactly on the handle."""
    return ru - 1.0 + ctx.phi(2.0 - ru - rv)


def defect(ctx, spec, p):
    check_dims(spec, p)
    if spec.m == 0:
        # phi(2 - r) >= 1 - r for every r, so the whole of R^n belongs
        return defect_radii(ctx, p.ru, 0.0)
    if spec.n == 0:
        return defect_radii(ctx, 0.0, p.rv)
    return float(defect_radii(ctx, p.ru, p.rv))


def classify_radii(ctx, spec, ru, rv, tol=BOUNDARY_TOL):
    """Vectorised classification; returns an integer array indexing RegionClass."""
    ru = np.asarray(ru, dtype=float)
    rv = np.asarray(rv, dtype=float)
    d = np.asarray(defect_radii(ctx, ru, rv))
    out = np.full(np.broadcast(ru, rv).shape, _CODES.index(RegionClass.INTERIOR_OF_HANDLE))
    on_wall = np.zeros(out.shape, dtype=bool)
    if spec.n >= 1:
        on_wall = np.abs(ru - 1.0) <= tol
    core = on_wall & (rv <= 1.5 + tol)
    rest = ~on_wall
    outside = rest & (d < -tol)
    bdry = rest & (np.abs(d) <= tol)
    flange = rest & ~outside & ~bdry & (ru > 1.0) if spec.n >= 1 else np.zeros(out.shape, bool)
    out[core] = _CODES.index(RegionClass.FLANGE_CORE)
    out[on_wall & ~core] = _CODES.index(RegionClass.BOUNDARY_S)
    out[outside] = _CODES.index(RegionClass.OUTSIDE)
    out[bdry] = _CODES.index(RegionClass.BOUNDARY_D)
    out[flange] = _CODES.index(RegionClass.FLANGE)
    return out


def classify(ctx, spec, p, tol=BOUNDARY_TOL):
    """Region tag of ``p``.  Wall tags win over boundary tags, which win over
    the open regions, so the tags partition the plane of radii."""
    check_dims(spec, p)
    return region_from_code(classify_radii(ctx, spec, p.ru, p.rv, tol))


def region_from_code(code):
    return _CODES[int(code)]


def region_code(region):
    return _CODES.index(region)


def boundary_radii(ctx, t):
    """Radii (1 - phi(-t), 1 + phi(t)) of the boundary point with |u| + |v| - 2 = t.

    Valid for t >= -1; t = -1 is the point on the v axis.
    """
    return 1.0 - ctx.phi(-np.asarray(t, dtype=float)), 1.0 + ctx.phi(np.asarray(t, dtype=float))


def boundary_point(ctx, spec, t, du, dv):
    if spec.n < 1 or spec.m < 1:
        raise ValueError("the boundary parametrisation needs n >= 1 and m >= 1")
    if t < -1.0:
        raise ValueError("boundary parameter t must be >= -1 (the u-radius would be negative)")
    du = np.asarray(du, dtype=float)
    dv = np.asarray(dv, dtype=float)
    if du.shape != (spec.n,) or dv.shape != (spec.m,):
        raise DimensionMismatch("direction vectors do not match the handle")
    ru, rv = boundary_radii(ctx, t)
    return HandlePoint(float(ru) * du / np.linalg.norm(du), float(rv) * dv / np.linalg.norm(dv))


@dataclass(frozen=True)
class InclusionReport:
    defect: float
    via_flange: bool  # |u| >= 1
    via_disk: bool  # |v| <= 1
    member: bool

    @property
    def applies(self):
        return self.via_flange or self.via_disk


def inclusion_witness(ctx, spec, p):
    """Check the two standard inclusions S^{n-1} x R^m and R^n x D^m of the handle."""
    check_dims(spec, p)
    d = defect(ctx, spec, p)
    via_flange = spec.n >= 1 and p.ru >= 1.0
    via_disk = p.rv <= 1.0
    member = d >= -BOUNDARY_TOL
    if (via_flange or via_disk) and not member:
        raise AssertionError(f"inclusion violated: defect {d:.3e} at radii ({p.ru}, {p.rv})")
    return InclusionReport(float(d), bool(via_flange), bool(via_disk), bool(member))
