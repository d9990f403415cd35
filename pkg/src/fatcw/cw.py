"""Finite fat CW complexes as data.

A complex is a list of cells.  A cell of level n carries a handle D^{n,m}
and an attaching evaluator defined on its flange |u| >= 1, returning a point
of lower level (or of the base space).  Points are tagged: a
:class:`BasePoint` or a :class:`CellPoint`.  The normal form of a point
pushes flange points down through the attaching maps until they land in the
interior of some handle or in the base.
"""

from dataclasses import dataclass, field
import math
from typing import Any, Callable, Optional, Union

import numpy as np

from .handle import HandlePoint, HandleSpec, defect_radii

FLANGE_TOL = 1e-12
POINT_TOL = 1e-9


class InvalidPoint(ValueError):
    pass


class InvalidComplex(ValueError):
    pass


@dataclass(frozen=True)
class BasePoint:
    data: tuple

    @classmethod
    def of(cls, *coords):
        return cls(tuple(float(c) for c in coords))


@dataclass(frozen=True, eq=False)
class CellPoint:
    level: int
    cell_id: str
    point: HandlePoint

    @classmethod
    def of(cls, level, cell_id, u=(), v=()):
        return cls(level, cell_id, HandlePoint(np.asarray(u, float), np.asarray(v, float)))


ComplexPoint = Union[BasePoint, CellPoint]


def _euclid(a, b):
    return math.dist(a.data, b.data)


@dataclass(frozen=True)
class BaseSpace:
    """Descriptor of the base space A: membership, sampler and metric."""

    name: str
    contains: Callable[[BasePoint], bool]
    sample: Callable[[np.random.Generator, int], list]
    distance: Callable[[BasePoint, BasePoint], float] = _euclid


@dataclass(frozen=True)
class CellSpec:
    level: int
    cell_id: str
    m: int = 0
    attach: Optional[Callable[[HandlePoint], ComplexPoint]] = None
    # optional exact preimage on the flange, used by the interior tagger
    attach_preimage: Optional[Callable[[ComplexPoint], Optional[HandlePoint]]] = None
    note: str = ""

    def __post_init__(self):
        if self.level < 0 or self.m < 0:
            raise InvalidComplex(f"cell {self.cell_id}: negative dimension")
        if self.level >= 1 and self.attach is None:
            raise InvalidComplex(f"cell {self.cell_id} of level {self.level} needs an attaching map")
        if self.level == 0 and self.attach is not None:
            raise InvalidComplex(f"0-cell {self.cell_id} has an empty flange and takes no attaching map")

    @property
    def handle(self):
        """HandleSpec, or None for a bare point (level 0, m = 0)."""
        if self.level + self.m == 0:
            return None
        return HandleSpec(self.level, self.m)


@dataclass(frozen=True)
class ComplexSpec:
    cells: tuple
    base: Optional[BaseSpace] = None
    name: str = ""
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        index = {}
        for c in cells:
            if c.cell_id in index:
                raise InvalidComplex(f"duplicate cell id {c.cell_id!r}")
            index[c.cell_id] = c
        object.__setattr__(self, "_index", index)
        if not cells and self.base is None:
            raise InvalidComplex("a complex needs a base or at least one cell")
        if self.base is None and cells and min(c.level for c in cells) != 0:
            raise InvalidComplex("without a base the lowest cells must have level 0")

    @property
    def max_level(self):
        return max((c.level for c in self.cells), default=-1)

    def cell(self, cell_id):
        try:
            return self._index[cell_id]
        except KeyError:
            raise InvalidPoint(f"unknown cell {cell_id!r}") from None

    def cells_at(self, level):
        return [c for c in self.cells if c.level == level]


def check_point(spec, p, ctx=None):
    """Structural validation; with ``ctx`` also checks handle membership."""
    if isinstance(p, BasePoint):
        if spec.base is None:
            raise InvalidPoint("complex has no base space")
        if not spec.base.contains(p):
            raise InvalidPoint(f"{p} is not in the base {spec.base.name}")
        return
    if not isinstance(p, CellPoint):
        raise InvalidPoint(f"not a complex point: {p!r}")
    cell = spec.cell(p.cell_id)
    if p.level != cell.level:
        raise InvalidPoint(f"level {p.level} does not match cell {cell.cell_id} (level {cell.level})")
    if p.point.dims != (cell.level, cell.m):
        raise InvalidPoint(f"point dims {p.point.dims} do not match cell ({cell.level}, {cell.m})")
    if cell.level == 0 and p.point.rv > 1.0 + POINT_TOL:
        raise InvalidPoint("0-cell points must lie in the closed unit disk")
    if ctx is not None and cell.level >= 1 and cell.m >= 1:
        if defect_radii(ctx, p.point.ru, p.point.rv) < -POINT_TOL:
            raise InvalidPoint("point lies outside the fat handle")


def is_flange(p, tol=FLANGE_TOL):
    return isinstance(p, CellPoint) and p.level >= 1 and p.point.ru >= 1.0 - tol


def normalize(spec, p, ctx=None, tol=FLANGE_TOL):
    """Canonical representative: flange points are replaced by their attaching image."""
    check_point(spec, p, ctx)
    for _ in range(spec.max_level + 2):
        if not is_flange(p, tol):
            return p
        cell = spec.cell(p.cell_id)
        q = cell.attach(p.point)
        check_point(spec, q)
        if isinstance(q, CellPoint) and q.level >= p.level:
            raise InvalidComplex(f"cell {cell.cell_id} attaches to level {q.level} >= {p.level}")
        p = q
    raise InvalidComplex("normalisation did not terminate")  # pragma: no cover


def points_close(spec, a, b, tol=POINT_TOL):
    a = normalize(spec, a)
    b = normalize(spec, b)
    if isinstance(a, BasePoint) and isinstance(b, BasePoint):
        return spec.base.distance(a, b) <= tol
    if isinstance(a, CellPoint) and isinstance(b, CellPoint):
        if a.cell_id != b.cell_id:
            return False
        d = np.concatenate([a.point.u - b.point.u, a.point.v - b.point.v])
        return float(np.linalg.norm(d)) <= tol
    return False


def chart_coords(p):
    """(chart key, coordinate vector) used for distances between normal forms."""
    if isinstance(p, BasePoint):
        return ("base",), np.asarray(p.data, dtype=float)
    return ("cell", p.cell_id), np.concatenate([p.point.u, p.point.v])


def wdim_bound(spec):
    """max over levels k of (max_j m_k(j)) + k."""
    if not spec.cells:
        raise InvalidComplex("no cells")
    return max(c.m + c.level for c in spec.cells)


@dataclass(frozen=True)
class ClassicalCell:
    """A classical cell; ``attach`` maps unit vectors of S^{n-1} to points."""

    level: int
    cell_id: str
    attach: Optional[Callable[[np.ndarray], ComplexPoint]] = None


def import_smooth_cw(classical, base=None, name="imported"):
    """Thin complex whose attaching maps factor through u -> u/|u|."""
    cells = []
    for c in classical:
        if c.level == 0:
            cells.append(CellSpec(0, c.cell_id, 0, note="classical 0-cell"))
            continue

        def attach(p, _h=c.attach):
            return _h(p.u / p.ru)

        cells.append(CellSpec(c.level, c.cell_id, 0, attach, note="radial projection"))
    return ComplexSpec(tuple(cells), base, name)


def pi_set(t):
    """Clamp onto [0, 1]."""
    return np.clip(t, 0.0, 1.0) if np.ndim(t) else max(0.0, min(float(t), 1.0))


def pi_n_set(v):
    """Radial clamp of R^n onto the closed unit disk."""
    v = np.asarray(v, dtype=float)
    r = np.linalg.norm(v, axis=-1, keepdims=True)
    return np.where(r <= 1.0, v, v / np.where(r > 0, r, 1.0))


def nonreflexivity_witness(t, n=2, e=None):
    """Point of the curve pi_n((1 - sqrt(max(0, t))) e) and |d/dt| of its lift at t.

    The lift is continuous with constant branch e for t <= 0 but its speed
    blows up like t^{-1/2} as t -> 0+, which is what breaks smoothness of
    the composite in the thin model.
    """
    if not -1.0 < t < 1.0:
        raise ValueError("t must lie in (-1, 1)")
    e = np.eye(n)[0] if e is None else np.asarray(e, dtype=float)

    def lift(s):
        return (1.0 - math.sqrt(max(0.0, s))) * e

    point = pi_n_set(lift(t))
    if t <= 0:
        return point, 0.0
    h = 1e-3 * t
    slope = float(np.linalg.norm(lift(t + h) - lift(t - h)) / (2 * h))
    return point, slope


@dataclass(frozen=True)
class RegularityReport:
    """Sampling diagnostics only; not a proof of regularity."""

    cell_id: str
    samples: int
    collisions: int
    min_image_distance: float
    min_distance_ratio: float
    heuristic: bool = True

    @property
    def injective_on_samples(self):
        return self.collisions == 0


def sample_flange(cell, rng, k, r_max=3.0, v_max=None):
    """Random flange points (|u| in [1, r_max]) of a cell's handle."""
    n, m = cell.level, cell.m
    if n == 0:
        return []
    u = rng.normal(size=(k, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    u *= rng.uniform(1.0, r_max, size=(k, 1))
    if m:
        v = rng.normal(size=(k, m))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        v *= rng.uniform(0.0, v_max or 1.5, size=(k, 1))
    else:
        v = np.zeros((k, 0))
    return [HandlePoint(u[i], v[i]) for i in range(k)]


def sample_interior(cell, rng, k, ctx=None):
    """Random points of the handle with |u| < 1 (members only)."""
    n, m = cell.level, cell.m
    out = []
    while len(out) < k:
        if n:
            u = rng.normal(size=n)
            u *= rng.uniform() ** (1.0 / n) / np.linalg.norm(u)
        else:
            u = np.zeros(0)
        if m:
            v = rng.normal(size=m)
            rv_max = 1.0 if (n == 0 or ctx is None) else 1.5
            v *= rv_max * rng.uniform() ** (1.0 / m) / np.linalg.norm(v)
        else:
            v = np.zeros(0)
        p = HandlePoint(u, v)
        if n and m and ctx is not None and defect_radii(ctx, p.ru, p.rv) < 0:
            continue
        out.append(p)
    return out


def regularity_probe(spec, cell_id, samples=10_000, seed=0, collision_tol=1e-9, r_max=3.0):
    """Look for pairs of flange samples with (numerically) equal attaching images."""
    from scipy.spatial import cKDTree

    cell = spec.cell(cell_id)
    rng = np.random.Generator(np.random.Philox(seed))
    pts = sample_flange(cell, rng, samples, r_max)
    images = [normalize(spec, cell.attach(p)) for p in pts]
    dom = np.array([np.concatenate([p.u, p.v]) for p in pts])
    groups = {}
    for i, q in enumerate(images):
        key, x = chart_coords(q)
        groups.setdefault(key, []).append((i, x))
    collisions = 0
    min_dist = math.inf
    min_ratio = math.inf
    for members in groups.values():
        idx = np.array([i for i, _ in members])
        xs = np.array([x for _, x in members]).reshape(len(members), -1)
        if len(members) < 2:
            continue
        if xs.shape[1] == 0:
            collisions += len(members) - 1
            min_dist = 0.0
            min_ratio = 0.0
            continue
        dist, nn = cKDTree(xs).query(xs, k=2)
        d_img = dist[:, 1]
        d_dom = np.linalg.norm(dom[idx] - dom[idx[nn[:, 1]]], axis=1)
        hit = (d_img <= collision_tol) & (d_dom > collision_tol)
        collisions += int(hit.sum() // 2 + hit.sum() % 2)
        min_dist = min(min_dist, float(d_img.min()))
        ok = d_dom > 0
        if ok.any():
            min_ratio = min(min_ratio, float((d_img[ok] / d_dom[ok]).min()))
    return RegularityReport(cell_id, samples, collisions, min_dist, min_ratio)


def in_interior_skeleton(spec, p, ctx, tol=POINT_TOL):
    """Interior tag of a point: whether it lies in the union of the images of
    the open handles, computed on the normal form.

    Points in a handle's open interior are interior.  A point on a handle's
    boundary (or in the base) is interior only if some higher cell attaches
    an open-handle flange point onto it; that is checked through the cell's
    ``attach_preimage`` when available.  Heuristic for cells without one.
    """
    p = normalize(spec, p, ctx)
    if isinstance(p, CellPoint):
        cell = spec.cell(p.cell_id)
        if cell.m == 0:
            return True
        if cell.level == 0:
            if p.point.rv < 1.0 - tol:
                return True
        elif defect_radii(ctx, p.point.ru, p.point.rv) > tol:
            return True
    for cell in spec.cells:
        if cell.level == 0 or cell.attach_preimage is None:
            continue
        q = cell.attach_preimage(p)
        if q is None:
            continue
        if cell.m == 0 or defect_radii(ctx, q.ru, q.rv) > tol:
            return True
    return False


def load_cell_table(path_or_text, builders, base=None, name=""):
    """Parse a whitespace table ``level cell_id m attach [args...]``.

    ``builders`` maps an attach keyword to a factory ``(args) -> (attach,
    preimage)``; the keyword ``none`` marks cells without attaching maps.
    """
    text = path_or_text
    if "\n" not in str(path_or_text):
        with open(path_or_text) as fh:
            text = fh.read()
    cells = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        level, cell_id, m, kind, *args = line.split()
        attach = preimage = None
        if kind != "none":
            if kind not in builders:
                raise InvalidComplex(f"unknown attach kind {kind!r}")
            attach, preimage = builders[kind](args)
        cells.append(CellSpec(int(level), cell_id, int(m), attach, preimage, note=kind))
    return ComplexSpec(tuple(cells), base, name)
