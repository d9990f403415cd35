"""Worked example complexes.

* ``iota_complex``: the interval R / pi_set, a 1-cell D^{1,0} = R relative to
  the two endpoints {0, 1}.  Coordinate u = 2t - 1.
* ``tdn_complex``: R^n / pi^n_set, an n-cell D^{n,0} = R^n relative to the
  sphere S^{n-1}, attached by u -> u/|u|.
* ``fat_s2_complex``: a fat 2-sphere made of a 0-cell D^{0,2} (a disk) and a
  2-cell D^{2,0} = R^2 attached by h(u) = g(|u|) u/|u| with
  g(r) = 1/2 + exp((1 - r^2)/2)/2, smooth and strictly decreasing with
  g(1) = 1 and g -> 1/2.
* ``classical_sphere``: the thin sphere S^n from one 0-cell and one n-cell.
"""

import math

import numpy as np

from .cw import (
    BasePoint,
    BaseSpace,
    CellPoint,
    CellSpec,
    ClassicalCell,
    ComplexSpec,
    import_smooth_cw,
    load_cell_table,
)
from .handle import HandlePoint
from .kernels import ell

# -- the interval -------------------------------------------------------------

VERTICES = (BasePoint.of(0.0), BasePoint.of(1.0))


def _iota_attach(p):
    return VERTICES[0] if p.u[0] < 0 else VERTICES[1]


def _iota_preimage(b):
    if isinstance(b, BasePoint) and b.data in ((0.0,), (1.0,)):
        return HandlePoint(np.array([-1.5 if b.data[0] == 0.0 else 1.5]), np.zeros(0))
    return None


def iota_complex():
    base = BaseSpace(
        "endpoints",
        contains=lambda b: b.data in ((0.0,), (1.0,)),
        sample=lambda rng, k: [VERTICES[i] for i in rng.integers(0, 2, k)],
    )
    cell = CellSpec(1, "e1", 0, _iota_attach, _iota_preimage, note="endpoints")
    return ComplexSpec((cell,), base, "iota")


def iota_point(t):
    """The point of the interval with parameter t (not yet normalised)."""
    return CellPoint.of(1, "e1", [2.0 * t - 1.0])


def iota_parameter(p):
    """Inverse of :func:`iota_point` on normal forms: t in [0, 1]."""
    if isinstance(p, BasePoint):
        return p.data[0]
    return 0.5 * (p.point.u[0] + 1.0)


# -- R^n / pi^n_set -----------------------------------------------------------

def tdn_complex(n=2):
    def contains(b):
        return len(b.data) == n and abs(math.hypot(*b.data) - 1.0) <= 1e-9

    def sample(rng, k):
        x = rng.normal(size=(k, n))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        return [BasePoint(tuple(row)) for row in x]

    def attach(p):
        return BasePoint(tuple(p.u / p.ru))

    def preimage(b):
        if isinstance(b, BasePoint) and contains(b):
            return HandlePoint(1.5 * np.asarray(b.data), np.zeros(0))
        return None

    base = BaseSpace(f"S^{n - 1}", contains, sample)
    return ComplexSpec((CellSpec(n, "e", 0, attach, preimage, note="radial"),), base, f"TD^{n}")


def tdn_coords(p):
    """Coordinates in D^n of a normal-form point of R^n / pi^n_set."""
    if isinstance(p, BasePoint):
        return np.asarray(p.data, dtype=float)
    return p.point.u.copy()


# -- fat 2-sphere -------------------------------------------------------------

def g_decay(r):
    """Smooth, strictly decreasing, g(1) = 1, g(r) -> 1/2 as r -> infinity."""
    return 0.5 + 0.5 * np.exp(0.5 * (1.0 - np.asarray(r, dtype=float) ** 2))


def g_decay_inverse(s):
    """Inverse of :func:`g_decay` on (1/2, g(0)]."""
    return math.sqrt(max(0.0, 1.0 - 2.0 * math.log(2.0 * s - 1.0)))


def _radial_decay_builder(args):
    target = args[0] if args else "disk"

    def attach(p):
        return CellPoint(0, target, HandlePoint(np.zeros(0), float(g_decay(p.ru)) * p.u / p.ru))

    def preimage(q):
        if not (isinstance(q, CellPoint) and q.cell_id == target):
            return None
        s = q.point.rv
        if not 0.5 < s <= 1.0:
            return None
        r = g_decay_inverse(s)
        return HandlePoint(r * q.point.v / s, np.zeros(0))

    return attach, preimage


FAT_S2_TABLE = """\
# level cell_id m attach [args]
0 disk 2 none
2 cap 0 radial-decay disk
"""

BUILDERS = {"radial-decay": _radial_decay_builder}


def fat_s2_complex(table=FAT_S2_TABLE):
    return load_cell_table(table, BUILDERS, name="fat-S2")


def fat_s2_height(p):
    """Height tau: |v|^2 on the disk, g(|u|)^2 on the cap (agreeing across h)."""
    if p.cell_id == "disk":
        return p.point.rv ** 2
    return float(g_decay(p.point.ru)) ** 2


def fat_s2_margins(lower_cut=1.2, upper_cut=0.8):
    """Two-set cover of the fat sphere by the lower and upper parts of tau."""
    return {
        "lower": lambda p: float(ell(lower_cut - fat_s2_height(p))),
        "upper": lambda p: float(ell(fat_s2_height(p) - upper_cut)),
    }


# -- classical sphere ---------------------------------------------------------

def classical_sphere(n=2):
    point = CellPoint.of(0, "e0")
    cells = [ClassicalCell(0, "e0"), ClassicalCell(n, f"e{n}", lambda x: point)]
    return import_smooth_cw(cells, name=f"S^{n}")
