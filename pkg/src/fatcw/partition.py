"""Smooth partitions of unity on finite fat CW complexes.

The construction is inductive over levels.  Base points and 0-cells use the
Shepard weights of the margins.  On a cell of level n >= 1 two families are
blended across the collar 1 - delta <= |u| <= 1:

    sigma_check_U = chi_1 * sigma_hat_U + chi_2 * rho_hat_U
    sigma_U       = sigma_check_U / sum_V sigma_check_V

with chi_2 = lambda((|u| - (1 - delta)) / delta) and chi_1 = 1 - chi_2.
``rho_hat`` extends the pulled-back lower partition rho_U o h from the
flange into the handle, and ``sigma_hat`` is the intrinsic handle partition.
Both are Shepard quotients of the margins pulled back along the
characteristic map; ``sharpness`` raises the margins in ``sigma_hat`` to a
power, which changes the interior while leaving the flange untouched.
"""

from dataclasses import dataclass

import numpy as np

from .cw import BasePoint, CellPoint, normalize


class NotACover(ValueError):
    pass


class BlendDegenerate(ValueError):
    pass


@dataclass(frozen=True)
class MarginCover:
    """Open cover U = {margin_U > 0} given by smooth nonnegative margins."""

    set_ids: tuple
    margins: tuple

    @classmethod
    def from_dict(cls, margins):
        return cls(tuple(margins), tuple(margins.values()))

    def values(self, p):
        return np.array([m(p) for m in self.margins], dtype=float)


@dataclass(frozen=True)
class CellComponents:
    chi1: float
    chi2: float
    sigma_hat: np.ndarray
    rho_hat: np.ndarray
    sigma_check: np.ndarray
    sigma: np.ndarray


def _shepard(weights, where):
    total = weights.sum()
    if not total > 0:
        raise NotACover(f"margins vanish simultaneously at {where}")
    return weights / total


class PartitionOfUnity:
    """Evaluable partition subordinate to a :class:`MarginCover`."""

    def __init__(self, ctx, spec, cover, collar_delta=0.25, sharpness=1.0):
        if not 0 < collar_delta < 1:
            raise ValueError("collar_delta must lie in (0, 1)")
        self.ctx = ctx
        self.spec = spec
        self.cover = cover
        self.delta = collar_delta
        self.sharpness = sharpness

    @property
    def set_ids(self):
        return self.cover.set_ids

    def chi(self, ru):
        chi2 = float(self.ctx.lam((ru - (1.0 - self.delta)) / self.delta))
        return 1.0 - chi2, chi2

    def _pulled_margins(self, cell, q):
        # margins composed with the characteristic map of the cell
        p = normalize(self.spec, CellPoint(cell.level, cell.cell_id, q))
        return self.cover.values(p), p

    def components(self, cell_id, q):
        """All blend ingredients at handle point ``q`` of a cell of level >= 1
        (flange points allowed)."""
        cell = self.spec.cell(cell_id)
        if cell.level == 0:
            raise ValueError("0-cells carry the plain Shepard partition")
        w, p = self._pulled_margins(cell, q)
        rho_hat = _shepard(w, p)
        sigma_hat = _shepard(w**self.sharpness, p)
        chi1, chi2 = self.chi(q.ru)
        check = chi1 * sigma_hat + chi2 * rho_hat
        total = check.sum()
        if not total > 0:
            raise BlendDegenerate(f"blended weights vanish in cell {cell_id}; shrink collar_delta")
        return CellComponents(chi1, chi2, sigma_hat, rho_hat, check, check / total)

    def evaluate(self, p):
        """Partition values (ordered like ``set_ids``) at any complex point."""
        p = normalize(self.spec, p)
        if isinstance(p, BasePoint) or p.level == 0:
            return _shepard(self.cover.values(p), p)
        return self.components(p.cell_id, p.point).sigma

    __call__ = evaluate

    def as_dict(self, p):
        return dict(zip(self.set_ids, self.evaluate(p)))

    def lower(self, cell_id, q):
        """rho_U o h at a flange point: the partition evaluated at the attaching image."""
        cell = self.spec.cell(cell_id)
        return self.evaluate(cell.attach(q))


def build_partition(ctx, spec, cover, collar_delta=0.25, sharpness=1.0):
    if isinstance(cover, dict):
        cover = MarginCover.from_dict(cover)
    return PartitionOfUnity(ctx, spec, cover, collar_delta, sharpness)


@dataclass(frozen=True)
class PartitionAudit:
    samples: int
    max_sum_error: float
    min_value: float
    subordination_violations: int
    flange_samples: int
    max_flange_error: float

    def passed(self, tol=1e-9):
        return (
            self.max_sum_error <= tol
            and self.min_value >= 0.0
            and self.subordination_violations == 0
            and self.max_flange_error <= tol
        )


def audit_partition(pou, points, flange_points=()):
    """Check sum, sign, support and flange agreement at sample points.

    ``flange_points`` are (cell_id, HandlePoint) pairs with |u| >= 1.
    """
    sum_err = 0.0
    min_val = np.inf
    violations = 0
    for p in points:
        vals = pou(p)
        margins = pou.cover.values(normalize(pou.spec, p))
        sum_err = max(sum_err, abs(vals.sum() - 1.0))
        min_val = min(min_val, float(vals.min()))
        violations += int(np.sum((vals > 0) & ~(margins > 0)))
    flange_err = 0.0
    for cell_id, q in flange_points:
        blended = pou.components(cell_id, q).sigma
        flange_err = max(flange_err, float(np.max(np.abs(blended - pou.lower(cell_id, q)))))
    return PartitionAudit(len(points), sum_err, min_val, violations, len(flange_points), flange_err)


def separating_function(ctx, spec, a, margin_u, collar_delta=0.25):
    """Smooth f >= 0 with f(a) > 0 and support inside {margin_u > 0}.

    Uses the cover {U, V} with V = {margin_u < margin_u(a) / 2}, whose margin
    ell(margin_u(a)/2 - margin_u) vanishes near a, and returns rho_U.
    """
    c = margin_u(normalize(spec, a))
    if not c > 0:
        raise ValueError("margin_U(a) must be positive")
    from .kernels import ell

    cover = MarginCover(("U", "V"), (margin_u, lambda p: float(ell(0.5 * c - margin_u(p)))))
    pou = build_partition(ctx, spec, cover, collar_delta)

    def f(p):
        return float(pou(p)[0])

    f.partition = pou
    return f
