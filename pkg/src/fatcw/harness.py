"""Verification suites and geometry emitters.

Each suite is a battery of named checks.  A check records the measured
value, the bound it is compared with and whether it passed.  Reports are
sorted by check id and written as CSV with 17 significant digits, so two
runs with the same seed produce byte-identical files.

Sampling uses numpy's counter-based Philox bit generator seeded with the
suite seed.
"""

from dataclasses import dataclass, field
import csv
import io
import math
import time

import numpy as np

from . import collar, cw, maps, mesh
from .cw_examples import (
    VERTICES,
    fat_s2_complex,
    fat_s2_margins,
    g_decay,
    iota_complex,
    iota_parameter,
    tdn_complex,
)
from .handle import (
    HandleSpec,
    RegionClass,
    boundary_radii,
    classify_radii,
    defect_radii,
    region_code,
)
from .kernels import SmoothingParams, default_context, p_a
from .partition import audit_partition, build_partition

SUITES = ("kernels", "geometry", "maps", "cw", "smoothing")

PUBLISHED_EXP43_ALPHA = 0.55731493

DEFAULT_TOLERANCES = {
    "alpha": 5e-8,
    "identity": 1e-9,
    "lambda_half": 1e-10,
    "cache": 1e-10,
    "derivative": 1e-6,
    "argmax": 1e-3,
    "second_derivative": 1e-4,
    "boundary": 1e-9,
    "roundtrip": 1e-8,
    "gradient": 1e-6,
    "singular": 1e-6,
    "profile_ends": 1e-10,
    "hat_roundtrip": 1e-6,
    "partition": 1e-9,
    "slope_exponent": 0.05,
    "overlap": 1e-10,
    "monotone": 1e-6,
    "corner": 1e-10,
    "junction": 1e-6,
    "turning": 20.0,
}


class UnknownSuite(ValueError):
    pass


class UnknownTolerance(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    check_id: str
    passed: bool
    measured: float
    bound: float
    tolerance: float

    @property
    def status(self):
        return "pass" if self.passed else "fail"


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def sorted(self):
        return sorted(self.checks, key=lambda c: c.check_id)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check_id", "status", "measured", "bound", "tolerance"])
        for c in self.sorted():
            w.writerow([c.check_id, c.status, f"{c.measured:.17g}", f"{c.bound:.17g}", f"{c.tolerance:.17g}"])
        return buf.getvalue()

    def summary(self):
        lines = [f"{c.status.upper():4s} {c.check_id}: measured={c.measured:.6g} bound={c.bound:.6g}"
                 for c in self.sorted()]
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"{verdict} suite {self.suite} ({len(self.checks)} checks, {self.runtime:.2f}s)")
        return "\n".join(lines)


def _rng(seed, stream=0):
    return np.random.Generator(np.random.Philox(key=seed, counter=stream))


def _le(check_id, measured, bound, tol=0.0):
    return Check(check_id, bool(measured <= bound + tol), float(measured), float(bound), float(tol))


def _ge(check_id, measured, bound, tol=0.0):
    return Check(check_id, bool(measured >= bound - tol), float(measured), float(bound), float(tol))


# -- kernels -----------------------------------------------------------------

def kernel_checks(ctx, tol, seed):
    out = []
    e43a = math.exp(4.0 / 3.0) * ctx.alpha
    out.append(_le("kernels.alpha_golden", abs(e43a - PUBLISHED_EXP43_ALPHA), tol["alpha"]))
    t = np.linspace(-2.0, 3.0, 10_001)
    out.append(_le("kernels.lambda_symmetry", np.max(np.abs(ctx.lam(t) + ctx.lam(1 - t) - 1)), tol["identity"]))
    out.append(_le("kernels.phi_odd_part", np.max(np.abs(ctx.phi(t) - ctx.phi(-t) - t)), tol["identity"]))
    tail = t[np.abs(t) >= 0.5]
    out.append(_le("kernels.phi_even_tail",
                   np.max(np.abs(ctx.phi(tail) + ctx.phi(-tail) - np.abs(tail))), tol["identity"]))
    out.append(_le("kernels.lambda_half", abs(ctx.lam(0.5) - 0.5), tol["lambda_half"]))
    phi0 = ctx.phi(0.0)
    out.append(Check("kernels.phi_zero_range", bool(0 < phi0 < 0.125), phi0, 0.125, 0.0))
    out.append(_le("kernels.lambda_cache", ctx.cache_error, tol["cache"]))
    g = np.linspace(-0.5, 1.5, 2001)  # 1e-3 grid
    lp = ctx.lam_prime(g)
    k = int(np.argmax(lp))
    ref = 1.0 / e43a
    out.append(_le("kernels.lambda_prime_max", abs(lp[k] - ref), tol["derivative"]))
    out.append(_le("kernels.lambda_prime_argmax", abs(g[k] - 0.5), tol["argmax"]))
    out.append(_le("kernels.lambda_prime_below_20_11", lp[k], 20.0 / 11.0))
    params = SmoothingParams()
    x = np.linspace(-0.5, 1.5, 200_001)
    slope = np.max(np.diff(ctx.lam_eps(params, x)) / np.diff(x))
    out.append(Check("kernels.lambda_eps_slope", bool(slope < 2.0), slope, 2.0, 0.0))
    h = 1e-3
    s = np.linspace(h, 1 - h, 999)
    d2 = (ctx.lam(s + h) - 2 * ctx.lam(s) + ctx.lam(s - h)) / h**2
    left, right = d2[s < 0.5 - h], d2[s > 0.5 + h]
    out.append(_ge("kernels.lambda_second_left", left.min(), 0.0, tol["second_derivative"]))
    out.append(_le("kernels.lambda_second_right", right.max(), 0.0, tol["second_derivative"]))
    u = np.linspace(0.0, 6.0, 6001)
    pa = max(np.max(p_a(ctx, 1.0, u)), np.max(p_a(ctx, 2.0, u)))
    out.append(Check("kernels.p_a_below_3_2", bool(pa < 1.5), pa, 1.5, 0.0))
    uu, vv = np.meshgrid(u, np.linspace(-1, 1, 101))
    out.append(Check("kernels.alpha_positive", bool(np.min(maps.alpha_coef(ctx, uu, vv)) > 0),
                     float(np.min(maps.alpha_coef(ctx, uu, vv))), 0.0, 0.0))
    return out


# -- geometry ----------------------------------------------------------------

GEOMETRY_PAIRS = ((1, 1), (2, 1), (1, 2), (2, 2), (3, 0), (0, 2))


def geometry_checks(ctx, tol, seed, samples=100_000):
    out = []
    rng = _rng(seed, 1)
    worst = 0.0
    for n, m in ((1, 1), (2, 1), (1, 2), (2, 2)):
        t = rng.uniform(-1, 3, 1000)
        ru, rv = boundary_radii(ctx, t)
        worst = max(worst, np.max(np.abs(defect_radii(ctx, ru, rv))), np.max(np.abs(ru + rv - 2 - t)))
    out.append(_le("geometry.boundary_equation", worst, tol["boundary"]))
    part_fail = flange_fail = disk_fail = 0
    for n, m in GEOMETRY_PAIRS:
        spec = HandleSpec(n, m)
        ru = rng.uniform(0, 3, samples) if n else np.zeros(samples)
        rv = rng.uniform(0, 3, samples) if m else np.zeros(samples)
        codes = classify_radii(ctx, spec, ru, rv)
        part_fail += int(np.sum((codes < 0) | (codes >= len(RegionClass))))
        d = defect_radii(ctx, ru, rv)
        if n:
            flange_fail += int(np.sum((codes == region_code(RegionClass.FLANGE)) & (d < -tol["boundary"])))
        disk_fail += int(np.sum((rv <= 1) & (d < -tol["boundary"])))
        if m == 0:
            disk_fail += int(np.sum(d < -tol["boundary"]))
        if n == 0:
            disk_fail += int(np.sum((d >= 0) != (rv <= 1)))
    out.append(_le("geometry.classify_partition", part_fail, 0))
    out.append(_le("geometry.flange_members", flange_fail, 0))
    out.append(_le("geometry.disk_members", disk_fail, 0))
    return out


# -- maps --------------------------------------------------------------------

MAP_PAIRS = tuple((n, m) for n in range(4) for m in range(4) if n + m >= 1)


def _ball(rng, k, dim, radius=1.0):
    if dim == 0:
        return np.zeros((k, 0))
    x = rng.normal(size=(k, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * radius * rng.uniform(0, 1, (k, 1)) ** (1.0 / dim)


def _radial_sample(rng, k, dim, r):
    if dim == 0:
        return np.zeros((k, 0))
    x = rng.normal(size=(k, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * np.asarray(r).reshape(-1, 1)


def sample_handle(ctx, spec, rng, k):
    """Points of D^{n,m}: half boundary-interpolated, half from the box."""
    n, m = spec.n, spec.m
    if n == 0:
        return np.zeros((k, 0)), _ball(rng, k, m)
    if m == 0:
        return _radial_sample(rng, k, n, rng.uniform(0, 4, k)), np.zeros((k, 0))
    h = k // 2
    # shrinking |v| or growing |u| from a boundary point stays inside the handle
    t = rng.uniform(-1, 2.5, h)
    bru, brv = boundary_radii(ctx, t)
    edge = rng.uniform(0, 1, h) < 0.2
    ru1 = np.where(edge, bru, bru + rng.uniform(0, 0.5, h))
    rv1 = np.where(edge, brv, brv * rng.uniform(0, 1, h) ** (1.0 / m))
    ru2 = np.empty(0)
    rv2 = np.empty(0)
    while ru2.size < k - h:
        a = rng.uniform(0, 4, k)
        b = rng.uniform(0, 4, k)
        ok = defect_radii(ctx, a, b) >= 0
        ru2 = np.concatenate([ru2, a[ok]])
        rv2 = np.concatenate([rv2, b[ok]])
    ru = np.concatenate([ru1, ru2[: k - h]])
    rv = np.concatenate([rv1, rv2[: k - h]])
    return _radial_sample(rng, k, n, ru), _radial_sample(rng, k, m, rv)


def map_checks(ctx, tol, seed, samples=10_000, grid=100_000):
    out = []
    rng = _rng(seed, 2)
    worst_tp = worst_pt = 0.0
    for n, m in MAP_PAIRS:
        spec = HandleSpec(n, m)
        u = _radial_sample(rng, samples, n, rng.uniform(0, 4, samples))
        v = _ball(rng, samples, m)
        x, y = maps.phi_map(ctx, spec, u, v)
        u2, v2 = maps.theta_map(ctx, spec, x, y)
        worst_tp = max(worst_tp, np.max(np.abs(np.concatenate([u2 - u, v2 - v], axis=1)), initial=0.0))
        qx, qy = sample_handle(ctx, spec, rng, samples)
        a, b = maps.theta_map(ctx, spec, qx, qy)
        x3, y3 = maps.phi_map(ctx, spec, a, b)
        worst_pt = max(worst_pt, np.max(np.abs(np.concatenate([x3 - qx, y3 - qy], axis=1)), initial=0.0))
    out.append(_le("maps.theta_after_phi", worst_tp, tol["roundtrip"]))
    out.append(_le("maps.phi_after_theta", worst_pt, tol["roundtrip"]))
    side = int(round(math.sqrt(grid)))
    uu, vv = np.meshgrid(np.linspace(-3, 3, side), np.linspace(-1, 1, side))
    det = maps.phi11_jacobian(ctx, uu, vv)
    out.append(Check("maps.phi11_jacobian_positive", bool(det.min() > 0), float(det.min()), 0.0, 0.0))
    su = rng.uniform(-3, 3, 2000)
    sv = rng.uniform(-0.999, 0.999, 2000)
    keep = np.abs(su) > 1e-3
    gd = np.max(np.abs(maps.phi11_jacobian(ctx, su[keep], sv[keep]) - maps.phi11_jacobian_fd(ctx, su[keep], sv[keep])))
    out.append(_le("maps.dual_vs_fd", gd, tol["gradient"]))
    ru = rng.uniform(0, 4, 2000)
    rv = rng.uniform(0, 1, 2000)
    dual = np.column_stack(maps.radial_jacobian(ctx, ru, rv))
    h = 1e-6
    xp, yp = maps.radial_phi(ctx, ru + h, rv)
    xm, ym = maps.radial_phi(ctx, np.maximum(ru - h, 0), rv)
    fd_ru = np.column_stack([(xp - xm), (yp - ym)]) / (ru + h - np.maximum(ru - h, 0))[:, None]
    gd2 = np.max(np.abs(dual[:, [0, 2]] - fd_ru))
    out.append(_le("maps.radial_dual_vs_fd", gd2, tol["gradient"]))
    uu1 = rng.uniform(-3, 3, 10_000)
    vv1 = rng.uniform(-1, 1, 10_000)
    x, y = maps.phi_map(ctx, HandleSpec(1, 1), uu1[:, None], vv1[:, None])
    gap = np.min(np.abs(x[:, 0]) + np.abs(y[:, 0]) - 1.5 * np.abs(uu1) - np.abs(vv1))
    out.append(_ge("maps.abs_sum_inequality", gap, 0.0, 1e-12))
    out.extend(singular_checks(ctx, tol, seed))
    return out


def singular_checks(ctx, tol, seed, samples=10_000):
    out = []
    rng = _rng(seed, 3)
    v = np.linspace(0, 1, 100)
    out.append(_le("maps.phi_hat_wall_jacobian", np.max(maps.phi_hat_jacobian_defect(ctx, v)), tol["singular"]))
    off = float(np.min(maps.phi_hat_jacobian_defect(ctx, np.linspace(0.01, 0.99, 99), ru=1.2)))
    out.append(Check("maps.phi_hat_regular_off_wall", bool(off > 1e-3), off, 1e-3, 0.0))
    ends = max(abs(maps.wall_profile(0.0)), abs(maps.wall_profile(1.0) - 1.5))
    out.append(_le("maps.wall_profile_ends", ends, tol["profile_ends"]))
    worst_img = worst_par = form_err = 0.0
    tri_fail = 0
    for n, m in ((1, 1), (2, 1), (1, 2), (2, 2), (3, 3)):
        spec = HandleSpec(n, m)
        ru = rng.uniform(0, 3, samples)
        u = _radial_sample(rng, samples, n, ru)
        v = _ball(rng, samples, m)
        x, y = maps.phi_hat_map(ctx, spec, u, v)
        X = np.linalg.norm(x, axis=1)
        Y = np.linalg.norm(y, axis=1)
        # |u| > 1 lands in the flange X >= 1 (up to rounding; X - 1 can be
        # exactly 0 on |v| = 1), |u| < 1 strictly inside X < 1.  Just inside
        # the wall 1 - X = phi(1 - 3|u|/2) underflows, so the strict side is
        # tested at sample resolution plus the closed form.
        res = np.abs(ru - 1.0) >= 2e-2
        tri_fail += int(np.sum((ru > 1) & (X < 1.0 - 1e-12)) + np.sum((ru < 1) & res & (X >= 1.0)))
        inner = ru < 1
        form_err = max(form_err, np.max(np.abs(X[inner] - (1.0 - ctx.phi(1.0 - 1.5 * ru[inner])))))
        u2, v2 = maps.phi_hat_inverse(ctx, spec, x, y)
        x3, y3 = maps.phi_hat_map(ctx, spec, u2, v2)
        # image-space distance to the wall |x| = 1, |y| <= 3/2
        wall_dist = np.hypot(X - 1.0, np.maximum(Y - 1.5, 0.0))
        far = wall_dist > 1e-2
        img = np.max(np.abs(np.concatenate([x3 - x, y3 - y], axis=1)), axis=1)
        par = np.max(np.abs(np.concatenate([u2 - u, v2 - v], axis=1)), axis=1)
        worst_img = max(worst_img, img[far].max())
        worst_par = max(worst_par, par[np.abs(ru - 1) > 0.1].max())
    out.append(_le("maps.phi_hat_image_roundtrip", worst_img, tol["hat_roundtrip"]))
    out.append(_le("maps.phi_hat_param_roundtrip", worst_par, tol["hat_roundtrip"]))
    out.append(_le("maps.phi_hat_trichotomy", tri_fail, 0))
    out.append(_le("maps.phi_hat_inner_radius", form_err, 1e-12))
    return out


# -- cw ----------------------------------------------------------------------

def _same(a, b):
    if type(a) is not type(b):
        return False
    if isinstance(a, cw.BasePoint):
        return a == b
    return (a.cell_id == b.cell_id and np.array_equal(a.point.u, b.point.u)
            and np.array_equal(a.point.v, b.point.v))


def random_cell_table(rng, cells=6):
    levels = sorted(int(x) for x in rng.integers(0, 4, cells))
    levels[0] = 0
    return [(lv, int(rng.integers(0, 4))) for lv in levels]


def wdim_oracle(table):
    best = -1
    for k in {lv for lv, _ in table}:
        for lv, m in table:
            if lv == k:
                best = max(best, m + k)
    return best


def table_to_spec(table):
    point = cw.CellPoint.of(0, "c0", (), ())
    cells = []
    for i, (lv, m) in enumerate(table):
        cid = f"c{i}"
        if lv == 0:
            cells.append(cw.CellSpec(0, cid, m))
        else:
            cells.append(cw.CellSpec(lv, cid, m, lambda p, _q=point: _q))
    cells[0] = cw.CellSpec(0, "c0", 0)
    return cw.ComplexSpec(tuple(cells))


def normal_form_idempotence(spec, points):
    bad = 0
    for p in points:
        q = cw.normalize(spec, p)
        if not _same(q, cw.normalize(spec, q)) or cw.is_flange(q):
            bad += 1
    return bad


def cw_checks(ctx, tol, seed, audit_samples=10_000, nf_samples=100_000):
    out = []
    rng = _rng(seed, 4)
    mism = 0
    for _ in range(10):
        table = random_cell_table(rng)
        table[0] = (0, 0)
        spec = table_to_spec(table)
        mism += int(cw.wdim_bound(spec) != wdim_oracle(table))
    out.append(_le("cw.wdim_random_tables", mism, 0))
    thin = cw.ComplexSpec((cw.CellSpec(0, "a"), cw.CellSpec(3, "b", 0, lambda p: cw.CellPoint.of(0, "a"))))
    out.append(_le("cw.wdim_thin_top_level", abs(cw.wdim_bound(thin) - 3), 0))
    iota = iota_complex()
    us = rng.uniform(-3, 3, nf_samples)
    pts = [cw.CellPoint.of(1, "e1", [u]) for u in us]
    out.append(_le("cw.iota_normal_form", normal_form_idempotence(iota, pts), 0))
    clamp = 0.0
    for u, p in zip(us[:1000], pts[:1000]):
        clamp = max(clamp, abs(iota_parameter(cw.normalize(iota, p)) - cw.pi_set(0.5 * (u + 1))))
    out.append(_le("cw.iota_matches_pi_set", clamp, 0.0, 1e-15))
    for n in (1, 2, 3):
        tdn = tdn_complex(n)
        k = nf_samples if n == 2 else nf_samples // 10
        vs = _radial_sample(rng, k, n, rng.uniform(0, 3, k))
        pts = [cw.CellPoint.of(n, "e", v) for v in vs]
        out.append(_le(f"cw.tdn{n}_normal_form", normal_form_idempotence(tdn, pts), 0))
    ts = 10.0 ** -np.arange(2, 7)
    slopes = [cw.nonreflexivity_witness(t)[1] for t in ts]
    expo = np.polyfit(np.log(ts), np.log(slopes), 1)[0]
    out.append(_le("cw.witness_slope_exponent", abs(expo + 0.5), tol["slope_exponent"]))
    out.extend(partition_checks(ctx, tol, seed, audit_samples))
    return out


def fat_s2_audit_points(spec, rng, k, ctx):
    half = k // 2
    pts = [cw.CellPoint(0, "disk", q) for q in cw.sample_interior(spec.cell("disk"), rng, half)]
    pts += [cw.CellPoint(2, "cap", q) for q in cw.sample_interior(spec.cell("cap"), rng, k - half)]
    flange = [("cap", q) for q in cw.sample_flange(spec.cell("cap"), rng, k // 5)]
    return pts, flange


def partition_checks(ctx, tol, seed, samples=10_000):
    out = []
    rng = _rng(seed, 5)
    spec = fat_s2_complex()
    pou = build_partition(ctx, spec, fat_s2_margins())
    pts, flange = fat_s2_audit_points(spec, rng, samples, ctx)
    a = audit_partition(pou, pts, flange)
    out.append(_le("cw.partition_sum", a.max_sum_error, tol["partition"]))
    out.append(_ge("cw.partition_nonnegative", a.min_value, 0.0))
    out.append(_le("cw.partition_subordinate", a.subordination_violations, 0))
    out.append(_le("cw.partition_flange_agreement", a.max_flange_error, tol["partition"]))
    probe = cw.regularity_probe(spec, "cap", samples, seed)
    out.append(_le("cw.fat_s2_attach_collisions", probe.collisions, 0))
    # every disk radius in (1/2, 1] is reached by some flange radius (resolution 1e-2)
    r = np.linspace(1.0, 60.0, 200_001)
    hit = g_decay(r)
    targets = np.linspace(0.51, 1.0, 50)
    gap = float(np.max(np.min(np.abs(targets[:, None] - hit[None, :]), axis=1)))
    out.append(_le("cw.fat_s2_annulus_coverage", gap, 1e-2))
    return out


# -- smoothing ---------------------------------------------------------------

def smoothing_checks(ctx, tol, seed):
    out = []
    params = SmoothingParams()
    ov = collar.overlap_agreement(ctx, params)
    out.append(_le("smoothing.piece_overlap", max(ov.values()), tol["overlap"]))
    mono = collar.monotonicity_audit(ctx, params)
    out.append(_ge("smoothing.fg_monotone_margin", mono.worst_margin, 0.0, tol["monotone"]))
    kc = abs(collar.kappa(ctx, collar.Side.FLANGE, 1.0, 1.0) - ctx.phi(0.0))
    kh = abs(collar.kappa(ctx, collar.Side.HANDLE, 1.0, 1.0) - ctx.phi(0.0))
    out.append(_le("smoothing.kappa_corner", max(kc, kh), tol["corner"]))
    w = np.linspace(1, 4, 3001)
    r = np.linspace(0, 1, 1001)
    kmax = max(np.max(collar.kappa(ctx, collar.Side.FLANGE, 1.0, w)),
               np.max(collar.kappa(ctx, collar.Side.HANDLE, r, 1.0)))
    out.append(_le("smoothing.kappa_max", kmax, float(ctx.phi(0.0)), 1e-15))
    jd = collar.junction_defects(ctx, params)
    out.append(_le("smoothing.junction_c1", max(v for k, v in jd.items() if k != "corner gap"), tol["junction"]))
    out.append(_le("smoothing.junction_c0", jd["corner gap"], tol["junction"]))
    curve = collar.smoothed_boundary_profile(ctx, params, 4096)
    out.append(_le("smoothing.turning_rate", collar.turning_rate(curve), tol["turning"]))
    corner = np.max(np.abs(curve.points - [1.0, 1.0]), axis=1).min()
    out.append(_ge("smoothing.corner_rounded", corner, 0.5 * float(ctx.phi(0.0))))
    out.append(_le("smoothing.profile_on_handle_boundary",
                   np.max(np.abs(defect_radii(ctx, curve.r, curve.w))), tol["boundary"]))
    dmin, _ = collar.injectivity_check(ctx, params, 0.1, 10_000, seed)
    out.append(Check("smoothing.psi_injective", bool(dmin > 0), dmin, 0.0, 0.0))
    return out


_BATTERIES = {
    "kernels": kernel_checks,
    "geometry": geometry_checks,
    "maps": map_checks,
    "cw": cw_checks,
    "smoothing": smoothing_checks,
}


def merge_tolerances(overrides=None):
    tol = dict(DEFAULT_TOLERANCES)
    for k, v in (overrides or {}).items():
        if k not in tol:
            raise UnknownTolerance(f"unknown tolerance key {k!r}; known: {', '.join(sorted(tol))}")
        tol[k] = float(v)
    return tol


def run_suite(name, overrides=None, seed=0, ctx=None):
    if name != "all" and name not in _BATTERIES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    ctx = ctx or default_context()
    tol = merge_tolerances(overrides)
    start = time.perf_counter()
    report = SuiteReport(name, seed)
    for suite in SUITES if name == "all" else (name,):
        report.checks.extend(_BATTERIES[suite](ctx, tol, seed))
    report.runtime = time.perf_counter() - start
    return report


# -- emitters ----------------------------------------------------------------

EMIT_OBJECTS = ("d-boundary", "phi-grid", "smoothed-profile", "mesh")


@dataclass(frozen=True)
class EmitRequest:
    obj: str
    n: int = 1
    m: int = 1
    samples: int = 512
    t_min: float = -1.0
    t_max: float = 2.0
    fmt: str = "csv"
    u_max: float = 2.0
    v_max: float = 2.5
    segments: int = 64

    def validate(self):
        if self.obj not in EMIT_OBJECTS:
            raise ValueError(f"unknown object {self.obj!r}; choose from {', '.join(EMIT_OBJECTS)}")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")
        if self.obj == "mesh":
            if self.fmt != "obj":
                raise ValueError("meshes are written as obj")
        elif self.fmt != "csv":
            raise ValueError(f"{self.obj} is written as csv")
        if self.obj == "d-boundary" and (self.n < 1 or self.m < 1):
            raise ValueError("the boundary of D^{n,m} is a curve only for n, m >= 1")
        if self.obj == "d-boundary" and self.t_min < -1.0:
            raise ValueError("d-boundary needs t_min >= -1")
        if self.t_max <= self.t_min:
            raise ValueError("t_max must exceed t_min")
        if self.obj == "smoothed-profile" and self.samples < 16:
            raise ValueError("smoothed-profile needs at least 16 samples")


def _profile_csv(tags, r, w):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["piece_tag", "r", "w"])
    for tag, a, b in zip(tags, r, w):
        wr.writerow([tag, f"{a:.17g}", f"{b:.17g}"])
    return buf.getvalue()


def emit_text(req, ctx=None):
    """Render an emit request to text (CSV or OBJ)."""
    req.validate()
    ctx = ctx or default_context()
    if req.obj == "d-boundary":
        t = np.linspace(req.t_min, req.t_max, req.samples)
        ru, rv = boundary_radii(ctx, t)
        return _profile_csv(["d-boundary"] * len(t), ru, rv)
    if req.obj == "smoothed-profile":
        c = collar.smoothed_boundary_profile(ctx, SmoothingParams(), req.samples)
        return _profile_csv(c.tags, c.r, c.w)
    if req.obj == "phi-grid":
        t = np.linspace(req.t_min, req.t_max, req.samples)
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["t", "lambda", "lambda_prime", "phi"])
        for row in zip(t, ctx.lam(t), ctx.lam_prime(t), ctx.phi(t)):
            wr.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()
    m = mesh.handle_mesh(ctx, req.n, req.m, req.samples, req.segments, req.u_max, req.v_max)
    buf = io.StringIO()
    m.write_obj(buf)
    return buf.getvalue()


def emit(req, path, ctx=None):
    text = emit_text(req, ctx)
    with open(path, "w") as fh:
        fh.write(text)
    return path


# -- example audits ------------------------------------------------------------

def example_audit(name, seed=0, samples=10_000, ctx=None):
    ctx = ctx or default_context()
    rng = _rng(seed, 6)
    report = SuiteReport(f"example:{name}", seed)
    start = time.perf_counter()
    if name == "iota":
        spec = iota_complex()
        pts = [cw.CellPoint.of(1, "e1", [u]) for u in rng.uniform(-3, 3, samples)]
        report.checks.append(_le("iota.normal_form", normal_form_idempotence(spec, pts), 0))
        report.checks.append(_le("iota.wdim", abs(cw.wdim_bound(spec) - 1), 0))
        end = cw.normalize(spec, cw.CellPoint.of(1, "e1", [2.0]))
        report.checks.append(Check("iota.flange_to_vertex", end == VERTICES[1], 0.0, 0.0, 0.0))
    elif name == "tdn":
        for n in (1, 2, 3):
            spec = tdn_complex(n)
            vs = _radial_sample(rng, samples, n, rng.uniform(0, 3, samples))
            pts = [cw.CellPoint.of(n, "e", v) for v in vs]
            report.checks.append(_le(f"tdn{n}.normal_form", normal_form_idempotence(spec, pts), 0))
            report.checks.append(_le(f"tdn{n}.wdim", abs(cw.wdim_bound(spec) - n), 0))
        ts = 10.0 ** -np.arange(2, 7)
        expo = np.polyfit(np.log(ts), np.log([cw.nonreflexivity_witness(t)[1] for t in ts]), 1)[0]
        report.checks.append(_le("tdn.witness_slope_exponent", abs(expo + 0.5), 0.05))
    elif name == "fat-s2":
        report.checks.extend(partition_checks(ctx, DEFAULT_TOLERANCES, seed, samples))
        report.checks.append(_le("fat-s2.wdim", abs(cw.wdim_bound(fat_s2_complex()) - 2), 0))
    else:
        raise UnknownSuite(f"unknown example {name!r}; choose from iota, tdn, fat-s2")
    report.runtime = time.perf_counter() - start
    return report
