import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcw import cw
from fatcw.cw import BasePoint, CellPoint, CellSpec, ClassicalCell, ComplexSpec, InvalidComplex, InvalidPoint
from fatcw.cw_examples import (
    VERTICES,
    classical_sphere,
    fat_s2_complex,
    g_decay,
    g_decay_inverse,
    iota_complex,
    iota_parameter,
    iota_point,
    tdn_complex,
    tdn_coords,
)


def chain_complex():
    # b (level 2) -> flange of a (level 1) -> interior of the disk p
    def attach_a(q):
        return CellPoint.of(0, "p", (), (0.5 * math.tanh(q.u[0]), 0.5 * math.tanh(q.v[0])))

    def attach_b(q):
        return CellPoint.of(1, "a", [1.0 + q.ru], [0.0])

    return ComplexSpec((CellSpec(0, "p", 2), CellSpec(1, "a", 1, attach_a), CellSpec(2, "b", 0, attach_b)))


def test_interior_point_unchanged():
    spec = iota_complex()
    p = CellPoint.of(1, "e1", [0.3])
    assert cw.normalize(spec, p) is p


@pytest.mark.parametrize("u, vertex", [(2.0, 1), (1.0, 1), (-1.0, 0), (-7.5, 0)])
def test_interval_flange_goes_to_endpoints(u, vertex):
    assert cw.normalize(iota_complex(), CellPoint.of(1, "e1", [u])) == VERTICES[vertex]


@given(st.floats(-3, 3))
def test_interval_is_pi_set(t):
    p = cw.normalize(iota_complex(), iota_point(t))
    assert iota_parameter(p) == pytest.approx(cw.pi_set(t), abs=1e-15)


def test_double_flange_chain_terminates():
    spec = chain_complex()
    p = cw.normalize(spec, CellPoint.of(2, "b", [0.0, 1.5]))
    assert p.cell_id == "p" and p.level == 0
    np.testing.assert_allclose(p.point.v, [0.5 * math.tanh(2.5), 0.0])


def test_attaching_upward_is_rejected():
    spec = ComplexSpec((CellSpec(0, "p"), CellSpec(1, "a", 0, lambda q: CellPoint.of(1, "a", [0.0]))))
    with pytest.raises(InvalidComplex):
        cw.normalize(spec, CellPoint.of(1, "a", [2.0]))


@pytest.mark.parametrize(
    "table, expected",
    [([(0, 2), (2, 0)], 2), ([(0, 2), (1, 1), (2, 1)], 3), ([(0, 0), (3, 0)], 3), ([(0, 4)], 4)],
)
def test_wdim_examples(table, expected):
    anchor = CellPoint.of(0, "c0", (), [0.0] * table[0][1])
    cells = [CellSpec(lv, f"c{i}", m, None if lv == 0 else (lambda q: anchor)) for i, (lv, m) in enumerate(table)]
    assert cw.wdim_bound(ComplexSpec(tuple(cells))) == expected


def test_wdim_examples_complexes():
    assert cw.wdim_bound(iota_complex()) == 1
    assert cw.wdim_bound(tdn_complex(3)) == 3
    assert cw.wdim_bound(fat_s2_complex()) == 2


def test_import_classical_circle():
    point = CellPoint.of(0, "v")
    spec = cw.import_smooth_cw([ClassicalCell(0, "v"), ClassicalCell(1, "e", lambda x: point)])
    assert all(c.m == 0 for c in spec.cells)
    for u in (1.0, 2.5, -1.0, -4.0):
        assert cw.normalize(spec, CellPoint.of(1, "e", [u])) is point


def test_classical_sphere_thin():
    spec = classical_sphere(2)
    assert cw.wdim_bound(spec) == 2
    q = cw.normalize(spec, CellPoint.of(2, "e2", [3.0, 4.0]))
    assert q.cell_id == "e0"


def test_pi_set_values():
    assert cw.pi_set(-3) == 0.0
    assert cw.pi_set(0.4) == 0.4
    np.testing.assert_allclose(cw.pi_n_set([3.0, 4.0]), [0.6, 0.8])
    np.testing.assert_allclose(cw.pi_n_set([0.1, 0.2]), [0.1, 0.2])


@given(st.lists(st.floats(-10, 10), min_size=3, max_size=3))
def test_pi_n_set_idempotent(v):
    a = cw.pi_n_set(v)
    assert np.linalg.norm(a) <= 1 + 1e-12
    np.testing.assert_allclose(cw.pi_n_set(a), a, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tdn_normal_form(n):
    spec = tdn_complex(n)
    g = np.random.default_rng(n)
    for _ in range(200):
        v = g.normal(size=n) * g.uniform(0, 3)
        p = cw.normalize(spec, CellPoint.of(n, "e", v))
        np.testing.assert_allclose(tdn_coords(p), cw.pi_n_set(v), atol=1e-15)
        assert not cw.is_flange(p)


def test_witness_values():
    e = np.array([1.0, 0.0])
    p, s = cw.nonreflexivity_witness(-0.3)
    np.testing.assert_array_equal(p, e)
    assert s == 0.0
    p, _ = cw.nonreflexivity_witness(0.25)
    np.testing.assert_allclose(p, e / 2)
    with pytest.raises(ValueError):
        cw.nonreflexivity_witness(1.0)


def test_witness_slope_exponent():
    ts = 10.0 ** -np.arange(2, 7)
    s = [cw.nonreflexivity_witness(t)[1] for t in ts]
    expo = np.polyfit(np.log(ts), np.log(s), 1)[0]
    assert abs(expo + 0.5) <= 0.05


def test_regularity_fat_sphere():
    rep = cw.regularity_probe(fat_s2_complex(), "cap", 10_000, 0)
    assert rep.collisions == 0 and rep.injective_on_samples


def test_regularity_constant_attach():
    rep = cw.regularity_probe(classical_sphere(1), "e1", 500, 0)
    assert rep.collisions > 0 and not rep.injective_on_samples


def test_interior_tags(ctx):
    spec = fat_s2_complex()
    assert cw.in_interior_skeleton(spec, CellPoint.of(2, "cap", [0.2, 0.1]), ctx)
    # disk points of radius in (1/2, 1] are reached by open flange points of the cap
    assert cw.in_interior_skeleton(spec, CellPoint.of(0, "disk", (), [0.0, 1.0]), ctx)
    iota = iota_complex()
    assert cw.in_interior_skeleton(iota, VERTICES[0], ctx)
    assert cw.in_interior_skeleton(iota, iota_point(0.5), ctx)


def test_fat_sphere_attach():
    spec = fat_s2_complex()
    assert float(g_decay(1.0)) == 1.0
    r = np.linspace(0, 8, 1001)
    assert np.all(np.diff(g_decay(r)) < 0)
    assert float(g_decay(60.0)) == pytest.approx(0.5)
    assert g_decay_inverse(float(g_decay(2.3))) == pytest.approx(2.3)
    q = cw.normalize(spec, CellPoint.of(2, "cap", [2.0, 0.0]))
    assert q.cell_id == "disk" and q.point.rv == pytest.approx(float(g_decay(2.0)))


@pytest.mark.parametrize(
    "cells",
    [
        (CellSpec(0, "a"), CellSpec(0, "a")),
        (CellSpec(1, "a", 0, lambda q: None),),
        (),
    ],
)
def test_invalid_complexes(cells):
    with pytest.raises(InvalidComplex):
        ComplexSpec(cells)


def test_invalid_cells():
    with pytest.raises(InvalidComplex):
        CellSpec(1, "x")
    with pytest.raises(InvalidComplex):
        CellSpec(0, "x", 0, lambda q: None)
    with pytest.raises(InvalidComplex):
        CellSpec(-1, "x")


@pytest.mark.parametrize(
    "p",
    [
        CellPoint.of(1, "zz", [0.0]),
        CellPoint.of(2, "e1", [0.0, 0.0]),
        BasePoint.of(0.5),
        "not a point",
    ],
)
def test_invalid_points(p):
    with pytest.raises(InvalidPoint):
        cw.check_point(iota_complex(), p)


def test_membership_checked_with_ctx(ctx):
    spec = chain_complex()
    with pytest.raises(InvalidPoint):
        cw.check_point(spec, CellPoint.of(1, "a", [0.2], [3.0]), ctx)
    with pytest.raises(InvalidPoint):
        cw.check_point(spec, CellPoint.of(0, "p", (), [1.0, 1.0]))


def test_points_close():
    spec = iota_complex()
    assert cw.points_close(spec, CellPoint.of(1, "e1", [3.0]), VERTICES[1])
    assert not cw.points_close(spec, CellPoint.of(1, "e1", [0.0]), VERTICES[1])


def test_load_cell_table(tmp_path):
    path = tmp_path / "cells.txt"
    path.write_text("0 p 1 none\n# comment\n1 e 0 const\n")
    spec = cw.load_cell_table(str(path), {"const": lambda args: (lambda q: CellPoint.of(0, "p", (), [0.0]), None)})
    assert [c.cell_id for c in spec.cells] == ["p", "e"]
    with pytest.raises(InvalidComplex):
        cw.load_cell_table("0 p 0 none\n1 e 0 nope\n", {})
