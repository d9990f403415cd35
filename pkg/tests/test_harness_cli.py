import json

import numpy as np
import pytest

from fatcw import cli, harness
from fatcw.handle import defect_radii
from fatcw.mesh import audit_mesh, read_obj


@pytest.fixture(scope="module")
def reports():
    return {name: harness.run_suite(name, seed=3) for name in harness.SUITES}


@pytest.mark.parametrize("name", harness.SUITES)
def test_suites_pass(reports, name):
    rep = reports[name]
    failed = [c.check_id for c in rep.checks if not c.passed]
    assert rep.passed, failed


def test_suite_contents(reports):
    ids = {c.check_id for rep in reports.values() for c in rep.checks}
    assert "kernels.alpha_golden" in ids
    assert "maps.phi_after_theta" in ids and "maps.theta_after_phi" in ids
    assert all(i.split(".")[0] in harness.SUITES for i in ids)


def test_all_is_the_conjunction():
    rep = harness.run_suite("all", seed=0)
    assert rep.passed
    assert len({c.check_id for c in rep.checks}) == len(rep.checks)


def test_reports_are_deterministic():
    a = harness.run_suite("kernels", seed=5).to_csv()
    b = harness.run_suite("kernels", seed=5).to_csv()
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "check_id,status,measured,bound,tolerance"
    assert lines[1:] == sorted(lines[1:])


def test_tolerance_override_can_fail():
    rep = harness.run_suite("kernels", {"alpha": -1.0})
    assert not rep.passed
    assert [c.check_id for c in rep.checks if not c.passed] == ["kernels.alpha_golden"]


@pytest.mark.parametrize("call", [lambda: harness.run_suite("nope"), lambda: harness.merge_tolerances({"x": 1})])
def test_unknown_names(call):
    with pytest.raises((harness.UnknownSuite, harness.UnknownTolerance)):
        call()


@pytest.mark.parametrize("name", ["iota", "tdn", "fat-s2"])
def test_example_audits(name):
    assert harness.example_audit(name, samples=2000).passed


# -- emit --------------------------------------------------------------------

def test_emit_boundary(ctx, tmp_path):
    path = tmp_path / "b.csv"
    harness.emit(harness.EmitRequest("d-boundary", 1, 1, 512), str(path))
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding=None)
    assert len(data) == 512
    assert np.max(np.abs(defect_radii(ctx, data["r"], data["w"]))) <= 1e-9


def test_emit_profile(ctx):
    text = harness.emit_text(harness.EmitRequest("smoothed-profile", samples=256))
    rows = text.splitlines()
    assert rows[0] == "piece_tag,r,w" and len(rows) == 257
    tag, r, w = rows[1].split(",")
    assert tag == "flange-1" and float(r) == 1.0 and float(w) == 2.0


def test_emit_phi_grid(ctx):
    rows = harness.emit_text(harness.EmitRequest("phi-grid", samples=3, t_min=-1, t_max=2)).splitlines()
    assert rows[0] == "t,lambda,lambda_prime,phi"
    t, lam, dlam, phi = map(float, rows[2].split(","))
    assert (t, lam, phi) == (0.5, 0.5, 0.5)
    assert dlam == pytest.approx(ctx.lam_prime(0.5))


def test_emit_mesh(tmp_path):
    path = tmp_path / "m.obj"
    harness.emit(harness.EmitRequest("mesh", 2, 1, 64, fmt="obj", segments=16), str(path))
    assert audit_mesh(read_obj(str(path))).watertight


@pytest.mark.parametrize(
    "req",
    [
        harness.EmitRequest("teapot"),
        harness.EmitRequest("mesh", 2, 1, fmt="csv"),
        harness.EmitRequest("d-boundary", fmt="obj"),
        harness.EmitRequest("d-boundary", 2, 0),
        harness.EmitRequest("d-boundary", t_min=-2.0),
        harness.EmitRequest("phi-grid", samples=1),
        harness.EmitRequest("smoothed-profile", samples=8),
    ],
)
def test_emit_rejects_bad_requests(req):
    with pytest.raises(ValueError):
        req.validate()


# -- CLI ---------------------------------------------------------------------

def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_verify_pass_and_report(capsys, tmp_path):
    report = tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "kernels", "--seed", "2", "--report", str(report))
    assert code == 0 and "PASS suite kernels" in out
    assert report.read_text() == harness.run_suite("kernels", seed=2).to_csv()


def test_cli_verify_strict_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "verify", "smoothing", "--strict", "--report", str(a))[0] == 0
    assert run(capsys, "verify", "smoothing", "--strict", "--report", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "kernels", "--tol", "alpha=-1")
    assert code == 1 and "FAIL kernels.alpha_golden" in out


def test_cli_config_file(capsys, tmp_path):
    cfg = tmp_path / "tol.cfg"
    cfg.write_text("# tolerances\nalpha = -1\nseed = 4\n")
    assert run(capsys, "verify", "kernels", "--config", str(cfg))[0] == 1
    assert run(capsys, "verify", "kernels", "--config", str(cfg), "--tol", "alpha=1e-7")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "nope"),
        ("verify", "kernels", "--tol", "bogus=1"),
        ("verify", "kernels", "--tol", "alpha"),
        ("verify", "kernels", "--config", "/nonexistent/cfg"),
        ("emit", "mesh", "--n", "1", "--m", "1"),
        ("emit", "phi-grid", "--out", "/nonexistent/dir/x.csv"),
        ("invert", "--nm", "1,1", "--point", "0.5;5"),
        ("invert", "--nm", "1,1", "--point", "0.5"),
        ("invert", "--nm", "2,1", "--point", "0.5;0.1"),
        ("invert", "--nm", "x", "--point", "0.5;0.1"),
    ],
)
def test_cli_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("argv", [(), ("frobnicate",), ("example", "torus")])
def test_cli_argparse_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(argv))
    assert exc.value.code == 2


def test_cli_invert(capsys):
    code, out, _ = run(capsys, "invert", "--nm", "1,1", "--point", "0.3;0.5")
    res = json.loads(out)
    assert code == 0
    assert res["u"] == pytest.approx([0.2]) and res["v"] == pytest.approx([0.5])
    code, out, _ = run(capsys, "invert", "--nm", "2,1", "--point", "1.2,0.4;0.9", "--hat")
    assert code == 0 and json.loads(out)["residual"] <= 1e-9


def test_cli_invert_no_thickening(capsys):
    code, out, _ = run(capsys, "invert", "--nm", "2,0", "--point", "3,0;")
    assert code == 0 and json.loads(out)["u"] == pytest.approx([2.0, 0.0])


def test_cli_emit(capsys, tmp_path):
    path = tmp_path / "p.csv"
    assert run(capsys, "emit", "smoothed-profile", "--samples", "64", "--out", str(path))[0] == 0
    assert path.read_text().startswith("piece_tag,r,w\n")
    code, out, _ = run(capsys, "emit", "mesh", "--n", "1", "--m", "2", "--samples", "32", "--segments", "8")
    assert code == 0 and out.startswith("v ")


@pytest.mark.parametrize("name", ["iota", "tdn"])
def test_cli_example(capsys, name):
    code, out, _ = run(capsys, "example", name, "--audit", "--samples", "500")
    assert code == 0 and f"PASS suite example:{name}" in out
