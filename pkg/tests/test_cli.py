import csv
import json
import math
import subprocess
import sys

import pytest

from latticepoly import HomogeneousPolynomial, SpaceSpec, geometric_series, polynomial_to_json
from latticepoly.cli import RunRecord, main, resolve_threads

SQRT3 = math.sqrt(3.0)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def example_file(tmp_path, example_poly):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(polynomial_to_json(example_poly)))
    return str(path)


def test_norm_sup_and_regular(example_file, capsys):
    code, out, _ = run(["norm", example_file], capsys)
    assert code == 0 and out["value"] == pytest.approx(1.0, abs=1e-6) and out["kind"] == "sup"
    code, out, _ = run(["norm", example_file, "--regular", "--starts", "16", "--seed", "3", "--tol", "1e-9"], capsys)
    assert code == 0 and out["value"] == pytest.approx((3 + SQRT3) / 4, abs=1e-6)
    assert out["starts"] == 16 and out["seed"] == 3


def test_norm_diagonal_shorthand(tmp_path, capsys):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"space": {"dim": 2, "p": "inf"}, "degree": 2, "diag": [[1, 0], [-1, 0]]}))
    code, out, _ = run(["norm", str(path)], capsys)
    assert code == 0 and out["value"] == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("content", ["{bad", '{"space": {"dim": 2, "p": 1}, "degree": 2, "terms": [{"alpha": [1, 0]}]}',
                                     '{"space": {"dim": 2, "p": 0.5}, "degree": 1, "terms": []}'])
def test_norm_input_errors(tmp_path, content, capsys):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, out, err = run(["norm", str(path)], capsys)
    assert code == 1 and out is None and err.startswith("error:")


def test_missing_file(capsys):
    code, _, err = run(["norm", "/nonexistent/p.json"], capsys)
    assert code == 1 and "cannot read" in err


def test_nonconvergence_exit_code(tmp_path, capsys):
    P = HomogeneousPolynomial(SpaceSpec(3, 2), 3, {(1, 1, 1): 1, (2, 1, 0): 0.3j, (0, 2, 1): -0.7})
    path = tmp_path / "p.json"
    path.write_text(json.dumps(polynomial_to_json(P)))
    code, out, err = run(["norm", str(path), "--max-iter", "1", "--starts", "4"], capsys)
    assert code == 2 and "did not converge" in err and out["value"] > 0


def test_bohr_single(capsys):
    code, out, _ = run(["bohr", "--p", "1", "--dim", "2", "--degree", "2"], capsys)
    assert code == 0
    assert out["k_m"] <= (4 / (3 + SQRT3)) ** 0.5 + 1e-4
    assert set(out) >= {"space", "m", "ratio_sup", "k_m", "witness"}


def test_bohr_grid_csv(tmp_path, capsys):
    path = tmp_path / "grid.csv"
    code, out, _ = run(["bohr", "--p", "2", "--dim", "1,2,3", "--degree", "2", "--grid", "--csv", str(path),
                        "--starts", "32"], capsys)
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 3 and list(rows[0]) == ["p", "n", "m", "k_m", "ratio_sup", "seed"]
    ks = [float(r["k_m"]) for r in rows]
    assert all(b <= a + 2e-3 for a, b in zip(ks, ks[1:]))
    assert len(out["grid"]) == 3


def test_bohr_input_errors(capsys):
    assert run(["bohr", "--p", "0.5", "--dim", "2", "--degree", "2"], capsys)[0] == 1
    assert run(["bohr", "--p", "2", "--dim", "0", "--degree", "2"], capsys)[0] == 1
    assert run(["bohr", "--p", "2", "--dim", "1,2", "--degree", "2"], capsys)[0] == 1


def test_radius_with_csv(tmp_path, capsys):
    f = geometric_series(SpaceSpec(1, 2), 12, scale=0.5)
    src = tmp_path / "f.json"
    src.write_text(json.dumps(f.to_json()))
    out_csv = tmp_path / "r.csv"
    code, out, _ = run(["radius", str(src), "--csv", str(out_csv)], capsys)
    assert code == 0 and out["r"] == pytest.approx(2.0) and out["r_reg"] == pytest.approx(2.0)
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "m,root_sup,root_reg" and len(lines) == 13


def test_radius_too_short(tmp_path, capsys):
    src = tmp_path / "f.json"
    src.write_text(json.dumps(geometric_series(SpaceSpec(1, 2), 5).to_json()))
    assert run(["radius", str(src)], capsys)[0] == 1


def test_construct_polynomial_and_series(tmp_path, capsys):
    out_path = tmp_path / "P.json"
    code, out, _ = run(["construct", "--p", "2", "--degree", "3", "--eta", str(1 / 0.9), "--out", str(out_path)],
                       capsys)
    assert code == 0 and out["provenance"]["achieved_eta"] == pytest.approx(1 / 0.9, abs=1e-4)
    assert json.loads(out_path.read_text()) == out["polynomial"]
    code, out, _ = run(["construct", "--p", "2", "--tau", "1", "--terms", "9", "--radius"], capsys)
    assert code == 0 and out["radius"]["r_reg"] == pytest.approx(1.0)
    assert run(["construct", "--p", "2", "--degree", "2"], capsys)[0] == 1
    assert run(["construct", "--p", "2", "--degree", "2", "--eta", "2", "--n-cap", "2"], capsys)[0] == 1


def test_demos(capsys):
    code, out, _ = run(["demo", "coherence"], capsys)
    assert code == 0 and out["expansion_at_0"] == pytest.approx([0.8, 0.4], abs=1e-12)
    assert out["expansion_at_i/2"][0] == pytest.approx(2 / math.sqrt(5), abs=1e-12)
    assert "0.8+0.4i vs 0.894427" in out["text"]
    code, out, _ = run(["demo", "bohr-disc", "--a", "0.9"], capsys)
    assert code == 0 and out["threshold"] == pytest.approx(0.357142857, abs=1e-9)
    assert run(["demo", "bohr-disc", "--a", "1.5"], capsys)[0] == 1
    code, out, _ = run(["demo", "matos"], capsys)
    assert code == 0
    verdicts = [p["converges"] for p in out["points"]]
    assert verdicts == [True, True, False]
    for p in out["points"][:2]:
        assert p["partial_sum"] == pytest.approx(p["closed_form"], rel=1e-6)
    assert out["truncations"][-1]["z_j=1/(j+1)"] == pytest.approx(10001)
    assert out["truncations"][-1]["z_j=1/(j+1)^2"] < 2


def test_verify_suite(capsys):
    code, out, _ = run(["verify", "series", "ortho"], capsys)
    assert code == 0 and out["passed"] and len(out["checks"]) == 6


def test_verify_failure_exit_code(monkeypatch, capsys):
    import latticepoly.verify as verify
    monkeypatch.setitem(verify.SUITES, "ortho", lambda cfg, seed: [("forced failure", False, "x")])
    code, out, err = run(["verify", "ortho"], capsys)
    assert code == 3 and not out["passed"] and "FAILED" in err


def test_run_record_replays_bitwise(tmp_path, example_file, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"starts": 12, "seed": 7, "tol": 1e-10, "max_iter": 300}))
    assert run(["norm", example_file, "--config", str(cfg_path), "--record", str(a)], capsys)[0] == 0
    rec = RunRecord.from_json(json.loads(a.read_text()))
    assert rec.config == {"starts": 12, "seed": 7, "tol": 1e-10, "max_iter": 300} and rec.seed == 7
    assert run(rec.command.split() + ["--record", str(b)], capsys)[0] == 0
    assert RunRecord.from_json(json.loads(b.read_text())).outputs == rec.outputs


def test_threads_env_overrides_flag(monkeypatch):
    monkeypatch.setenv("LATTICE_POLY_THREADS", "3")
    assert resolve_threads(8) == 3
    monkeypatch.delenv("LATTICE_POLY_THREADS")
    assert resolve_threads(5) == 5
    assert resolve_threads(None) >= 1


def test_module_entry_point(example_file):
    proc = subprocess.run([sys.executable, "-m", "latticepoly", "norm", example_file, "--starts", "8"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == pytest.approx(1.0, abs=1e-6)
