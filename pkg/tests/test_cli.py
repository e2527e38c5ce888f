import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from vmdfourier.cli import RunConfig, cli, parse_grid, read_config_file
from vmdfourier.errors import DomainError, ParseError


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(cli, [str(a) for a in args], env=env, catch_exceptions=False)

    return invoke


def _csv_body(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    return header, np.array(rows)


def test_transform_json(run):
    res = run("transform", "--function", "runge", "--k", 1.0)
    assert res.exit_code == 0
    doc = json.loads(res.output)
    r = doc["results"][0]
    assert r["value"][0] == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), abs=1e-9)
    assert r["tail_bound"] >= 0
    assert doc["config"]["function"] == "runge" and doc["config"]["rel_tol"] == 1e-8


def test_taper_csv(run):
    res = run("taper", "--m", 10, "--a0", 1, "--a1", 0, "--a2", 0, "--samples", 100)
    assert res.exit_code == 0
    assert res.output.startswith("# config: ")
    header, rows = _csv_body(res.output)
    assert header == ["x", "h", "h1", "h2", "h3"]
    assert rows.shape == (100, 5)
    assert rows[0, 0] == 10 and rows[0, 1] == pytest.approx(1.0)
    assert rows[-1, 0] == pytest.approx(10.1) and rows[-1, 1] == pytest.approx(0.0, abs=1e-12)


def test_sweep_csv_columns(run):
    res = run("sweep", "--function", "odd_vmd", "--k-grid", "log:1:8:4", "--format", "csv")
    assert res.exit_code == 0
    header, rows = _csv_body(res.output)
    assert header == ["k", "re_value", "im_value", "tail_bound", "segments_used", "core_bound_Nk"]
    assert rows[:, 0] == pytest.approx([1, 2, 4, 8])


def test_invert(run):
    res = run("invert", "--function", "runge", "--x-grid", "0,1", "--n", 16, "--format", "csv")
    assert res.exit_code == 0
    _, rows = _csv_body(res.output)
    assert rows[:, 4].max() < 1e-6


def test_classify(run):
    doc = json.loads(run("classify", "--function", "odd_vmd").output)
    assert doc["decay"]["class"] == "very_moderate"
    assert doc["oscillation"]["kind"] == "non_oscillatory"


def test_unknown_function_exit_2(run):
    res = run("transform", "--function", "nope", "--k", 1)
    assert res.exit_code == 2
    assert "runge" in res.output and "odd_vmd" in res.output


def test_k_zero_exit_2(run):
    assert run("transform", "--function", "runge", "--k", 0).exit_code == 2


def test_oscillatory_needs_m(run):
    res = run("transform", "--function", "osc_deriv", "--k", 2)
    assert res.exit_code == 2 and "--m" in res.output
    assert run("transform", "--function", "osc_deriv", "--k", 2, "--m", 10).exit_code == 0


def test_malformed_sampled_file_exit_2_with_line(run, tmp_path):
    p = tmp_path / "two_rows.csv"
    p.write_text("x,f\n0,1\n1,0.5\n")
    res = run("classify", "--function", p)
    assert res.exit_code == 2 and "line 3" in res.output


def test_sampled_file_transform(run, tmp_path):
    x = np.linspace(-50, 50, 2001)
    p = tmp_path / "r.csv"
    p.write_text("x,f\n" + "\n".join(f"{float(a)!r},{float(1 / (1 + a * a))!r}" for a in x) + "\n")
    doc = json.loads(run("transform", "--function", p, "--k", 1).output)
    assert doc["results"][0]["value"][0] == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), abs=1e-3)


def test_certification_failure_exit_3(run, tmp_path):
    x = np.linspace(-50, 50, 401)
    p = tmp_path / "grow.csv"
    p.write_text("x,f\n" + "\n".join(f"{float(a)!r},{math.sqrt(1 + a * a)!r}" for a in x) + "\n")
    assert run("transform", "--function", p, "--k", 1).exit_code == 3


def test_failed_check_exit_1(run):
    # the odd test function's approximant overshoots the C m/|k|^3 constant at m = 20
    res = run("verify", "--function", "odd_vmd", "--suite", "approximant")
    assert res.exit_code == 1
    doc = json.loads(res.output)
    assert doc["overall_pass"] is False


def test_verify_passes(run):
    res = run("verify", "--function", "runge", "--suite", "derivative")
    assert res.exit_code == 0
    assert json.loads(res.output)["checks"][0]["name"] == "derivative_route"


def test_config_file_and_override(run, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nrel-tol = 1e-6\nformat = csv\nk_grid = 1,2\n")
    res = run("--config", cfg, "sweep", "--function", "runge")
    assert res.exit_code == 0
    assert '"rel_tol": 1e-06' in res.output.splitlines()[0]
    res = run("--config", cfg, "sweep", "--function", "runge", "--format", "json", "--rel-tol", "1e-9")
    doc = json.loads(res.output)
    assert doc["config"]["rel_tol"] == 1e-9 and doc["config"]["k_grid"] == "1,2"


def test_bad_config_file(run, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign\n")
    assert run("--config", cfg, "classify", "--function", "runge").exit_code == 2


def test_output_file_and_env_dir(run, tmp_path):
    out = tmp_path / "a" / "t.json"
    assert run("transform", "--function", "runge", "--k", 2, "--output", out).exit_code == 0
    assert json.loads(out.read_text())["results"][0]["k"] == 2.0
    res = run("classify", "--function", "gauss", env={"VMDFOURIER_OUTPUT_DIR": str(tmp_path / "env")})
    assert res.exit_code == 0 and res.output == ""
    assert (tmp_path / "env" / "classify-gauss.json").exists()


def test_byte_identical_reruns(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("verify", "--function", "runge", "--suite", "derivative", "-o", a)
    run("verify", "--function", "runge", "--suite", "derivative", "-o", b)
    assert a.read_bytes() == b.read_bytes()


class TestHelpers:
    def test_grids(self):
        assert parse_grid("1, 2,5").tolist() == [1, 2, 5]
        assert parse_grid("0:1:3").tolist() == [0, 0.5, 1]
        assert parse_grid("log:1:100:3") == pytest.approx([1, 10, 100])
        for bad in ("", "1:2", "log:-1:2:3", "a,b", "1,nan"):
            with pytest.raises(DomainError):
                parse_grid(bad)

    def test_config_reader(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("a-b = 1  # note\n\nc=x\n")
        assert read_config_file(p) == {"a_b": "1", "c": "x"}
        p.write_text("=3\n")
        with pytest.raises(ParseError):
            read_config_file(p)

    @pytest.mark.parametrize("kw", [{"rel_tol": 0.0}, {"rel_tol": 0.2}, {"n": 0}, {"format": "xml"},
                                    {"max_segments": 0}])
    def test_run_config_validation(self, kw):
        with pytest.raises(DomainError):
            RunConfig("transform", "runge", **kw)

    def test_provenance_omits_output(self):
        cfg = RunConfig("transform", "runge", k=1.0, output="/tmp/x")
        assert "output" not in cfg.provenance() and cfg.provenance()["k"] == 1.0
