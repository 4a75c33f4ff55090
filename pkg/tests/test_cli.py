import csv
import io
import json
import subprocess
import sys

import pytest

from teleclone.cli import THREADS_ENV, build_parser, main, read_config, resolve, rows_to_csv


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_tmsv_peak(capsys):
    code, out, _ = _run(capsys, "sweep")
    rows = _table(out)
    assert code == 0 and len(rows) == 101
    best = max(rows, key=lambda r: float(r["fidelity"]))
    assert best["r"] == "0.88"
    assert float(best["fidelity"]) == pytest.approx(0.6667, abs=1e-4)
    assert list(rows[0])[:11] == [
        "protocol", "resource", "input", "r", "epsilon", "clone_index",
        "fidelity", "var_x", "var_p", "q", "zeta",
    ]
    assert list(rows[0])[11:] == ["eln", "ggm"]


def test_sweep_ps11_reversible_beats_tmsv(capsys):
    common = ["--protocol", "reversible", "--r-min", "0.1", "--r-steps", "10"]
    ps = _table(_run(capsys, "sweep", "--resource", "ps:1,1", *common)[1])
    tm = _table(_run(capsys, "sweep", *common)[1])
    assert all(float(a["fidelity"]) > float(b["fidelity"]) for a, b in zip(ps, tm))
    assert "herald_weight" in ps[0]


def test_sweep_is_byte_identical_across_threads(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["sweep", "--resource", "pa:1,1", "--r-min", "0.2", "--r-steps", "4", "--eps-max", "0.5", "--eps-steps", "3"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b), "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(_table(a.read_text())) == 12


def test_float_format():
    text = rows_to_csv([{"a": 1 / 3, "b": 2, "c": True, "d": None}])
    assert text == "a,b,c,d\n0.333333333333,2,true,\n"
    assert rows_to_csv([]) == ""


def test_optimize_r(capsys):
    code, out, _ = _run(capsys, "optimize")
    row = _table(out)[0]
    assert float(row["location"]) == pytest.approx(0.8814, abs=1e-3)
    assert float(row["value"]) == pytest.approx(2 / 3, abs=1e-9)


def test_optimize_epsilon(capsys):
    args = ["optimize", "--target", "epsilon", "--input", "squeezed:0.5", "--r", "0.89"]
    row = _table(_run(capsys, *args)[1])[0]
    assert float(row["location"]) == pytest.approx(0.38, abs=0.03)
    code, _, err = _run(capsys, "optimize", "--target", "epsilon")
    assert code == 2 and "--r" in err


def test_network(capsys):
    code, out, _ = _run(capsys, "network", "--r-max", "2", "--r-steps", "21")
    rows = _table(out)
    assert code == 0 and len(rows) == 84
    assert max(float(r["max_discrepancy"]) for r in rows) < 1e-9
    c1 = max(float(r["fidelity"]) for r in rows if r["clone_index"] == "1")
    assert c1 == pytest.approx(2 / 3, abs=2e-3)
    assert _run(capsys, "network", "--taus", "0.5,1.5")[0] == 2


def test_figure_directory(tmp_path, capsys):
    assert main(["figure", "fig2", "--r-steps", "5", "--out", str(tmp_path)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fig2.csv", "fig2.gp"]
    rows = _table((tmp_path / "fig2.csv").read_text())
    assert [r["r"] for r in rows] == ["0", "0.25", "0.5", "0.75", "1"]


def test_usage_errors(capsys, tmp_path):
    assert _run(capsys, "sweep", "--resource", "gkp")[0] == 2
    assert _run(capsys, "sweep", "--r-steps", "1")[0] == 2
    assert _run(capsys, "sweep", "--r-min", "1", "--r-max", "0")[0] == 2
    assert _run(capsys, "sweep", "--out", str(tmp_path / "missing" / "x.csv"))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--protocol", "teleport"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nresource = ps:1,1\nr-steps = 3\nthreads = 2\n")
    args = resolve(build_parser().parse_args(["sweep", "--config", str(cfg), "--r-steps", "4"]), environ={})
    assert (args.resource, args.r_steps, args.threads) == ("ps:1,1", 4, 2)
    rows = _table(_run(capsys, "sweep", "--config", str(cfg), "--r-min", "0.2")[1])
    assert len(rows) == 3 and rows[0]["resource"] == "ps:1,1"


def test_thread_environment_precedence():
    parse = build_parser().parse_args
    assert resolve(parse(["sweep"]), environ={THREADS_ENV: "3"}).threads == 3
    assert resolve(parse(["sweep", "--threads", "2"]), environ={THREADS_ENV: "3"}).threads == 2
    assert resolve(parse(["sweep"]), environ={}).threads == 1
    with pytest.raises(Exception):
        resolve(parse(["sweep"]), environ={THREADS_ENV: "many"})


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(Exception, match="unknown key"):
        read_config(str(cfg))
    cfg.write_text("just words\n")
    with pytest.raises(Exception, match="key = value"):
        read_config(str(cfg))


def test_validate_negative_control(tmp_path):
    report = tmp_path / "report.json"
    proc = subprocess.run(
        [sys.executable, "-m", "teleclone", "validate", "--samples", "20000",
         "--overlap-prefactor", "12.0", "--json", str(report)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 1
    assert "[FAIL] C13a purity" in proc.stdout
    summary = json.loads(report.read_text())
    assert summary["rng"] == "numpy.random.Philox"
    assert not next(c for c in summary["checks"] if c["id"] == "C13a")["passed"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "teleclone", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "sweep" in proc.stdout and "validate" in proc.stdout
