import io
import json
import subprocess
import sys

from overdet import catalog
from overdet.cli import EXIT_ANALYSIS, EXIT_OK, EXIT_USAGE, run_cli
from overdet.sysparse import emit


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_analyze_file_json(tmp_path):
    path = tmp_path / "cr2.sys"
    path.write_text(emit(catalog.system("cr2")))
    code, out, _ = run("analyze", str(path), "--format", "json", "--query-dim", "0",
                       "--samples", "100")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["removability"] == {"0": "removable"}
    assert data["verdict"]["classification"] == "overdetermined"


def test_catalog_sharp_message():
    code, out, _ = run("catalog", "example2_n3d1", "--query-dim", "1", "--samples", "100")
    assert code == EXIT_OK
    assert "dim 1: sharp-counterexample" in out


def test_broken_file_reports_location(tmp_path):
    path = tmp_path / "broken.sys"
    path.write_text("vars 2;\nunknowns 1;\neq d1 + * d2;\n")
    code, out, err = run("analyze", str(path))
    assert code == EXIT_ANALYSIS and out == ""
    assert "parse error" in err and "line 3" in err


def test_missing_file():
    code, _, err = run("analyze", "/nonexistent/x.sys")
    assert code == EXIT_ANALYSIS and "cannot read" in err


def test_unknown_catalog_name():
    code, _, err = run("catalog", "nope")
    assert code == EXIT_ANALYSIS and "nope" in err


def test_usage_errors():
    assert run()[0] == EXIT_USAGE
    assert run("catalog", "cr2", "--format", "xml")[0] == EXIT_USAGE
    assert run("catalog", "cr2", "--samples", "0")[0] == EXIT_USAGE
    assert run("catalog", "cr2", "--seed", "-1")[0] == EXIT_USAGE
    assert run("catalog", "cr2", "--query-dim", "4")[0] == EXIT_USAGE


def test_list_catalog():
    code, out, _ = run("list-catalog")
    assert code == EXIT_OK
    names = [line.split()[0] for line in out.splitlines()]
    assert names == catalog.names()
    assert "cr3" in names and "wave2" in names


def test_json_deterministic():
    a = run("catalog", "example2_n3d1", "--format", "json", "--seed", "42", "--samples", "200")[1]
    b = run("catalog", "example2_n3d1", "--format", "json", "--seed", "42", "--samples", "200")[1]
    assert a == b
    assert json.loads(a)["seed"] == 42


def test_env_seed(monkeypatch):
    monkeypatch.setenv("OVERDET_SEED", "77")
    _, out, _ = run("catalog", "cr1", "--format", "json", "--samples", "20")
    assert json.loads(out)["seed"] == 77
    _, out, _ = run("catalog", "cr1", "--format", "json", "--samples", "20", "--seed", "5")
    assert json.loads(out)["seed"] == 5


def test_skip_flags():
    _, out, _ = run("catalog", "cr2", "--format", "json", "--no-omega", "--no-flagcover")
    data = json.loads(out)
    assert data["omega"] is None and data["flagcover"] is None


def test_max_res_len_truncates():
    _, out, _ = run("catalog", "grad3", "--format", "json", "--max-res-len", "1", "--samples", "20",
                    "--no-omega")
    data = json.loads(out)
    assert data["resolution"]["truncated"]
    assert data["ext"]["3"]["status"] == "unknown"


def test_text_output_derived_from_record():
    code, out, _ = run("catalog", "wave2", "--samples", "20")
    assert code == EXIT_OK
    assert "NotElliptic" in out
    assert "degenerate at xi=(1, 1)" in out


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "overdet.cli", "list-catalog"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "cr2" in proc.stdout
