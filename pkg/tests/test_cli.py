import json
import subprocess
import sys
from pathlib import Path

import pytest

from gradext.lab.cli import main
from gradext.lab.suite import UnknownSuite, exit_code, run_suite, suite_jobs, suites

DOCS = Path(__file__).resolve().parent.parent / "docs"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ext_dim_nakayama(capsys):
    code, out, _ = run(capsys, "compute", "ext-dim", "nakayama_x3_p2", "--max-dim", "3")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 0 and doc["witness"]["summands"] == 3
    assert doc["certificates"]["replay_failures"] == []
    assert doc["parameters"]["max_dim"] == 3


def test_strongcheck_t2(capsys):
    code, out, _ = run(capsys, "compute", "strongcheck", "t2_f2_zgraded")
    doc = json.loads(out)
    assert code == 0 and doc["strongly_graded"] is False and doc["witness"] == [1, -1]


def test_dade_v4(capsys):
    code, out, _ = run(capsys, "compute", "dade", "v4_group_algebra_p2_c2graded", "--max-dim", "4")
    doc = json.loads(out)
    assert code == 0 and doc["fully_faithful"] and doc["dense"]


def test_gen_time_hom_ext1_decompose(capsys):
    _, out, _ = run(capsys, "compute", "gen-time", "nakayama_x3_p2", "--max-dim", "3", "--module", "simple:0")
    assert json.loads(out)["value"] == 2
    _, out, _ = run(capsys, "compute", "hom", "c2_group_algebra_p2", "--target", "simple:0")
    assert json.loads(out)["dim"] == 1
    _, out, _ = run(capsys, "compute", "ext1", "kronecker_p2_zgraded", "--module", "simple:0,simple:1",
                    "--target", "simple:0,simple:1")
    assert json.loads(out)["dim"] == 2
    _, out, _ = run(capsys, "compute", "decompose", "nakayama_x3_p2", "--module", "loewy")
    assert json.loads(out)["dims"] == [1, 2, 3]


def test_graded_compute_with_window(capsys):
    code, out, _ = run(capsys, "compute", "ext-dim", "t2_f2_zgraded", "--graded", "--window", "0:1", "--max-dim", "3")
    assert code == 0 and json.loads(out)["parameters"]["window"] == [0, 1]


def test_output_is_deterministic(capsys):
    a = run(capsys, "compute", "ext-dim", "t2_f2_zgraded", "--seed", "7")[1]
    b = run(capsys, "compute", "ext-dim", "t2_f2_zgraded", "--seed", "7")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["compute", "ext-dim", "no_such_fixture"],
    ["compute", "ext-dim", "kronecker_p2_zgraded", "--graded"],
    ["compute", "hom", "c2_group_algebra_p2"],
    ["compute", "gen-time", "c2_group_algebra_p2", "--module", "simple:9"],
    ["compute", "ext-dim", "c2_group_algebra_p2", "--window", "x"],
    ["compute", "bogus", "c2_group_algebra_p2"],
    ["run-suite", "no-such-suite"],
])
def test_input_errors_exit_3(capsys, argv):
    assert main(argv) == 3


def test_budget_exit_2(capsys):
    assert main(["compute", "ext-dim", "c2_group_algebra_p2", "--max-dim", "50"]) == 2


def test_sanity_suite(tmp_path, capsys):
    out = tmp_path / "l.json"
    side = tmp_path / "r.json"
    code, _, err = run(capsys, "run-suite", "finite-type-sanity", "-o", str(out), "--runtimes", str(side))
    doc = json.loads(out.read_text())
    assert code == 0 and doc["summary"]["verdicts"] == {"consistent": 5}
    assert set(json.loads(side.read_text())) == {f"FT-SANITY/{e['instance']}" for e in doc["entries"]}
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(doc, json.loads((DOCS / "ledger.schema.json").read_text()))


def test_suite_api():
    with pytest.raises(UnknownSuite):
        suite_jobs("x")
    assert set(suites()) == {"paper-claims", "finite-type-sanity", "all"}
    assert len(suite_jobs("all")) == len(suite_jobs("paper-claims")) + len(suite_jobs("finite-type-sanity"))
    code, doc = run_suite("finite-type-sanity")
    assert code == 0 and [e["instance"] for e in doc["entries"]] == sorted(e["instance"] for e in doc["entries"])


def test_exit_code_precedence():
    from gradext.lab.claims import ClaimVerdict
    v = ClaimVerdict("a", "b", {}, "violated", "x")
    b = ClaimVerdict("a", "c", {}, "undecided", "budget-exceeded")
    assert exit_code([]) == 0 and exit_code([v]) == 1 and exit_code([v, b]) == 2


def test_cache_dir(tmp_path, monkeypatch, capsys):
    from gradext import decomp
    monkeypatch.setenv("GRADEXT_CACHE_DIR", str(tmp_path))
    first = run(capsys, "compute", "ext-dim", "t2_f2_zgraded")[1]
    files = list(tmp_path.glob("catalogue-*.json"))
    assert len(files) == 1
    decomp._CATALOGUES.clear()
    assert run(capsys, "compute", "ext-dim", "t2_f2_zgraded")[1] == first


def test_console_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "gradext.lab.cli", "compute", "strongcheck", "c2_group_algebra_p2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and json.loads(r.stdout)["strongly_graded"] is True
