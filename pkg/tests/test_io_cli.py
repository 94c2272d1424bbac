import json

import numpy as np
import pytest

from lrcat import cli, suites
from lrcat.category import perturb_F
from lrcat.errors import ParseError, SchemaError, UnknownSuite, ValidationFailed
from lrcat.families import fibonacci, ising, pointed_cyclic, su2_level_k
from lrcat.induction import ising_fermion_qsystem
from lrcat.io import (
    RunReport,
    category_from_dict,
    category_to_dict,
    dumps_category,
    dumps_qsystem,
    load_category,
    load_qsystem,
    resolve_category,
    resolve_qsystem,
    round_sig,
)


@pytest.mark.parametrize("make", [fibonacci, ising, lambda: su2_level_k(3), lambda: pointed_cyclic(4, 1)])
def test_category_roundtrip_byte_identical(make, tmp_path):
    text = dumps_category(make())
    p = tmp_path / "cat.json"
    p.write_text(text)
    assert dumps_category(load_category(p)) == text


def test_qsystem_roundtrip(tmp_path):
    cat = ising()
    text = dumps_qsystem(ising_fermion_qsystem(cat))
    p = tmp_path / "q.json"
    p.write_text(text)
    assert dumps_qsystem(load_qsystem(p, cat)) == text


def test_non_associative_ring_names_quadruple():
    doc = category_to_dict(ising())
    doc["N"] = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                [[0, 1, 0], [1, 0, 1], [0, 1, 0]],
                [[0, 0, 1], [0, 1, 0], [1, 1, 0]]]
    with pytest.raises(ValidationFailed, match=r"quadruple \(\d+, \d+, \d+, \d+\)"):
        category_from_dict(doc)


def test_missing_F_block_names_key():
    doc = category_to_dict(fibonacci())
    del doc["F"]["1,1,1,1,0,1"]
    with pytest.raises(SchemaError, match="1,1,1,1,0,1"):
        category_from_dict(doc)


def test_pentagon_failure_on_load():
    doc = category_to_dict(perturb_F(fibonacci(), (1, 1, 1, 1, 1, 1), 1e-3))
    with pytest.raises(ValidationFailed, match="pentagon"):
        category_from_dict(doc)


def test_version_and_syntax(tmp_path):
    doc = category_to_dict(fibonacci())
    doc["format_version"] = "2"
    with pytest.raises(SchemaError):
        category_from_dict(doc)
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(ParseError):
        load_category(bad)


def test_resolve_builtins():
    assert resolve_category("pointed_cyclic:4:1").rank == 4
    assert resolve_category("su2_level_3").rank == 4
    cat = resolve_category("pointed_cyclic:4:1")
    assert resolve_qsystem("subgroup:0,2", cat).theta == {0: 1, 2: 1}
    with pytest.raises(ParseError):
        resolve_qsystem("nonsense", cat)


def test_round_sig():
    assert round_sig(1 / 3) == 0.333333333333
    assert round_sig({"a": [np.float64(2 / 3), 1 + 1j / 3]}) == {"a": [0.666666666667, [1.0, 0.333333333333]]}


def test_report_pass_is_conjunction():
    r = RunReport("x")
    r.add("small", 1e-12, 1e-9)
    assert r.passed
    r.exact("broken", False)
    assert not r.passed
    d = r.to_dict(with_time=False)
    assert [c["pass"] for c in d["checks"]] == [True, False]
    assert "wallTime" not in d


# suites ------------------------------------------------------------------------------

def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        suites.run_suite("everything")


def test_coherence_suite_passes():
    r = suites.run_suite("coherence")
    assert r.passed
    assert r.wall_time < 60


def test_e6_suite_reports_identity():
    r = suites.run_suite("e6")
    names = [c.name for c in r.checks]
    assert any("3+sqrt3" in n for n in names)
    assert r.passed


def test_corrupted_builtin_fails_with_named_check(monkeypatch):
    good = suites.coherence_categories

    def corrupted():
        cats = good()
        cats[cats.index(next(c for c in cats if c.name == "fibonacci"))] = \
            perturb_F(fibonacci(), (1, 1, 1, 1, 1, 1), 1e-3)
        return cats

    monkeypatch.setattr(suites, "coherence_categories", corrupted)
    r = suites.run_suite("coherence")
    assert not r.passed
    # the hexagon is built on the same F, so it breaks alongside the pentagon
    assert [c.name for c in r.checks if not c.passed] == ["pentagon/fibonacci*", "hexagon/fibonacci*"]


# command line ------------------------------------------------------------------------

def test_cli_lr_build(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["lr-build", "fibonacci", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "lr-build" and doc["passed"]
    assert doc["artifacts"]["lr"]["fibonacci"]["wValue"] == 3.61803398875
    assert "PASS" in capsys.readouterr().out


def test_cli_eval_diagram_twelve_digits(tmp_path, capsys):
    d = tmp_path / "loop.diag"
    d.write_text("loop(tau)\n")
    assert cli.main(["eval-diagram", "fibonacci", str(d)]) == 0
    assert "1.61803398875" in capsys.readouterr().out


def test_cli_input_error(capsys):
    assert cli.main(["eval-diagram", "fibonacci", "vertex(t,t->"]) == 2
    assert "column 12" in capsys.readouterr().err
    assert cli.main(["center", "no_such_family"]) == 2


def test_cli_check_failure_exit_code(capsys):
    # the identity chain does not hold for this non-local Q-system, so some checks fail
    assert cli.main(["induce", "pointed_cyclic:4:1", "subgroup:0,2"]) == 1


def test_cli_file_inputs(tmp_path, capsys):
    c = tmp_path / "ising.json"
    q = tmp_path / "q.json"
    assert cli.main(["export-category", "ising"]) == 0
    c.write_text(capsys.readouterr().out)
    assert cli.main(["export-qsystem", str(c), "ising_fermion"]) == 0
    q.write_text(capsys.readouterr().out)
    out = tmp_path / "d.json"
    assert cli.main(["verify-duality", str(c), str(q), "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["inputs"]["category"].startswith("sha256:")
    assert doc["artifacts"]["duality"]["Z"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_cli_json_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["center", "ising", "--json", str(a)])
    cli.main(["center", "ising", "--json", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da.pop("wallTime")
    db.pop("wallTime")
    assert da == db
