import json

import pytest

from burau_thompson import suites
from burau_thompson.cli import run
from burau_thompson.thompson import THREE_PIECE_EXAMPLE, TElement

ID = json.dumps(TElement.identity().to_json())
EXAMPLE = json.dumps(THREE_PIECE_EXAMPLE.to_json())


def lines(capsys):
    return [json.loads(x) for x in capsys.readouterr().out.splitlines() if x.strip()]


@pytest.fixture
def id_file(tmp_path):
    p = tmp_path / "id.json"
    p.write_text(ID)
    return str(p)


def test_compose_identity_files(id_file, capsys):
    assert run(["thom", "compose", id_file, id_file]) == 0
    out = lines(capsys)
    assert TElement.from_json(out[0]).is_identity()


def test_gv_with_identity(capsys):
    assert run(["gv", EXAMPLE, ID]) == 0
    assert lines(capsys) == [0]


def test_thompson_commands(capsys):
    assert run(["thom", "eval", EXAMPLE, "5/8"]) == 0
    assert run(["thom", "inv", EXAMPLE]) == 0
    assert run(["thom", "reduce", '{"t1": "100", "t0": "100", "rot": 0}']) == 0
    ev, inv, red = lines(capsys)
    assert ev == "3/4"
    assert TElement.from_json(red).is_identity()


def test_burau_three_strands(capsys):
    assert run(["burau", "--n", "3", "s1"]) == 0
    (m,) = lines(capsys)
    entries = {(r, c): p for r, c, p in m["entries"]}
    assert entries == {(1, 1): {"0": 1, "1": -1}, (2, 1): {"1": 1}, (1, 2): {"0": 1}, (3, 3): {"0": 1}}


def test_burau_numeric_and_pretty(capsys):
    assert run(["burau", "--n", "2", "s1", "--t-eval", "2"]) == 0
    assert lines(capsys)[0]["numeric"] == [[-1.0, 1.0], [2.0, 0.0]]
    assert run(["--pretty", "burau", "--n", "2", "s1"]) == 0
    assert "1 - t" in capsys.readouterr().out


def test_malformed_json_reports_byte_offset(capsys):
    prefix = '{"t1": "é", "rot": '
    assert run(["gv", prefix + "}", ID]) == 1
    err = capsys.readouterr().err
    assert f"byte offset {len(prefix.encode())}" in err and len(prefix.encode()) == 20


def test_domain_errors(capsys):
    assert run(["burau", "--n", "3", "s7"]) == 1
    assert run(["verify", "no-such-suite"]) == 1
    assert "unknown suite" in capsys.readouterr().err


def test_braided_commands(capsys):
    word = json.dumps([{"edge": [["", 0], ["L", 0]], "exp": 1}])
    assert run(["braided", "rho", word, "--window", "5"]) == 0
    assert run(["braided", "ext-cocycle", EXAMPLE, ID]) == 0
    assert run(["braided", "relations", "--radius", "2"]) == 0
    out = lines(capsys)
    assert len(out[0]["rows"]) == 5
    assert out[1] == 0
    assert all(r["failed"] == 0 for r in out[2:])


def test_neretin_commands(capsys):
    g = json.dumps({"t0": [""], "t1": [""], "beta": [["0", "0"], ["1", "1"], ["2", "2"]], "comps": {"0": [""]}})
    assert run(["neretin", "compose", g, g]) == 0
    assert run(["neretin", "index", g]) == 0
    assert run(["neretin", "sign-cocycle", g, g]) == 0
    composed, index, sign = lines(capsys)
    assert composed["comps"] == {} and index == 0 and sign in (0, 1)


def test_tree_dot(capsys):
    assert run(["tree", "dot", "--radius", "2"]) == 0
    assert capsys.readouterr().out.startswith("graph")


def test_verify_examples(capsys):
    assert run(["verify", "thompson-laws", "--seed", "7", "--cases", "1000"]) == 0
    assert run(["verify", "burau-relations", "--seed", "1", "--cases", "50"]) == 0
    out = lines(capsys)
    assert all(r["passed"] for r in out)


def test_verify_all_is_deterministic(capsys):
    assert run(["verify", "all", "--seed", "0", "--cases", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["verify", "all", "--seed", "0", "--cases", "3"]) == 0
    assert capsys.readouterr().out == first
    report = [json.loads(x) for x in first.splitlines()]
    assert {r["property"] for r in report[:-1]} >= {"associativity", "homomorphism", "signature-cocycle"}
    assert report[-1]["passed"]


def test_failing_property_gives_witness_and_exit_two(monkeypatch, capsys):
    def broken(seed, cases):
        r = suites.PropertyResult("always-fails")
        r.record(False, lambda: {"g": json.loads(ID)})
        return [r]
    monkeypatch.setitem(suites.RUNNERS, "thompson-laws", broken)
    assert run(["verify", "thompson-laws"]) == 2
    captured = capsys.readouterr()
    assert json.loads(captured.out.splitlines()[0])["witness"] == {"g": json.loads(ID)}
    assert "always-fails" in captured.err
