import json

import pytest

from idpdawtl import model
from idpdawtl.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_accepts(capsys):
    code, out, _ = run(capsys, "run", "fixtures/exa21.wtl", "--", "b", "b", "a")
    assert (code, out) == (0, "ACCEPT\n")


def test_run_rejects(capsys):
    code, out, _ = run(capsys, "run", "exa21", "--", "b", "a")
    assert (code, out) == (1, "REJECT\n")


def test_chars_flag(capsys):
    code, _, _ = run(capsys, "run", "m_abc_counts", "--chars", "--", "abc")
    assert code == 0


def test_oracle(capsys):
    assert run(capsys, "oracle", "l_rep", "--", "b", "a")[0] == 0
    assert run(capsys, "oracle", "l_rep", "--", "b", "b", "a")[0] == 1
    assert run(capsys, "oracle", "nope", "--", "a")[0] == 2


def test_trace_deterministic(capsys):
    code, out, _ = run(capsys, "trace", "m_abc_counts", "--chars", "--", "abc")
    assert code == 0
    assert out.rstrip().endswith("ACCEPT")


def test_trace_nondeterministic(capsys):
    code, out, _ = run(capsys, "trace", "exa21", "--", "b", "b", "a")
    assert code == 0
    assert "wrap" in out
    code, out, _ = run(capsys, "trace", "exa21", "--", "b", "a")
    assert code == 1 and "REJECT" in out


def test_enumerate(capsys):
    code, out, err = run(capsys, "enumerate", "m_fin", "--max-len", "3")
    assert code == 0
    assert out.splitlines() == ["a", "a b"]
    assert "2 words" in err


def test_decide(capsys):
    code, out, _ = run(capsys, "decide", "emptiness", "m_empty")
    assert code == 0 and out.startswith("emptiness: true")
    code, out, _ = run(capsys, "decide", "finiteness", "exa21", "--json")
    data = json.loads(out)
    assert code == 1 and data["answer"] is False and data["witness"]
    assert run(capsys, "decide", "emptiness", "exa22")[0] == 2


def test_universality(capsys):
    code, out, _ = run(capsys, "universality", "m_astar", "--bound", "4")
    assert code == 1 and "witness: b a" in out


def test_compare_with_constructed(capsys, tmp_path):
    out_file = tmp_path / "nr.wtl"
    assert run(capsys, "construct", "nonreturning", "exa21", "-o", str(out_file))[0] == 0
    assert run(capsys, "validate", str(out_file)) == (0, "valid\n", "")
    code, out, _ = run(capsys, "compare", "exa21", str(out_file), "--max-len", "7")
    assert (code, out) == (0, "equivalent up to 7\n")


def test_compare_differs(capsys):
    code, out, _ = run(capsys, "compare", "exa21", "exa21_literal", "--max-len", "3")
    assert (code, out) == (1, "differ on: b\n")


def test_construct_union_and_npda(capsys, tmp_path):
    out_file = tmp_path / "u.wtl"
    assert run(capsys, "construct", "union", "exa22_l1", "exa22_l2", "-o", str(out_file))[0] == 0
    assert model.load(out_file).mode == model.NON_RETURNING
    code, out, _ = run(capsys, "construct", "npda", "m_fin")
    assert code == 0 and out.startswith("kind: npda")
    assert run(capsys, "construct", "union", "exa21", "m_astar")[0] == 2
    assert run(capsys, "construct", "union", "exa21")[0] == 2


def test_parikh(capsys):
    code, out, _ = run(capsys, "parikh", "oracle:l_rep", "--max-len", "2")
    assert (code, out) == (0, "#:0 a:1 b:1\n")
    code, out, _ = run(capsys, "parikh", "m_fin", "--max-len", "3")
    assert out.splitlines() == ["a:1 b:0", "a:1 b:1"]


def test_fixtures(capsys, tmp_path):
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == 0 and "m_abc_counts" in out
    target = tmp_path / "f.wtl"
    assert run(capsys, "fixtures", "emit", "m_fin", "-o", str(target))[0] == 0
    assert model.load(target) is not None
    assert run(capsys, "fixtures", "emit", "zzz")[0] == 2


def test_valc_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "valc", "run", "toy", "--chars", "--", "ab")
    assert code == 0 and out.splitlines()[-1] == "accepted"
    code, out, _ = run(capsys, "valc", "gen", "toy", "--chars", "--", "ab")
    word = out.split()
    assert code == 0 and "c" in word
    assert run(capsys, "valc", "check", "toy", "--", *word)[0] == 0
    code, out, _ = run(capsys, "valc", "mutate", "toy", "--", *word)
    assert run(capsys, "valc", "check", "toy", "--", *out.split())[0] == 1
    assert run(capsys, "valc", "gen", "toy", "--chars", "--", "ba")[0] == 1
    target = tmp_path / "invalc.wtl"
    assert run(capsys, "valc", "build", "toy", "-o", str(target))[0] == 0
    code, out, _ = run(capsys, "run", str(target), "--", *word)
    assert code == 1


def test_gen_shuffle_is_seeded(capsys):
    a = run(capsys, "valc", "gen", "toy", "--shuffle", "--seed", "3", "--chars", "--", "abab")[1]
    b = run(capsys, "valc", "gen", "toy", "--shuffle", "--seed", "3", "--chars", "--", "abab")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["run"],
    ["bogus"],
    ["run", "no/such/file.wtl", "--", "a"],
    ["validate", "exa21", "--", "a"],
    ["enumerate", "exa21", "--max-len", "-1"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_invalid_file(capsys, tmp_path):
    bad = tmp_path / "bad.wtl"
    bad.write_text("letters.push: a\nletters.pop: a\nstates: q0\ninitial: q0\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "not disjoint" in err


def test_resource_limit(capsys):
    code, _, err = run(capsys, "run", "exa21", "--max-configs", "2", "--",
                       "b", "b", "#", "b", "b", "a", "a")
    assert code == 2 and "limit" in err.lower()
