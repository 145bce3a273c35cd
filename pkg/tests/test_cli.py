import io
import json

import pytest

from hadamono.cli import COMMANDS, run


TREE_PROBLEM = {
    "space": {"kind": "SpokeTree"},
    "points": {
        "x": {"spoke": 2, "radius": "1/2"},
        "y": {"spoke": 1, "radius": "1/2"},
        "a": {"spoke": 3, "radius": "1/3"},
        "b": {"spoke": 2, "radius": "1/2"},
        "p": {"spoke": 1, "radius": "1"},
        "r": {"spoke": 1, "radius": "0"},
        "t1": {"spoke": 1, "radius": "1"},
        "t2": {"spoke": 2, "radius": "1"},
    },
    "duals": {
        "phi": {"terms": [{"tail": {"spoke": 5, "radius": "1/5"}, "head": {"spoke": 4, "radius": "1/4"}}]},
        "psi": {"terms": [{"alpha": "2", "t": "1/2", "tail": "a", "head": "b"}]},
        "psi2": {"terms": [{"tail": "a", "head": "b"}]},
        "up": {"terms": [{"tail": "r", "head": "p"}]},
    },
    "pair_sets": {
        "empty": [],
        "half": [
            {"point": {"spoke": n, "radius": "1/2"},
             "dual": {"terms": [{"tail": {"spoke": n + 1, "radius": f"1/{n + 1}"}, "head": {"spoke": n, "radius": f"1/{n}"}}]}}
            for n in range(1, 6)
        ],
        "one": [{"point": "x", "dual": "psi"}],
        "bad": [{"point": "r", "dual": "up"}, {"point": "p", "dual": {"terms": [{"tail": "p", "head": "r"}]}}],
    },
    "ground_sets": {
        "G": [{"point": "x", "dual": "psi"}, {"point": "y"}, {"point": "r", "dual": "up"}],
    },
    "objectives": {"f": {"op": "sqdist", "anchor": "y"}, "zero": {"op": "const", "value": "0"}},
    "grids": {"g": ["x", "y", "a", "b", "p", "r", "t2"]},
    "samples": {"s": {"base": "p", "lambdas": ["1/3"]}},
}

E1_PROBLEM = {
    "space": {"kind": "Euclidean", "dim": 1},
    "points": {"o": {"coords": ["0"]}, "one": {"coords": ["1"]}, "two": {"coords": ["2"]}},
    "duals": {"d": {"terms": [{"tail": "o", "head": "one"}]}, "d2": {"terms": [{"alpha": "2", "tail": "o", "head": "one"}]}},
    "objectives": {"f": {"op": "sqdist", "anchor": "o"}, "h": {"op": "sqdist", "anchor": "o", "scale": "1/2"}},
    "grids": {"g": ["o", "one", "two"]},
}


@pytest.fixture
def files(tmp_path):
    t = tmp_path / "tree.json"
    t.write_text(json.dumps(TREE_PROBLEM))
    e = tmp_path / "line.json"
    e.write_text(json.dumps(E1_PROBLEM))
    return str(t), str(e)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_empty_set_is_monotone(files):
    code, out, _ = cli("check-monotone", files[0], "--set", "empty")
    assert code == 0 and "[PASS]" in out


def test_failing_check_exits_one(files):
    code, out, _ = cli("check-monotone", files[0], "--set", "bad")
    assert code == 1 and "CHECK FAILED" in out


def test_polar_requires_ground_superset(files):
    code, _, err = cli("polar", files[0], "--set", "half", "--ground", "G")
    assert code == 2 and "error" in err


def test_usage_errors(files, tmp_path):
    assert cli("frobnicate")[0] == 2
    assert cli("polar", files[0], "--set", "nope", "--ground", "G")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = cli("check-monotone", str(bad), "--set", "empty")
    assert code == 2 and "invalid JSON" in err
    bad.write_text(json.dumps({"space": {"kind": "SpokeTree"}, "points": {"q": {"spoke": -1, "radius": "1"}}}))
    code, _, err = cli("check-monotone", str(bad), "--set", "empty")
    assert code == 2 and "points.q" in err
    assert cli("check-monotone", str(tmp_path / "missing.json"), "--set", "empty")[0] == 2


def test_json_schema_tag(files):
    code, out, _ = cli("closure", files[0], "--set", "one", "--ground", "G", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "hadamono/1" and doc["command"] == "closure"
    assert doc["provenance"]["ground"] == "G"


EXERCISE = [
    ("check-monotone", "t", "--set", "half"),
    ("polar", "t", "--set", "one", "--ground", "G"),
    ("closure", "t", "--set", "one", "--ground", "G"),
    ("extend", "t", "--set", "empty", "--ground", "G", "--order", "2,1,0"),
    ("enumerate-extensions", "t", "--set", "empty", "--ground", "G"),
    ("check-flat", "t", "--x", "x", "--y", "y", "--a", "a", "--b", "b", "--lambda", "1/4"),
    ("check-flat", "t", "--samples", "20"),
    ("check-fl", "t", "--set", "half", "--sample", "s"),
    ("check-cn", "t", "--x", "x", "--y", "a", "--z", "p", "--t", "1/3"),
    ("check-cs", "t", "--v", "x,a", "--w", "p,b"),
    ("dual-norm", "t", "--dual", "psi", "--witnesses", "a,b"),
    ("dual-equiv", "t", "--dual", "psi", "--other", "psi2", "--witnesses", "a,b,p,x"),
    ("ifun", "e", "--objective", "h", "--x", "one", "--xdual", "d", "--grid", "g"),
    ("mf-member", "e", "--objective", "h", "--x", "one", "--xdual", "d", "--grid", "g"),
    ("prox", "e", "--objective", "f", "--y", "o", "--ydual", "d", "--base", "o"),
    ("prox", "t", "--objective", "f", "--y", "p", "--base", "r"),
    ("check-laws", "t", "--ground", "G", "--instances", "2"),
    ("check-laws", None, "--instances", "2"),
    ("repro-paper", None),
]

EXPECTED = {
    "check-flat --x": 1,  # the spoke tree is not flat
    "check-flat --samples": 1,
    "check-fl": 1,
}


@pytest.mark.parametrize("case", EXERCISE, ids=lambda c: " ".join(x for x in c if x not in ("t", "e") and x is not None)[:40])
def test_every_subcommand(files, case):
    name, which, *rest = case
    argv = [name] + ([] if which is None else [files[0] if which == "t" else files[1]]) + rest
    key = f"{name} {rest[0]}" if rest and name == "check-flat" else name
    want = EXPECTED.get(key, 0)
    for fmt in ("text", "json"):
        code, out, err = cli(*argv, "--format", fmt)
        assert code == want, err
        if fmt == "json":
            assert json.loads(out)["schema"] == "hadamono/1"
    assert set(COMMANDS) >= {name}


def test_all_commands_exercised():
    assert {c[0] for c in EXERCISE} == set(COMMANDS)


def test_cli_values(files):
    _, out, _ = cli("ifun", files[1], "--objective", "h", "--x", "one", "--xdual", "d", "--grid", "g", "--format", "json")
    doc = json.loads(out)
    assert doc["value"] == "1/2" and doc["argmin"] == {"coords": ["1"]}
    _, out, _ = cli("mf-member", files[1], "--objective", "h", "--x", "one", "--xdual", "d2", "--grid", "g", "--format", "json")
    assert json.loads(out)["verdict"] == "CertifiedOut"
    _, out, _ = cli("prox", files[1], "--objective", "f", "--y", "o", "--ydual", "d", "--base", "o", "--format", "json")
    doc = json.loads(out)
    assert doc["minimizer"] == {"coords": ["-1/3"]} and doc["exact_value"] == "-1/6"


def test_repro_deterministic():
    a = cli("repro-paper", "--format", "json", "--seed", "7")
    b = cli("repro-paper", "--format", "json", "--seed", "7")
    assert a[0] == 0 and a[1] == b[1]


def test_thread_env(files, monkeypatch):
    monkeypatch.setenv("HADAMONO_THREADS", "3")
    code, out, _ = cli("check-laws", "--instances", "4", "--format", "json", "--seed", "3")
    monkeypatch.setenv("HADAMONO_THREADS", "1")
    code1, out1, _ = cli("check-laws", "--instances", "4", "--format", "json", "--seed", "3")
    assert code == code1 == 0 and out == out1
