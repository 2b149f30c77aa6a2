import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cross4, rand_skew
from nlie import cli
from nlie.algebra import StructureConstants
from nlie.deformation import DeformationSeries
from nlie.exact import UniPoly
from nlie.io import (ParseError, parse_algebra, serialize_algebra, series_from_algebra,
                     series_to_algebra)
from nlie.variety import catalog


def doc(n, m, brackets, **extra):
    d = {"arity": n, "dim": m, "brackets": brackets}
    d.update(extra)
    return json.dumps(d)


# ------------------------------------------------------------------ parsing

def test_parse_direct_encoding():
    A = parse_algebra('{"arity":3,"dim":3,"brackets":[{"args":[1,2,3],"value":{"1":"1"}}]}')
    assert (A.n, A.m) == (3, 3)
    assert A.coefficient((0, 1, 2)) == (1, 0, 0)
    assert A.coefficient((1, 0, 2)) == (-1, 0, 0)


def test_parse_empty_is_abelian():
    A = parse_algebra(doc(3, 4, []))
    assert A.is_abelian()


@pytest.mark.parametrize("brackets,where", [
    ([{"args": [2, 1, 3], "value": {"1": "1"}}], "brackets[0].args"),
    ([{"args": [1, 2, 5], "value": {"1": "1"}}], "brackets[0].args[2]"),
    ([{"args": [1, 2, 3], "value": {"7": "1"}}], "brackets[0].value['7']"),
    ([{"args": [1, 2, 3], "value": {"1": "1/0"}}], "brackets[0].value['1']"),
    ([{"args": [1, 2, 3], "value": {"1": "abc"}}], "brackets[0].value['1']"),
    ([{"args": [1, 2, 3], "value": {"1": 0.5}}], "brackets[0].value['1']"),
    ([{"args": [1, 2], "value": {}}], "brackets[0].args"),
    ([{"args": [1, 2, 3], "value": {}}, {"args": [1, 2, 3], "value": {}}], "brackets[1].args"),
])
def test_parse_errors_are_located(brackets, where):
    with pytest.raises(ParseError) as exc:
        parse_algebra(doc(3, 4, brackets))
    assert exc.value.where == where


def test_parse_error_json_position():
    with pytest.raises(ParseError) as exc:
        parse_algebra('{"arity": 3,\n "dim": }')
    assert exc.value.where.startswith("line 2")


def test_parse_header_errors():
    for bad in ['{"dim": 3}', '{"arity": 1, "dim": 3}', '{"arity": 3, "dim": "x"}', "[]",
                doc(3, 3, [], scalar_mode="float")]:
        with pytest.raises(ParseError):
            parse_algebra(bad)


def test_parse_poly_mode():
    A = parse_algebra(doc(3, 4, [{"args": [2, 3, 4], "value": {"1": "1 + t^2", "2": "2/3*t"}}],
                          scalar_mode="poly:t"))
    v = A.coefficient((1, 2, 3))
    assert v[0] == UniPoly((1, 0, 1), "t")
    assert v[1] == UniPoly((0, Fraction(2, 3)), "t")
    with pytest.raises(ParseError):
        parse_algebra(doc(3, 4, [{"args": [2, 3, 4], "value": {"1": "s"}}], scalar_mode="poly:t"))


# --------------------------------------------------------------- round trip

def test_round_trip_catalog():
    for n, m in [(3, 4), (3, 5), (4, 6)]:
        for e in catalog(n, m):
            A = e.instantiate(e.default_params())
            text = serialize_algebra(A)
            B = parse_algebra(text)
            assert B == A
            assert serialize_algebra(B) == text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 3), (3, 4), (3, 5), (4, 5)]))
def test_round_trip_random(seed, nm):
    n, m = nm
    A = rand_skew(random.Random(seed), n, m, density=0.5)
    assert parse_algebra(serialize_algebra(A)) == A


def test_round_trip_series():
    base = cross4()
    mu1 = StructureConstants.from_brackets(3, 4, {(1, 2, 3): {1: Fraction(-2, 7)}})
    mu2 = StructureConstants.from_brackets(3, 4, {(1, 2, 4): {3: 5}})
    D = DeformationSeries(base, [mu1, mu2])
    text = serialize_algebra(series_to_algebra(D))
    assert '"scalar_mode": "poly:t"' in text
    E = series_from_algebra(parse_algebra(text))
    assert E.base == base and E.terms[1:] == [mu1, mu2]


# ----------------------------------------------------------------------- CLI

@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return {
        "abelian": write("ab.json", doc(3, 4, [])),
        "ex": write("ex.json", doc(3, 4, [{"args": [2, 3, 4], "value": {"1": "1"}}])),
        "bad": write("bad.json", doc(3, 4, [{"args": [1, 2, 3], "value": {"1": "1"}},
                                            {"args": [1, 2, 4], "value": {"2": "1"}}])),
        "series": write("s.json", doc(3, 4, [{"args": [2, 3, 4], "value": {"1": "1", "2": "t"}}],
                                      scalar_mode="poly:t")),
        "garbled": write("g.json", doc(3, 4, [{"args": [2, 1, 3], "value": {}}])),
    }


def test_validate_catalog_instance(tmp_path):
    for e in catalog(3, 5):
        p = tmp_path / "a.json"
        p.write_text(serialize_algebra(e.instantiate(e.default_params())))
        rep, status, _ = cli.run(["validate", str(p)])
        assert rep.verdict == "ok" and status == 0


def test_validate_failure(files):
    rep, status, _ = cli.run(["validate", files["bad"], "--format", "structured"])
    assert status == cli.EXIT_FAIL and rep.verdict == "fail"
    out = json.loads(rep.structured())
    assert out["payload"]["residual_count"] == 6


def test_cohomology_abelian(files):
    rep, status, _ = cli.run(["cohomology", "--p", "2", files["abelian"]])
    assert status == 0
    assert rep.payload["dim_H"] == 16


def test_virasoro_message():
    rep, status, _ = cli.run(["virasoro-check", "--window", "3"])
    assert status == 0
    assert "all residuals divisible by z^2+4" in rep.table()


def test_larsson_command():
    rep, status, _ = cli.run(["larsson-check", "--window", "1"])
    assert status == 0 and rep.payload["ok"]


def test_series_commands(files):
    rep, status, _ = cli.run(["deform-check", files["series"]])
    assert status == 0 and rep.payload["infinitesimal_cocycle"]
    rep, status, _ = cli.run(["obstruct", files["series"]])
    assert status == 0 and rep.payload["solvable"]
    rep, status, _ = cli.run(["trivialize", files["series"]])
    assert status == 1 and not rep.payload["trivialized"]


def test_extend_degenerate_classify(files):
    rep, status, _ = cli.run(["extend", files["ex"], "--omega", "1,2,3=1"])
    assert status == 0 and rep.payload["extension_valid"]
    rep, status, _ = cli.run(["degenerate", files["ex"], "--diag", "t,1,1,1"])
    assert status == 1 and rep.payload["poles"]
    rep, status, _ = cli.run(["degenerate", files["ex"], "--diag", "t,t,t,t"])
    assert status == 0 and rep.payload["abelian"]
    rep, status, _ = cli.run(["classify", files["ex"]])
    assert status == 0
    assert [x["id"] for x in rep.payload["matches"]] == ["le-n+1:3b"]


def test_catalog_command():
    rep, status, _ = cli.run(["catalog", "--arity", "3", "--dim", "5", "--entry", "n+2:4g",
                              "--param", "s=1", "--param", "t=2", "--param", "u=3"])
    assert status == 0 and rep.payload["valid"]
    rep, status, err = cli.run(["catalog", "--arity", "3", "--dim", "5", "--entry", "n+2:4g",
                                "--param", "s"])
    assert status == cli.EXIT_PARSE and "--param" in err


def test_exit_codes(files, monkeypatch):
    assert cli.run(["validate", files["garbled"]])[1] == cli.EXIT_PARSE
    assert cli.run(["validate", "/nonexistent/x.json"])[1] == cli.EXIT_PARSE
    assert cli.run(["cohomology"])[1] == cli.EXIT_PARSE
    assert cli.run(["extend", files["ex"], "--omega", "1,2=1"])[1] == cli.EXIT_PARSE

    def boom(args):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli.COMMANDS, "validate", (boom, "", ("file",)))
    rep, status, err = cli.run(["validate", files["ex"]])
    assert status == cli.EXIT_INTERNAL and "boom" in err


def test_verdict_matches_status(files):
    for argv in (["validate", files["ex"]], ["validate", files["bad"]],
                 ["trivialize", files["series"]], ["invariants", files["ex"]]):
        rep, status, _ = cli.run(argv)
        assert (rep.verdict == "ok") == (status == 0)


def test_structured_output_deterministic(files, capsys):
    outs = []
    for _ in range(2):
        for argv in (["invariants", files["ex"]], ["classify", files["ex"]],
                     ["extend", files["ex"], "--omega", "1,2,3=1"]):
            cli.main(argv + ["--format", "structured"])
        outs.append(capsys.readouterr().out.encode())
    assert outs[0] == outs[1]
    json.loads(outs[0].decode().split("\n}\n")[0] + "\n}")


def test_main_prints_error(files, capsys):
    assert cli.main(["validate", files["garbled"]]) == cli.EXIT_PARSE
    err = capsys.readouterr().err
    assert "brackets[0].args" in err
