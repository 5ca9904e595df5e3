import io
import json
import random

import pytest

from hilbext import cli, cli_io
from hilbext.ext_calculator import Taut, spherical_report
from hilbext.samples import hom_model_context, random_context


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_fixtures_parse_and_validate():
    for name in ("trivial.ctx", "k3like.ctx"):
        ctx = cli_io.parse_context(cli_io.FIXTURES / name)
        assert ctx.validate() == []


def test_k3like_is_never_spherical():
    ctx = cli_io.parse_context("k3like.ctx")
    for n in (2, 3, 4):
        assert spherical_report(ctx, "E", "O", n).verdict == "neither"


def test_round_trip_fixtures():
    for name in ("trivial.ctx", "k3like.ctx"):
        ctx = cli_io.parse_context(name)
        text = cli_io.serialize_context(ctx)
        again = cli_io.parse_context_text(text)
        assert again == ctx
        assert cli_io.serialize_context(again) == text


@pytest.mark.parametrize("seed", range(10))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    ctx = random_context(rng) if seed % 2 else hom_model_context(rng, ["A", "B"])
    first = cli_io.parse_context_text(cli_io.serialize_context(ctx), validate=False)
    # files list labels by degree, so only the basis order may change on the first pass
    assert first.compose == ctx.compose and first.identities == ctx.identities
    assert all(set(first.ext[k].basis) == set(v.basis) for k, v in ctx.ext.items())
    again = cli_io.parse_context_text(cli_io.serialize_context(first), validate=False)
    assert again == first


def test_parse_error_position():
    with pytest.raises(cli_io.ContextError) as info:
        cli_io.parse_context_text('{\n  "objects": ["O",\n  ]\n}')
    assert info.value.where.startswith("line 3, column")


def test_degree_violation_names_triple():
    doc = {
        "objects": ["A", "B"],
        "ext": {"A,B": {"0": ["x"]}, "B,B": {"1": ["y"]}, "A,B ": {}},
        "compose": {"A,B,B": [["y", "x", {"x": 1}]]},
    }
    del doc["ext"]["A,B "]
    with pytest.raises(cli_io.ContextError) as info:
        cli_io.context_from_dict(doc)
    assert info.value.where.startswith("compose.A,B,B")
    assert "degree" in info.value.message


@pytest.mark.parametrize("doc, where", [
    ({"objects": "O"}, "objects"),
    ({"objects": ["O", "O"]}, "objects"),
    ({"objects": ["O"], "ext": {"O,X": {"0": ["a"]}}}, "ext.O,X"),
    ({"objects": ["O"], "ext": {"O": {"0": ["a"]}}}, "ext.O"),
    ({"objects": ["O"], "ext": {"O,O": {"zero": ["a"]}}}, "ext.O,O.zero"),
    ({"objects": ["O"], "ext": {"O,O": {"0": ["a"]}}, "compose": {"O,O,O": [["a", "a", {"a": "1/0"}]]}},
     "compose.O,O,O[0].a"),
    ({"objects": ["O"], "identities": {"X": "a"}}, "identities.X"),
])
def test_validation_paths(doc, where):
    with pytest.raises(cli_io.ContextError) as info:
        cli_io.context_from_dict(doc)
    assert info.value.where == where


def test_class_round_trip():
    rng = random.Random(0)
    ctx = hom_model_context(rng, ["A", "B"])
    from hilbext.ext_calculator import HilbExtSpace
    from hilbext.samples import random_class

    space = HilbExtSpace(ctx, Taut("A", "B"), Taut("A", "B"), 3)
    c = random_class(rng, space, terms=4)
    assert cli_io.class_from_dict(ctx, 3, cli_io.class_to_dict(c)) == c


def test_cli_ext_example():
    code, text = run("ext", "--ctx", "trivial.ctx", "--n", "2", "--source", "taut:E,L", "--target", "taut:F,M")
    lines = text.splitlines()
    assert code == 0
    assert len(lines) == 3 and lines[-1] == "poincare: 2"


def test_cli_cohom():
    code, text = run("cohom", "--ctx", "k3like.ctx", "--n", "2", "--target", "taut:E,O")
    assert code == 0 and text.splitlines()[-1].startswith("poincare: ")


def test_cli_spherical():
    code, text = run("spherical", "--ctx", "k3like.ctx", "--n", "3", "--source", "taut:E,O", "--serre")
    assert code == 0
    assert "verdict: neither" in text and "guaranteed: yes" in text


def test_cli_yoneda(tmp_path):
    classes = {
        "a": {"source": "taut:F,M", "target": "taut:E,L",
              "terms": [{"summand": "1", "fixed": ["FE"], "free": ["ML"], "coeff": "2"}]},
        "b": {"source": "taut:E,L", "target": "taut:F,M",
              "terms": [{"summand": "2", "fixed": ["EM", "LF"], "free": [], "coeff": 1}]},
    }
    path = tmp_path / "classes.json"
    path.write_text(json.dumps(classes))
    outs = {}
    for engine in ("closed", "oracle"):
        code, text = run("yoneda", "--ctx", "trivial.ctx", "--n", "2", "--class", str(path), "--engine", engine)
        assert code == 0
        outs[engine] = json.loads(text)
    assert outs["closed"] == outs["oracle"]
    assert outs["closed"]["terms"]


def test_cli_errors():
    assert run("ext", "--ctx", "trivial.ctx", "--n", "1", "--source", "taut:E,L", "--target", "taut:F,M")[0] == 1
    assert run("ext", "--ctx", "trivial.ctx", "--n", "2", "--source", "taut:E,Q", "--target", "taut:F,M")[0] == 1
    assert run("ext", "--ctx", "missing.ctx", "--n", "2", "--source", "taut:E,L", "--target", "taut:F,M")[0] == 1
    assert run("ext", "--ctx", "trivial.ctx", "--n", "2")[0] == 1


def test_verify_failure_exit_code(monkeypatch):
    from hilbext import verify

    monkeypatch.setitem(verify.SUITES, "graded", lambda max_n, rng: (["forced"], False))
    code, text = run("verify", "--suite", "graded")
    assert code == 2 and "FAILED" in text


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "reps", "--max-n", "6"),
    ("verify", "--suite", "yoneda", "--max-n", "4", "--seed", "7"),
    ("verify", "--suite", "complex", "--max-n", "5"),
    ("verify", "--suite", "graded", "--max-n", "3", "--seed", "1"),
])
def test_verify_suites(argv):
    code, text = run(*argv)
    assert code == 0, text
    assert text.endswith("verified\n")


def test_output_is_byte_stable():
    argvs = [
        ("ext", "--ctx", "k3like.ctx", "--n", "3", "--source", "taut:E,O", "--target", "taut:E,O"),
        ("verify", "--suite", "yoneda", "--max-n", "3", "--seed", "5"),
    ]
    for argv in argvs:
        assert run(*argv) == run(*argv)
