"""Context and class files (JSON syntax).

Context layout::

    {
      "objects": ["O", "E", "L"],
      "ext": {"E,L": {"0": ["a"], "2": ["b"]}},
      "compose": {"E,L,L": [["second", "first", {"result": "1/2"}]]},
      "identities": {"E": "id_E"},
      "tensors": {"E1,E2": "E12"}
    }

``compose["A,B,C"]`` lists ``[b, a, {c: coefficient}]`` meaning b o a = sum c,
with a in ext(A,B) and b in ext(B,C).  Coefficients are integers or "p/q".
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from hilbext.ext_calculator import HilbExtSpace, SurfaceContext, parse_object_spec
from hilbext.graded_core import GradedSpace

FIXTURES = Path(__file__).resolve().parent / "fixtures"


class ContextError(ValueError):
    """Parse or validation failure; ``where`` is 'line L, column C' or a key path."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


def _fraction(value, path):
    try:
        if isinstance(value, bool):
            raise TypeError
        return Fraction(value) if isinstance(value, int) else Fraction(str(value))
    except (TypeError, ValueError, ZeroDivisionError):
        raise ContextError(path, f"bad coefficient {value!r}") from None


def _split_key(key, size, path):
    parts = [p.strip() for p in key.split(",")]
    if len(parts) != size or not all(parts):
        raise ContextError(path, f"expected {size} comma-separated object symbols")
    return tuple(parts)


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContextError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None


def context_from_dict(doc, validate: bool = True) -> SurfaceContext:
    if not isinstance(doc, dict):
        raise ContextError("$", "top level must be an object")
    objects = doc.get("objects")
    if not isinstance(objects, list) or not all(isinstance(o, str) for o in objects):
        raise ContextError("objects", "must be a list of strings")
    if len(set(objects)) != len(objects):
        raise ContextError("objects", "duplicate object symbol")
    ext = {}
    for key, by_degree in (doc.get("ext") or {}).items():
        path = f"ext.{key}"
        pair = _split_key(key, 2, path)
        for obj in pair:
            if obj not in objects:
                raise ContextError(path, f"unknown object {obj}")
        if not isinstance(by_degree, dict):
            raise ContextError(path, "must map degrees to label lists")
        basis = []
        for deg, labels in sorted(by_degree.items(), key=lambda kv: int(kv[0]) if _is_int(kv[0]) else 0):
            if not _is_int(deg):
                raise ContextError(f"{path}.{deg}", "degree must be an integer")
            if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
                raise ContextError(f"{path}.{deg}", "must be a list of labels")
            basis += [(lab, int(deg)) for lab in labels]
        try:
            ext[pair] = GradedSpace(basis)
        except ValueError as exc:
            raise ContextError(path, str(exc)) from None
    compose = {}
    for key, entries in (doc.get("compose") or {}).items():
        path = f"compose.{key}"
        triple = _split_key(key, 3, path)
        if not isinstance(entries, list):
            raise ContextError(path, "must be a list of [second, first, {result: coeff}]")
        table = {}
        for k, entry in enumerate(entries):
            epath = f"{path}[{k}]"
            if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], dict)):
                raise ContextError(epath, "must be [second, first, {result: coeff}]")
            second, first, out = entry
            if (second, first) in table:
                raise ContextError(epath, "duplicate entry")
            table[(second, first)] = {lab: _fraction(c, f"{epath}.{lab}") for lab, c in out.items()}
        compose[triple] = table
    identities = doc.get("identities") or {}
    for obj in identities:
        if obj not in objects:
            raise ContextError(f"identities.{obj}", "unknown object")
    tensors = {}
    for key, sym in (doc.get("tensors") or {}).items():
        tensors[frozenset(p.strip() for p in key.split(","))] = sym
    ctx = SurfaceContext(objects, ext, compose, identities, tensors)
    if validate:
        problems = ctx.validate()
        if problems:
            where, _, rule = problems[0].partition(": ")
            raise ContextError(where, rule + (f" (+{len(problems) - 1} more)" if len(problems) > 1 else ""))
    return ctx


def _is_int(s) -> bool:
    try:
        int(s)
        return True
    except (TypeError, ValueError):
        return False


def _coeff_text(c: Fraction):
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def context_to_dict(ctx: SurfaceContext) -> dict:
    ext = {}
    for (a, b), space in ctx.ext.items():
        by_deg = {}
        for lab, deg in space.basis:
            by_deg.setdefault(str(deg), []).append(lab)
        ext[f"{a},{b}"] = by_deg
    compose = {}
    for (a, b, c), table in ctx.compose.items():
        compose[f"{a},{b},{c}"] = [
            [second, first, {lab: _coeff_text(v) for lab, v in out.items()}]
            for (second, first), out in table.items()
        ]
    doc = {"objects": list(ctx.objects), "ext": ext, "compose": compose, "identities": dict(ctx.identities)}
    if ctx.tensors:
        doc["tensors"] = {",".join(sorted(k)): v for k, v in ctx.tensors.items()}
    return doc


def parse_context_text(text: str, validate: bool = True) -> SurfaceContext:
    return context_from_dict(_loads(text), validate)


def parse_context(path, validate: bool = True) -> SurfaceContext:
    path = Path(path)
    if not path.exists() and (FIXTURES / path.name).exists():
        path = FIXTURES / path.name
    return parse_context_text(path.read_text(), validate)


def serialize_context(ctx: SurfaceContext) -> str:
    return json.dumps(context_to_dict(ctx), indent=1, sort_keys=True)


# -- classes ---------------------------------------------------------------

def class_from_dict(ctx, n, doc):
    from hilbext.yoneda_engine import PClass

    try:
        src = parse_object_spec(doc["source"])
        tgt = parse_object_spec(doc["target"])
    except KeyError as exc:
        raise ContextError(f"class.{exc.args[0]}", "missing") from None
    except ValueError as exc:
        raise ContextError("class", str(exc)) from None
    space = HilbExtSpace(ctx, src, tgt, n)
    out = PClass.zero(space)
    for k, term in enumerate(doc.get("terms", [])):
        path = f"class.terms[{k}]"
        try:
            piece = PClass.decomposable(space, str(term["summand"]), tuple(term.get("fixed", [])),
                                        tuple(term.get("free", [])), _fraction(term.get("coeff", 1), path))
        except KeyError as exc:
            raise ContextError(path, f"unknown label or summand {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ContextError(path, str(exc)) from None
        out = out + piece
    return out


def class_to_dict(c) -> dict:
    space = c.space
    terms = []
    for label in space.labels:
        coeff = c.terms.get(label)
        if coeff is None:
            continue
        tag, fixed, multiset = label
        terms.append({"summand": tag, "fixed": list(fixed), "free": list(multiset),
                      "coeff": f"{coeff.numerator}/{coeff.denominator}"})
    return {"source": str(space.src), "target": str(space.tgt), "terms": terms}


def parse_classes(path, ctx, n):
    """A class file holds {"a": class, "b": class}; the product is a o b."""
    doc = _loads(Path(path).read_text())
    try:
        return class_from_dict(ctx, n, doc["a"]), class_from_dict(ctx, n, doc["b"])
    except KeyError as exc:
        raise ContextError(f"$.{exc.args[0]}", "missing class") from None
