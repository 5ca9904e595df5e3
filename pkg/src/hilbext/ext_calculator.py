"""Graded Ext groups on X^[n] between twisted tautological objects and determinant bundles.

Inputs are Ext groups on the surface X, supplied through a :class:`SurfaceContext`.
Composite objects such as E (x) L are opaque symbols chosen by the user.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from hilbext.graded_core import (
    GradedElement,
    GradedSpace,
    SymPowerSpace,
    poly_add,
    poly_mul,
    sym_power_poly,
)

UNIT = "O"


class MissingDataError(KeyError):
    def __str__(self):
        return self.args[0] if self.args else "missing data"


class SurfaceContext:
    """Ext algebra data of a surface: graded Ext spaces and composition tables.

    ``compose[(A, B, C)]`` maps ``(b, a)`` with a in ext(A, B) and b in ext(B, C)
    to ``{label: coefficient}`` in ext(A, C); absent pairs compose to zero.
    """

    def __init__(self, objects, ext, compose=None, identities=None, tensors=None):
        self.objects = tuple(objects)
        self.ext = {tuple(k): v for k, v in ext.items()}
        self.compose = {}
        for key, table in (compose or {}).items():
            self.compose[tuple(key)] = {
                tuple(pair): {lab: Fraction(c) for lab, c in out.items() if c != 0}
                for pair, out in table.items()
            }
        self.identities = dict(identities or {})
        # tensors: frozenset of object symbols -> symbol of their tensor product
        self.tensors = {frozenset(k): v for k, v in (tensors or {}).items()}

    def __eq__(self, other):
        return (isinstance(other, SurfaceContext) and set(self.objects) == set(other.objects)
                and self.ext == other.ext and self.compose == other.compose
                and self.identities == other.identities and self.tensors == other.tensors)

    def has_object(self, a) -> bool:
        return a in self.objects

    def ext_space(self, a: str, b: str) -> GradedSpace:
        try:
            return self.ext[(a, b)]
        except KeyError:
            raise MissingDataError(f"missing ext space for the pair ({a}, {b})") from None

    def table(self, a: str, b: str, c: str) -> dict:
        try:
            return self.compose[(a, b, c)]
        except KeyError:
            raise MissingDataError(f"missing composition table for the triple ({a}, {b}, {c})") from None

    def compose_labels(self, a_obj, b_obj, c_obj, second, first) -> dict:
        """second o first, with first in ext(a_obj, b_obj) and second in ext(b_obj, c_obj)."""
        return self.table(a_obj, b_obj, c_obj).get((second, first), {})

    def identity(self, a: str) -> str:
        try:
            return self.identities[a]
        except KeyError:
            raise MissingDataError(f"no identity declared for {a}") from None

    def tensor_symbol(self, objs) -> str:
        objs = frozenset(objs)
        if not objs:
            return UNIT
        if len(objs) == 1:
            return next(iter(objs))
        try:
            return self.tensors[objs]
        except KeyError:
            raise MissingDataError(f"missing tensor product symbol for {sorted(objs)}") from None

    def validate(self) -> list[str]:
        """Problems as 'key path: rule' strings; empty when the context is consistent."""
        problems = []
        for (a, b), space in self.ext.items():
            for obj in (a, b):
                if obj not in self.objects:
                    problems.append(f"ext.{a},{b}: unknown object {obj}")
        for (a, b, c), table in self.compose.items():
            path = f"compose.{a},{b},{c}"
            try:
                first_sp, second_sp, out_sp = self.ext_space(a, b), self.ext_space(b, c), self.ext_space(a, c)
            except MissingDataError as exc:
                problems.append(f"{path}: {exc}")
                continue
            for (second, first), out in table.items():
                if first not in first_sp or second not in second_sp:
                    problems.append(f"{path}.{second},{first}: unknown label")
                    continue
                want = first_sp.degree(first) + second_sp.degree(second)
                for lab in out:
                    if lab not in out_sp:
                        problems.append(f"{path}.{second},{first}: unknown result label {lab}")
                    elif out_sp.degree(lab) != want:
                        problems.append(f"{path}.{second},{first}: degree of {lab} is not {want}")
        for obj, lab in self.identities.items():
            path = f"identities.{obj}"
            sp = self.ext.get((obj, obj))
            if sp is None or lab not in sp:
                problems.append(f"{path}: {lab} is not in ext({obj},{obj})")
                continue
            if sp.degree(lab) != 0:
                problems.append(f"{path}: identity must have degree 0")
        problems.extend(self._identity_laws())
        problems.extend(self._associativity())
        return problems

    def _identity_laws(self):
        problems = []
        for (a, b, c), table in self.compose.items():
            path = f"compose.{a},{b},{c}"
            if a == b and a in self.identities and (a, c) in self.ext:
                one = self.identities[a]
                for lab in self.ext[(a, c)].labels:
                    if table.get((lab, one), {}) != {lab: 1}:
                        problems.append(f"{path}: {lab} o 1_{a} != {lab}")
            if b == c and c in self.identities and (a, b) in self.ext:
                one = self.identities[c]
                for lab in self.ext[(a, b)].labels:
                    if table.get((one, lab), {}) != {lab: 1}:
                        problems.append(f"{path}: 1_{c} o {lab} != {lab}")
        return problems

    def _associativity(self):
        problems = []
        for (a, b, c), t1 in self.compose.items():
            for d in self.objects:
                keys = [(b, c, d), (a, b, d), (a, c, d)]
                if not all(k in self.compose for k in keys):
                    continue
                t2, t3, t4 = (self.compose[k] for k in keys)
                for x in self.ext[(a, b)].labels:
                    for y in self.ext[(b, c)].labels:
                        for z in self.ext[(c, d)].labels:
                            # (z y) x versus z (y x)
                            left, right = {}, {}
                            for yz, coef in t2.get((z, y), {}).items():
                                for lab, c2 in t3.get((yz, x), {}).items():
                                    left[lab] = left.get(lab, 0) + coef * c2
                            for yx, coef in t1.get((y, x), {}).items():
                                for lab, c2 in t4.get((z, yx), {}).items():
                                    right[lab] = right.get(lab, 0) + coef * c2
                            left = {k: v for k, v in left.items() if v}
                            right = {k: v for k, v in right.items() if v}
                            if left != right:
                                problems.append(f"compose.{a},{b},{c},{d}: ({z} {y}) {x} != {z} ({y} {x})")
        return problems


# -- objects on X^[n] ---------------------------------------------------------

@dataclass(frozen=True)
class Taut:
    """(E)^[n] (x) D_L, where ``obj`` is the context symbol for E (x) L."""
    obj: str
    line: str

    def __str__(self):
        return f"taut:{self.obj},{self.line}"


@dataclass(frozen=True)
class Det:
    line: str

    def __str__(self):
        return f"det:{self.line}"


def parse_object_spec(text: str):
    kind, _, rest = text.partition(":")
    parts = [p.strip() for p in rest.split(",") if p.strip()]
    if kind == "taut" and len(parts) == 2:
        return Taut(*parts)
    if kind == "det" and len(parts) == 1:
        return Det(parts[0])
    raise ValueError(f"bad object spec {text!r}; expected taut:<obj>,<line> or det:<line>")


def index_set(x, n):
    return list(range(1, n + 1)) if isinstance(x, Taut) else [None]


def slot_objects(x, i, n):
    """Object in each of the n slots of the component indexed by i."""
    if isinstance(x, Taut):
        return [x.obj if m == i else x.line for m in range(1, n + 1)]
    return [x.line] * n


def slot_pairs(src, tgt, i, j, n):
    s, t = slot_objects(src, i, n), slot_objects(tgt, j, n)
    return list(zip(s, t))


def orbit_representatives(src, tgt, n):
    """Component orbit representatives (i, j) and the number of fixed slots."""
    if isinstance(src, Taut) and isinstance(tgt, Taut):
        return [((1, 1), 1), ((1, 2), 2)]
    if isinstance(src, Taut):
        return [((1, None), 1)]
    if isinstance(tgt, Taut):
        return [((None, 1), 1)]
    return [((None, None), 0)]


@dataclass(frozen=True)
class Summand:
    tag: str
    rep: tuple
    fixed: tuple        # (A, B) object pairs of the fixed slots 1..f
    free: tuple         # (A, B) of the remaining n - f slots
    free_count: int


class HilbExtSpace(GradedSpace):
    """Labeled basis of Ext*(src, tgt) on X^[n].

    Basis labels are ``(tag, fixed_labels, multiset)``: one label per fixed slot,
    and a canonical multiset for the symmetric power on the free slots.
    """

    def __init__(self, ctx: SurfaceContext, src, tgt, n: int):
        if n < 1 or (n < 2 and (isinstance(src, Taut) or isinstance(tgt, Taut))):
            raise ValueError(f"n={n} is too small for {src} -> {tgt}")
        self.ctx, self.src, self.tgt, self.n = ctx, src, tgt, n
        self.summands = []
        basis = []
        for (i, j), f in orbit_representatives(src, tgt, n):
            pairs = slot_pairs(src, tgt, i, j, n)
            fixed_pairs = tuple(pairs[:f])
            # free slots always carry Ext(line, line)
            summand = Summand(_tag(src, tgt, (i, j)), (i, j), fixed_pairs, (src.line, tgt.line), n - f)
            self.summands.append(summand)
            fixed_spaces = [ctx.ext_space(a, b) for a, b in fixed_pairs]
            free_space = ctx.ext_space(*summand.free)
            sym = SymPowerSpace(free_space, n - f)
            tag = summand.tag
            for fixed in itertools.product(*[sp.basis for sp in fixed_spaces]):
                fdeg = sum(d for _, d in fixed)
                for multiset, mdeg in sym.basis:
                    basis.append(((tag, tuple(lab for lab, _ in fixed), multiset), fdeg + mdeg))
        super().__init__(basis)

    def summand(self, tag) -> Summand:
        for s in self.summands:
            if s.tag == tag:
                return s
        raise KeyError(f"no summand {tag!r}")

    def free_space(self, tag) -> GradedSpace:
        return self.ctx.ext_space(*self.summand(tag).free)

    def fixed_spaces(self, tag):
        return [self.ctx.ext_space(a, b) for a, b in self.summand(tag).fixed]

    def listing(self) -> list[str]:
        """One line per basis label: 'deg | summand | slot-labels'."""
        lines = []
        for (tag, fixed, multiset), deg in self.basis:
            slots = " ".join(str(x) for x in fixed)
            if multiset:
                slots += " ; " + " ".join(str(x) for x in multiset)
            lines.append(f"{deg} | {tag} | {slots}")
        return lines


def _tag(src, tgt, rep) -> str:
    if isinstance(src, Taut) and isinstance(tgt, Taut):
        return "2" if rep == (1, 2) else "1"
    return {(True, False): "td", (False, True): "dt"}.get(
        (isinstance(src, Taut), isinstance(tgt, Taut)), "dd")


def ext_space(ctx: SurfaceContext, src, tgt, n: int) -> HilbExtSpace:
    return HilbExtSpace(ctx, src, tgt, n)


def ext_taut_taut(ctx, EL, L, FM, M, n) -> HilbExtSpace:
    if n < 2:
        raise ValueError("n must be at least 2")
    return HilbExtSpace(ctx, Taut(EL, L), Taut(FM, M), n)


def ext_taut_det(ctx, EL, L, M, n) -> HilbExtSpace:
    if n < 2:
        raise ValueError("n must be at least 2")
    return HilbExtSpace(ctx, Taut(EL, L), Det(M), n)


def ext_det_taut(ctx, L, FM, M, n) -> HilbExtSpace:
    if n < 2:
        raise ValueError("n must be at least 2")
    return HilbExtSpace(ctx, Det(L), Taut(FM, M), n)


def ext_det_det(ctx, L, M, n) -> HilbExtSpace:
    if n < 1:
        raise ValueError("n must be at least 1")
    return HilbExtSpace(ctx, Det(L), Det(M), n)


def cohomology_taut(ctx, EL, L, n) -> HilbExtSpace:
    """H*(X^[n], E^[n] (x) D_L) = H*(E (x) L) (x) S^{n-1} H*(L), as Ext from D_O."""
    return ext_det_taut(ctx, UNIT, EL, L, n)


def formula_poly(ctx, src, tgt, n) -> dict[int, int]:
    """Poincare polynomial by polynomial arithmetic alone (no basis is built)."""
    def dims(a, b):
        return ctx.ext_space(a, b).dims

    if isinstance(src, Taut) and isinstance(tgt, Taut):
        first = poly_mul(dims(src.obj, tgt.obj), sym_power_poly(dims(src.line, tgt.line), n - 1))
        second = poly_mul(dims(src.obj, tgt.line), dims(src.line, tgt.obj),
                          sym_power_poly(dims(src.line, tgt.line), n - 2))
        return poly_add(first, second)
    if isinstance(src, Taut):
        return poly_mul(dims(src.obj, tgt.line), sym_power_poly(dims(src.line, tgt.line), n - 1))
    if isinstance(tgt, Taut):
        return poly_mul(dims(src.line, tgt.obj), sym_power_poly(dims(src.line, tgt.line), n - 1))
    return sym_power_poly(dims(src.line, tgt.line), n)


# -- degree-zero Hom from tensor products of tautological sheaves ---------------

def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def _h0(ctx, a, b) -> int:
    return ctx.ext_space(a, b).dim(0)


def _sym_dim0(ctx, k) -> int:
    if k < 0:
        return 0
    return sym_power_poly({0: _h0(ctx, UNIT, UNIT)}, k).get(0, 0)


def hom_tensor_terms(ctx, objs, target, n):
    """Admissible (M, partition) index pairs with their dimension contributions."""
    k = len(objs)
    if k < 1:
        raise ValueError("need at least one tautological factor")
    out = []
    idx = list(range(k))
    if target == UNIT:
        for part in set_partitions(idx):
            ell = len(part)
            if ell > n:
                continue
            d = 1
            for block in part:
                d *= _h0(ctx, ctx.tensor_symbol(objs[i] for i in block), UNIT)
            d *= _sym_dim0(ctx, n - ell)
            out.append(((), tuple(tuple(b) for b in part), d))
        return out
    for r in range(k + 1):
        for marked in itertools.combinations(idx, r):
            rest = [i for i in idx if i not in marked]
            for part in set_partitions(rest):
                ell = len(part)
                if ell > n - 1:
                    continue
                d = _h0(ctx, ctx.tensor_symbol(objs[i] for i in marked), target)
                for block in part:
                    d *= _h0(ctx, ctx.tensor_symbol(objs[i] for i in block), UNIT)
                d *= _sym_dim0(ctx, n - ell - 1)
                out.append((marked, tuple(tuple(b) for b in part), d))
    return out


def hom_tensor_taut(ctx, objs, target, n) -> GradedSpace:
    total = sum(d for *_, d in hom_tensor_terms(ctx, list(objs), target, n))
    return GradedSpace((("h", k), 0) for k in range(total))


# -- spherical / P^n test -------------------------------------------------------

@dataclass(frozen=True)
class SerreFlags:
    """Hypotheses of the never-spherical statement, asserted by the caller."""
    h0_unit_is_one: bool = True
    h2_unit_is_one: bool = True
    ext0_nonzero: bool = True
    ext2_nonzero: bool = True

    @property
    def all_hold(self) -> bool:
        return self.h0_unit_is_one and self.h2_unit_is_one and self.ext0_nonzero and self.ext2_nonzero


@dataclass
class SphericalReport:
    n: int
    dims: dict
    verdict: str
    witnesses: list = field(default_factory=list)
    guaranteed: bool = False
    notes: list = field(default_factory=list)


def classify_pattern(dims: dict, n: int) -> str:
    nonzero = {d: c for d, c in dims.items() if c}
    if nonzero == {0: 1, 2 * n: 1}:
        return "spherical"
    if nonzero == {d: 1 for d in range(0, 2 * n + 1, 2)}:
        return "Pn"
    return "neither"


def spherical_report(ctx, EL, L, n, serre_flags: SerreFlags | None = None, dims=None) -> SphericalReport:
    """Test Ext*(E^[n] (x) D_L, itself) against the spherical and P^n patterns.

    ``dims`` overrides the computed dimensions (pattern matcher only).
    """
    flags = serre_flags or SerreFlags(False, False, False, False)
    if dims is None:
        dims = formula_poly(ctx, Taut(EL, L), Taut(EL, L), n)
    verdict = classify_pattern(dims, n)
    witnesses = sorted(d for d in {2, 4, 2 * n - 2} if dims.get(d, 0) >= 2)
    rep = SphericalReport(n, dict(dims), verdict, witnesses)
    if flags.all_hold:
        line = ctx.ext_space(L, L).dims
        self_ext = ctx.ext_space(EL, EL).dims
        consistent = (line.get(0, 0) == 1 and line.get(2, 0) == 1
                      and self_ext.get(0, 0) > 0 and self_ext.get(2, 0) > 0)
        rep.guaranteed = consistent
        if not consistent:
            rep.notes.append("declared hypotheses disagree with the supplied dimensions")
    else:
        rep.notes.append("hypotheses not asserted; no guarantee")
    if verdict != "neither":
        rep.notes.append("this pattern cannot occur when the hypotheses hold")
    return rep
