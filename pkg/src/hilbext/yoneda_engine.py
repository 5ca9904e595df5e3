"""Yoneda products of Ext classes on X^[n].

Two independent engines:

* ``yoneda_closed``: the explicit five-sum product formula for three twisted
  tautological objects, evaluated letter by letter with the sign convention
  described in :func:`sum_bullet_sign`.
* ``yoneda_oracle``: lift both classes to S_n-invariant classes on X^n, compose
  component by component with Kunneth signs, and project back.

Classes are elements of a :class:`~hilbext.ext_calculator.HilbExtSpace`.  A
class ``a o b`` means b is applied first.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from hilbext import kernels
from hilbext.ext_calculator import (
    Det,
    HilbExtSpace,
    MissingDataError,
    Taut,
    index_set,
    slot_pairs,
)
from hilbext.graded_core import GradedElement, act_on_tensor, koszul_sort
from hilbext.sign_combinatorics import Permutation

DEFAULT_MAX_N = 6


# -- sign conventions -------------------------------------------------------

def kunneth_compose_sign(a_degrees, b_degrees) -> int:
    """Sign of (b_1 x ... x b_k) o (a_1 x ... x a_k) = sign * (b_1 a_1) x ... x (b_k a_k).

    a is applied first; the sign is (-1)^(sum_{k<l} deg a_k deg b_l).
    """
    if len(a_degrees) != len(b_degrees):
        raise ValueError("length mismatch")
    exp = 0
    later_b = 0
    for k in range(len(a_degrees) - 1, -1, -1):
        exp += a_degrees[k] * later_b
        later_b += b_degrees[k]
    return -1 if exp % 2 else 1


def sum_bullet_sign(layout, degrees) -> int:
    """Koszul sign of the letters written in ``layout`` order.

    ``degrees`` lists the letters in reference order (the a-letters then the
    b-letters); ``layout`` lists reference positions (0-based) in the order the
    letters are written.
    """
    layout = list(layout)
    if sorted(layout) != list(range(len(degrees))):
        raise ValueError("layout is not a permutation of the letters")
    images = [0] * len(layout)
    for pos, ref in enumerate(layout):
        images[ref] = pos
    return kernels.koszul_sign(images, [int(d) for d in degrees])


# -- classes ----------------------------------------------------------------

class PClass(GradedElement):
    """An Ext class on X^[n] written in the labeled basis of its HilbExtSpace."""

    space: HilbExtSpace

    @classmethod
    def zero(cls, space: HilbExtSpace) -> PClass:
        return cls(space, {})

    @classmethod
    def decomposable(cls, space: HilbExtSpace, tag, fixed, free, coeff=1) -> PClass:
        """fixed_1 x ... x fixed_f x free_1 ... free_k with the free letters in any order."""
        return cls(space, _decomposable_terms(space, tag, fixed, free, coeff))

    @classmethod
    def from_element(cls, el: GradedElement) -> PClass:
        return cls(el.space, el.terms)

    def __add__(self, other):
        return PClass.from_element(super().__add__(other))

    def __sub__(self, other):
        return PClass.from_element(super().__sub__(other))

    def __rmul__(self, scalar):
        return PClass.from_element(super().__rmul__(scalar))

    def __neg__(self):
        return PClass.from_element(super().__neg__())

    def to_text(self) -> list[str]:
        """Lines 'tag | fixed ; multiset | p/q' in basis order."""
        out = []
        for label in self.space.labels:
            c = self.terms.get(label)
            if c is None:
                continue
            tag, fixed, multiset = label
            out.append(f"{tag} | {' '.join(fixed)} ; {' '.join(multiset)} | {c.numerator}/{c.denominator}")
        return out


def _decomposable_terms(space, tag, fixed, free, coeff):
    summand = space.summand(tag)
    if len(fixed) != len(summand.fixed) or len(free) != summand.free_count:
        raise ValueError(f"summand {tag} takes {len(summand.fixed)} fixed and {summand.free_count} free letters")
    sign, multiset = koszul_sort(space.free_space(tag), free)
    if not sign:
        return {}
    return {(tag, tuple(fixed), multiset): Fraction(coeff) * sign}


@dataclass
class EquivariantClass:
    """S_n-side class: components (i, j) -> {slot label tuple: coefficient}."""

    ctx: object
    src: object
    tgt: object
    n: int
    components: dict = field(default_factory=dict)

    def add(self, comp, labels, coeff):
        bucket = self.components.setdefault(comp, defaultdict(Fraction))
        bucket[labels] += coeff

    def cleaned(self) -> dict:
        out = {}
        for comp, terms in self.components.items():
            nz = {k: v for k, v in terms.items() if v}
            if nz:
                out[comp] = nz
        return out

    def slot_spaces(self, comp):
        return [self.ctx.ext_space(a, b) for a, b in slot_pairs(self.src, self.tgt, comp[0], comp[1], self.n)]

    def is_invariant(self) -> bool:
        """Check sigma(c) = c for every adjacent transposition."""
        comps = self.cleaned()
        for k in range(1, self.n):
            g = Permutation.transposition(self.n, k, k + 1)
            moved = defaultdict(lambda: defaultdict(Fraction))
            for comp, terms in comps.items():
                degs_sp = self.slot_spaces(comp)
                for labels, c in terms.items():
                    sign, new = act_on_tensor(g, labels, [sp.degree(x) for sp, x in zip(degs_sp, labels)])
                    moved[(_act(g, comp[0]), _act(g, comp[1]))][new] += sign * c
            moved = {cp: {k2: v for k2, v in t.items() if v} for cp, t in moved.items()}
            moved = {cp: t for cp, t in moved.items() if t}
            if moved != comps:
                return False
        return True


def _act(sigma, idx):
    return None if idx is None else sigma(idx)


def _check_n(n, max_n=DEFAULT_MAX_N):
    if n > max_n:
        raise ValueError(f"n={n} exceeds the oracle cap {max_n}; raise max_n to override (cost grows like n!)")


# -- lift / project -----------------------------------------------------------

def lift_decomposable(space: HilbExtSpace, tag, fixed, free, coeff, out: EquivariantClass):
    """Add (1/(n-f)!) sum over S_n of the signed slot action on fixed x free."""
    summand = space.summand(tag)
    n = space.n
    f = len(summand.fixed)
    labels = tuple(fixed) + tuple(free)
    spaces = space.fixed_spaces(tag) + [space.free_space(tag)] * summand.free_count
    degs = [sp.degree(x) for sp, x in zip(spaces, labels)]
    i0, j0 = summand.rep
    weight = Fraction(coeff) / factorial(n - f)
    for sigma in Permutation.all(n):
        sign, new = act_on_tensor(sigma, labels, degs)
        out.add((_act(sigma, i0), _act(sigma, j0)), new, sign * weight)


def lift_to_equivariant(ctx, n, c: PClass, max_n: int = DEFAULT_MAX_N) -> EquivariantClass:
    _check_n(n, max_n)
    space = c.space
    out = EquivariantClass(ctx, space.src, space.tgt, n)
    for (tag, fixed, multiset), coeff in c.terms.items():
        lift_decomposable(space, tag, fixed, multiset, coeff, out)
    return out


def project(eq: EquivariantClass, space: HilbExtSpace) -> PClass:
    """Restrict to each representative component, then pass to S^k on the free slots."""
    terms = defaultdict(Fraction)
    for summand in space.summands:
        comp = eq.components.get(summand.rep, {})
        f = len(summand.fixed)
        free_space = space.free_space(summand.tag)
        for labels, coeff in comp.items():
            if not coeff:
                continue
            sign, multiset = koszul_sort(free_space, labels[f:])
            if sign:
                terms[(summand.tag, tuple(labels[:f]), multiset)] += sign * coeff
    return PClass(space, terms)


# -- oracle composition --------------------------------------------------------

def _compose_tensors(ctx, triples, first_labels, second_labels, first_degs, second_degs):
    """Slotwise second o first with the Kunneth sign; returns {labels: coeff}."""
    sign = kunneth_compose_sign(first_degs, second_degs)
    partial = {(): Fraction(sign)}
    for (A, B, C), u, v in zip(triples, first_labels, second_labels):
        prod = ctx.compose_labels(A, B, C, v, u)
        if not prod:
            return {}
        nxt = defaultdict(Fraction)
        for key, c in partial.items():
            for lab, c2 in prod.items():
                nxt[key + (lab,)] += c * c2
        partial = nxt
    return partial


def compose_equivariant(second: EquivariantClass, first: EquivariantClass, components=None) -> EquivariantClass:
    """second o first; output component (i, k) collects second(j, k) o first(i, j)."""
    ctx, n = first.ctx, first.n
    if first.tgt != second.src:
        raise ValueError(f"cannot compose: {first.tgt} != {second.src}")
    src, mid, tgt = first.src, first.tgt, second.tgt
    out = EquivariantClass(ctx, src, tgt, n)
    wanted = components or [(i, k) for i in index_set(src, n) for k in index_set(tgt, n)]
    for i, k in wanted:
        for j in index_set(mid, n):
            fc = first.components.get((i, j))
            sc = second.components.get((j, k))
            if not fc or not sc:
                continue
            a_objs = [a for a, _ in slot_pairs(src, mid, i, j, n)]
            b_objs = [b for _, b in slot_pairs(src, mid, i, j, n)]
            c_objs = [c for _, c in slot_pairs(mid, tgt, j, k, n)]
            triples = [(a, b, c) for a, b, c in zip(a_objs, b_objs, c_objs)]
            for (a, b, c) in set(triples):
                ctx.table(a, b, c)
            f_spaces = first.slot_spaces((i, j))
            s_spaces = second.slot_spaces((j, k))
            for fl, fcoef in fc.items():
                if not fcoef:
                    continue
                fdeg = [sp.degree(x) for sp, x in zip(f_spaces, fl)]
                for sl, scoef in sc.items():
                    if not scoef:
                        continue
                    sdeg = [sp.degree(x) for sp, x in zip(s_spaces, sl)]
                    for labels, c in _compose_tensors(ctx, triples, fl, sl, fdeg, sdeg).items():
                        if c:
                            out.add((i, k), labels, c * fcoef * scoef)
    return out


def _product_space(ctx, a: PClass, b: PClass, n) -> HilbExtSpace:
    if a.space.n != n or b.space.n != n:
        raise ValueError("classes live on different Hilbert schemes")
    if a.space.src != b.space.tgt:
        raise ValueError(f"cannot compose: {b.space.tgt} != {a.space.src}")
    return HilbExtSpace(ctx, b.space.src, a.space.tgt, n)


def yoneda_oracle(ctx, n, a: PClass, b: PClass, max_n: int = DEFAULT_MAX_N) -> PClass:
    """a o b through the equivariant model on X^n."""
    if n < 1:
        raise ValueError("n must be positive")
    out_space = _product_space(ctx, a, b, n)
    la = lift_to_equivariant(ctx, n, a, max_n)
    lb = lift_to_equivariant(ctx, n, b, max_n)
    reps = [s.rep for s in out_space.summands]
    return project(compose_equivariant(la, lb, reps), out_space)


def det_det_compose(ctx, n, a: PClass, b: PClass) -> PClass:
    """Composition in S^n Ext*(L, N), computed by the equivariant model."""
    for c in (a, b):
        if not (isinstance(c.space.src, Det) and isinstance(c.space.tgt, Det)):
            raise ValueError("det_det_compose expects classes between determinant line bundles")
    return yoneda_oracle(ctx, n, a, b)


# -- closed formula --------------------------------------------------------------

def closed_coefficients(n: int) -> dict[int, Fraction]:
    """Weights of the five sums.

    The second sum carries (n-1)/(n-2)!: its summands come from the n-1 middle
    indices j, which all give the same symmetric tensor.
    """
    return {
        1: Fraction(1, factorial(n - 1)),
        2: Fraction(n - 1, factorial(n - 2)),
        3: Fraction(1, factorial(n - 1)),
        4: Fraction(1, factorial(n - 1)),
        5: Fraction(1, factorial(n - 2)),
    }


def literal_closed_coefficients(n: int) -> dict[int, Fraction]:
    """The five weights 1/(n-1)!, 1/(n-2)!, 1/(n-1)!, 1/(n-1)!, 1/(n-2)!."""
    c = closed_coefficients(n)
    c[2] = Fraction(1, factorial(n - 2))
    return c


def _perms_of(lo, n):
    """Permutations of [lo, n] as dicts k -> sigma^{-1}(k)."""
    size = n - lo + 1
    for p in Permutation.all(size) if size > 0 else [None]:
        if p is None:
            yield {}
            continue
        inv = p.inverse()
        yield {k: inv(k - lo + 1) + lo - 1 for k in range(lo, n + 1)}


class _Letters:
    """Letters of one input decomposable, 1-based, with their spaces."""

    def __init__(self, space: HilbExtSpace, tag, fixed, free):
        self.tag = tag
        summand = space.summand(tag)
        self.labels = [None] + list(fixed) + list(free)
        sp = space.fixed_spaces(tag) + [space.free_space(tag)] * summand.free_count
        self.pairs = [None] + list(summand.fixed) + [summand.free] * summand.free_count
        self.degs = [None] + [s.degree(x) for s, x in zip(sp, self.labels[1:])]


def _closed_term(ctx, n, A: _Letters, B: _Letters, fixed_slots, free_slots, out_space, tag, weight, terms):
    """Add one summand. Slots are pairs (k, k') meaning A_k o B_k'."""
    written = []
    for k, kk in fixed_slots + free_slots:
        written += [k - 1, n + kk - 1]
    degs = A.degs[1:] + B.degs[1:]
    sign = sum_bullet_sign(written, degs)
    partial = {(): Fraction(sign) * weight}
    for k, kk in fixed_slots + free_slots:
        a_pair, b_pair = A.pairs[k], B.pairs[kk]
        if a_pair[0] != b_pair[1]:
            raise ValueError(f"letters {A.labels[k]} and {B.labels[kk]} are not composable")
        prod = ctx.compose_labels(b_pair[0], b_pair[1], a_pair[1], A.labels[k], B.labels[kk])
        if not prod:
            return
        nxt = defaultdict(Fraction)
        for key, c in partial.items():
            for lab, c2 in prod.items():
                nxt[key + (lab,)] += c * c2
        partial = nxt
    f = len(fixed_slots)
    free_space = out_space.free_space(tag)
    for labels, c in partial.items():
        if not c:
            continue
        s, multiset = koszul_sort(free_space, labels[f:])
        if s:
            terms[(tag, labels[:f], multiset)] += s * c


def _required_tables(src, mid, tgt):
    E, L = src.obj, src.line
    F, M = mid.obj, mid.line
    G, N = tgt.obj, tgt.line
    return [(E, F, G), (L, M, N), (E, M, G), (L, F, N), (E, F, N), (L, M, G), (E, M, N), (L, F, G)]


def closed_product_decomposable(ctx, n, a_space, a_dec, b_space, b_dec, out_space, terms,
                                coefficients=None):
    """Add the five-sum product of two decomposables (tag, fixed, free, coeff) to ``terms``."""
    coef = coefficients or closed_coefficients(n)
    a_tag, a_fixed, a_free, a_c = a_dec
    b_tag, b_fixed, b_free, b_c = b_dec
    A = _Letters(a_space, a_tag, a_fixed, a_free)
    B = _Letters(b_space, b_tag, b_fixed, b_free)
    scale = Fraction(a_c) * Fraction(b_c)
    if a_tag == "1" and b_tag == "1":
        for s in _perms_of(2, n):
            free = [(k, s[k]) for k in range(2, n + 1)]
            _closed_term(ctx, n, A, B, [(1, 1)], free, out_space, "1", coef[1] * scale, terms)
    elif a_tag == "2" and b_tag == "2":
        for t in _perms_of(3, n):
            free = [(1, 2)] + [(k, t[k]) for k in range(3, n + 1)]
            _closed_term(ctx, n, A, B, [(2, 1)], free, out_space, "1", coef[2] * scale, terms)
        for i in range(3, n + 1):
            for al in _perms_of(3, n):
                free = [(1, 2)] + [(k, al[k]) for k in range(3, n + 1) if k != i]
                _closed_term(ctx, n, A, B, [(i, 1), (2, al[i])], free, out_space, "2", coef[5] * scale, terms)
    elif a_tag == "2" and b_tag == "1":
        for be in _perms_of(2, n):
            free = [(k, be[k]) for k in range(3, n + 1)]
            _closed_term(ctx, n, A, B, [(1, 1), (2, be[2])], free, out_space, "2", coef[3] * scale, terms)
    elif a_tag == "1" and b_tag == "2":
        for ga in _perms_of(2, n):
            free = [(ga[k], k) for k in range(3, n + 1)]
            _closed_term(ctx, n, A, B, [(ga[2], 1), (1, 2)], free, out_space, "2", coef[4] * scale, terms)
    else:
        raise ValueError(f"unknown summand tags {a_tag!r}, {b_tag!r}")


def yoneda_closed(ctx, n, a: PClass, b: PClass, coefficients=None) -> PClass:
    """a o b by the five-sum formula; all three objects must be twisted tautological."""
    if n < 2:
        raise ValueError("n must be at least 2")
    for sp in (a.space, b.space):
        if not (isinstance(sp.src, Taut) and isinstance(sp.tgt, Taut)):
            raise ValueError("the closed formula covers tautological objects only; use yoneda_oracle")
    out_space = _product_space(ctx, a, b, n)
    for key in _required_tables(b.space.src, b.space.tgt, a.space.tgt):
        ctx.table(*key)
    terms = defaultdict(Fraction)
    for (at, af, am), ac in a.terms.items():
        for (bt, bf, bm), bc in b.terms.items():
            closed_product_decomposable(ctx, n, a.space, (at, af, am, ac), b.space, (bt, bf, bm, bc),
                                        out_space, terms, coefficients)
    return PClass(out_space, terms)


def yoneda_product(ctx, n, a: PClass, b: PClass, engine: str = "auto") -> PClass:
    closed_ok = all(isinstance(sp.src, Taut) and isinstance(sp.tgt, Taut) for sp in (a.space, b.space))
    if engine == "closed" or (engine == "auto" and closed_ok):
        return yoneda_closed(ctx, n, a, b)
    if engine in ("oracle", "auto"):
        return yoneda_oracle(ctx, n, a, b)
    raise ValueError(f"unknown engine {engine!r}")


def induced_morphism_class(ctx, phi, EL, FM, M, n) -> PClass:
    """(phi x 1_M ... 1_M ; 0), the class of phi^[n] (x) id on E^[n] (x) D_M."""
    one = ctx.identity(M)
    space = HilbExtSpace(ctx, Taut(EL, M), Taut(FM, M), n)
    if phi not in ctx.ext_space(EL, FM):
        raise MissingDataError(f"{phi} is not a basis label of ext({EL}, {FM})")
    return PClass.decomposable(space, "1", (phi,), (one,) * (n - 1))
