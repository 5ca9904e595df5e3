import random
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hilbext import yoneda_engine as ye
from hilbext.ext_calculator import Det, HilbExtSpace, MissingDataError, SurfaceContext, Taut
from hilbext.graded_core import GradedSpace, act_on_tensor
from hilbext.samples import hom_model_context, random_class, random_context, random_taut_triple, taut_triples
from hilbext.sign_combinatorics import Permutation
from hilbext.verify import DEGREE_SETS, closed_vs_oracle
from hilbext.yoneda_engine import PClass


def test_kunneth_examples():
    assert ye.kunneth_compose_sign((1, 0), (0, 1)) == -1
    assert ye.kunneth_compose_sign((0, 2, 4), (2, 0, 2)) == 1
    assert ye.kunneth_compose_sign((1, 1, 0), (0, 1, 1)) == -1
    with pytest.raises(ValueError):
        ye.kunneth_compose_sign((1,), (1, 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=6))
def test_kunneth_iterates_two_factor_rule(pairs):
    a = [p for p, _ in pairs]
    b = [q for _, q in pairs]
    # peel off the first factor: (b1 x B) o (a1 x A) = (-1)^{|a1||B|} ... and recurse
    sign = 1
    for k in range(len(a)):
        if a[k] * sum(b[k + 1:]) % 2:
            sign = -sign
    assert ye.kunneth_compose_sign(a, b) == sign


def test_sum_bullet_examples():
    odd = [1, 1, 1, 1]
    assert ye.sum_bullet_sign([0, 1, 2, 3], odd) == 1
    # letters x1 x2 | y1 y2 in reference order, written as (x y)(x y)
    assert ye.sum_bullet_sign([0, 2, 1, 3], odd) == -1
    assert ye.sum_bullet_sign([0, 3, 1, 2], odd) == 1
    assert ye.sum_bullet_sign([1, 2, 0, 3], odd) == 1
    assert ye.sum_bullet_sign([1, 3, 0, 2], odd) == -1
    assert ye.sum_bullet_sign([1, 0], [0, 1]) == 1
    with pytest.raises(ValueError):
        ye.sum_bullet_sign([0, 0, 1], [1, 1, 1])


def one_dim_ctx(objs, degree=0, const=1):
    """Every ext space 1-dim in ``degree``; every composition is ``const`` times the basis label."""
    ext = {(a, b): GradedSpace([(f"{a}{b}", degree)]) for a in objs for b in objs}
    compose = {}
    for a in objs:
        for b in objs:
            for c in objs:
                if 2 * degree == degree:
                    compose[(a, b, c)] = {(f"{b}{c}", f"{a}{b}"): {f"{a}{c}": const}}
                else:
                    compose[(a, b, c)] = {}
    return SurfaceContext(objs, ext, compose)


# -- lift and project ---------------------------------------------------------

def test_lift_n2_type1():
    ctx = one_dim_ctx(["E", "L", "F", "M"])
    space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), 2)
    c = PClass.decomposable(space, "1", ("EF",), ("LM",))
    lifted = ye.lift_to_equivariant(ctx, 2, c).cleaned()
    assert lifted == {(1, 1): {("EF", "LM"): 1}, (2, 2): {("LM", "EF"): 1}}


def test_zero_lifts_to_zero():
    ctx = one_dim_ctx(["E", "L", "F", "M"])
    space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), 3)
    assert ye.lift_to_equivariant(ctx, 3, PClass.zero(space)).cleaned() == {}


def _random_space(rng, n, src, tgt, degrees=(0, 1, 2)):
    pairs = [("E", "F"), ("E", "M"), ("L", "F"), ("L", "M")]
    ctx = random_context(rng, pairs=pairs, triples=[], max_dim=2, degrees=degrees)
    return ctx, HilbExtSpace(ctx, src, tgt, n)


@pytest.mark.parametrize("seed", range(20))
def test_lift_project_roundtrip(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    src = rng.choice([Taut("E", "L"), Det("L")])
    tgt = rng.choice([Taut("F", "M"), Det("M")])
    ctx, space = _random_space(rng, n, src, tgt)
    c = random_class(rng, space, terms=3)
    lifted = ye.lift_to_equivariant(ctx, n, c)
    assert lifted.is_invariant()
    assert ye.project(lifted, space) == c


def test_oracle_cap():
    ctx = one_dim_ctx(["E", "L", "F", "M"])
    space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), 7)
    with pytest.raises(ValueError, match="cap"):
        ye.lift_to_equivariant(ctx, 7, PClass.zero(space))


# -- closed formula against the oracle ----------------------------------------------

def test_n2_all_ones():
    ctx = one_dim_ctx(["E", "L", "F", "M", "G", "N"])
    b_space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), 2)
    a_space = HilbExtSpace(ctx, Taut("F", "M"), Taut("G", "N"), 2)
    a = PClass(a_space, {lab: 1 for lab in a_space.labels})
    b = PClass(b_space, {lab: 1 for lab in b_space.labels})
    closed = ye.yoneda_closed(ctx, 2, a, b)
    assert closed == ye.yoneda_oracle(ctx, 2, a, b)
    # type 1 gets 1*1 from 1 o 1 and 1 from 2 o 2; type 2 gets 2 o 1 and 1 o 2
    assert closed.terms == {("1", ("EG",), ("LN",)): 2, ("2", ("EN", "LG"), ()): 2}


def odd_ctx():
    """Every input letter odd and 1-dim, outputs in degree 2, all constants 1."""
    inputs = [("E", "F"), ("E", "M"), ("L", "F"), ("L", "M"), ("F", "G"), ("F", "N"), ("M", "G"), ("M", "N")]
    outputs = [("E", "G"), ("E", "N"), ("L", "G"), ("L", "N")]
    ext = {p: GradedSpace([("".join(p), 1)]) for p in inputs}
    ext.update({p: GradedSpace([("".join(p), 2)]) for p in outputs})
    compose = {(a, b, c): {(b + c, a + b): {a + c: 1}} for a, b, c in taut_triples()}
    return SurfaceContext(["E", "L", "F", "M", "G", "N"], ext, compose)


def test_n3_odd_type2():
    ctx = odd_ctx()
    b_space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), 3)
    a_space = HilbExtSpace(ctx, Taut("F", "M"), Taut("G", "N"), 3)
    # an odd letter cannot repeat, so S^2 of a line is zero and only type 2 survives
    assert {lab[0] for lab in a_space.labels} == {"2"}
    a = PClass(a_space, {lab: 1 for lab in a_space.labels})
    b = PClass(b_space, {lab: 1 for lab in b_space.labels})
    out = ye.yoneda_closed(ctx, 3, a, b)
    assert out == ye.yoneda_oracle(ctx, 3, a, b)
    assert not out.is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_closed_equals_oracle(n):
    rng = random.Random(100 + n)
    nonzero = 0
    for k in range(12 if n < 4 else 6):
        same, nz = closed_vs_oracle(rng, n, DEGREE_SETS[k % len(DEGREE_SETS)])
        assert same
        nonzero += nz
    assert nonzero > 0


def _bilinear_case(rng, n):
    ctx, a, b1 = random_taut_triple(rng, n, degrees=(0, 1))
    b2 = random_class(rng, b1.space)
    return ctx, a, b1, b2


@pytest.mark.parametrize("seed", range(6))
def test_bilinear_and_degree_additive(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    ctx, a, b1, b2 = _bilinear_case(rng, n)
    lam = Fraction(rng.choice([-3, 2, 5]), 2)
    for engine in (ye.yoneda_closed, ye.yoneda_oracle):
        lhs = engine(ctx, n, a, b1 + lam * b2)
        rhs = engine(ctx, n, a, b1) + lam * engine(ctx, n, a, b2)
        assert lhs == rhs
        assert engine(ctx, n, lam * a, b1) == lam * engine(ctx, n, a, b1)
    for la, ca in a.terms.items():
        for lb, cb in b1.terms.items():
            out = ye.yoneda_closed(ctx, n, PClass(a.space, {la: ca}), PClass(b1.space, {lb: cb}))
            want = a.space.degree(la) + b1.space.degree(lb)
            assert all(out.space.degree(lab) == want for lab in out.terms)


@pytest.mark.parametrize("seed", range(8))
def test_sign_coherence_under_letter_permutation(seed):
    rng = random.Random(seed)
    n = rng.choice([3, 4])
    ctx, a, b = random_taut_triple(rng, n, degrees=(0, 1), allow_zero=False)
    out_space = HilbExtSpace(ctx, Taut("E", "L"), Taut("G", "N"), n)

    def product(b_dec):
        terms = defaultdict(Fraction)
        for (at, af, am), ac in a.terms.items():
            ye.closed_product_decomposable(ctx, n, a.space, (at, af, am, ac), b.space, b_dec, out_space, terms)
        return {x: v for x, v in terms.items() if v}

    for (bt, bf, bm), bc in b.terms.items():
        sigma = Permutation.random(len(bm), rng)
        degs = [b.space.free_space(bt).degree(x) for x in bm]
        sign, shuffled = act_on_tensor(sigma, bm, degs)
        assert product((bt, bf, bm, bc)) == product((bt, bf, shuffled, sign * bc))
        lifted = ye.EquivariantClass(ctx, b.space.src, b.space.tgt, n)
        ye.lift_decomposable(b.space, bt, bf, shuffled, sign * bc, lifted)
        direct = ye.lift_to_equivariant(ctx, n, PClass(b.space, {(bt, bf, bm): bc}))
        assert lifted.cleaned() == direct.cleaned()


def test_missing_table_named():
    rng = random.Random(3)
    ctx, a, b = random_taut_triple(rng, 2, allow_zero=False)
    del ctx.compose[("L", "F", "N")]
    with pytest.raises(MissingDataError, match=r"\(L, F, N\)"):
        ye.yoneda_closed(ctx, 2, a, b)


def test_closed_rejects_small_n_and_det():
    rng = random.Random(4)
    ctx, a, b = random_taut_triple(rng, 2)
    with pytest.raises(ValueError):
        ye.yoneda_closed(ctx, 1, a, b)
    d_space = HilbExtSpace(ctx, Det("L"), Det("M"), 2)
    with pytest.raises(ValueError, match="oracle"):
        ye.yoneda_closed(ctx, 2, PClass.zero(d_space), PClass.zero(d_space))


# -- associativity and the two engines ----------------------------------------------

def _assoc_case(rng, n):
    ctx = hom_model_context(rng, ["A", "B"], max_dim=2, degrees=(0, 1))
    assert ctx.validate() == []
    space = HilbExtSpace(ctx, Taut("A", "B"), Taut("A", "B"), n)
    return ctx, [random_class(rng, space, terms=2) for _ in range(3)]


@pytest.mark.parametrize("seed", range(6))
def test_oracle_associative(seed):
    rng = random.Random(seed)
    n = 3 if seed % 2 else 2
    ctx, (x, y, z) = _assoc_case(rng, n)
    for engine in (ye.yoneda_oracle, ye.yoneda_closed):
        lhs = engine(ctx, n, engine(ctx, n, x, y), z)
        rhs = engine(ctx, n, x, engine(ctx, n, y, z))
        assert lhs == rhs


def test_second_sum_weight():
    # the weight of the second sum is (n-1)/(n-2)!; 1/(n-2)! agrees only at n = 2
    assert ye.closed_coefficients(2) == ye.literal_closed_coefficients(2)
    rng = random.Random(1)
    differs = 0
    for _ in range(15):
        ctx, a, b = random_taut_triple(rng, 3, degrees=(0, 2), allow_zero=False)
        a = PClass(a.space, {lab: 1 for lab in a.space.labels if lab[0] == "2"})
        b = PClass(b.space, {lab: 1 for lab in b.space.labels if lab[0] == "2"})
        oracle = ye.yoneda_oracle(ctx, 3, a, b)
        assert ye.yoneda_closed(ctx, 3, a, b) == oracle
        differs += ye.yoneda_closed(ctx, 3, a, b, ye.literal_closed_coefficients(3)) != oracle
    assert differs > 0


# -- identity and naturality ------------------------------------------------------

def _as_class(space, tag, fixed_options, free, coeff):
    """Sum of decomposables over every combination of the fixed-slot expansions."""
    out = PClass.zero(space)
    combos = [((), Fraction(coeff))]
    for opts in fixed_options:
        combos = [(f + (lab,), c * c2) for f, c in combos for lab, c2 in opts.items()]
    for fixed, c in combos:
        out = out + PClass.decomposable(space, tag, fixed, free, c)
    return out


def _deg(ctx, a, b, lab):
    return ctx.ext_space(a, b).degree(lab)


@pytest.mark.parametrize("seed", range(4))
def test_left_naturality(seed):
    rng = random.Random(seed)
    n = 2 + seed % 2
    ctx = hom_model_context(rng, ["E", "F", "G", "M", "N"], max_dim=2, degrees=(0, 1))
    a_space = HilbExtSpace(ctx, Taut("F", "M"), Taut("G", "N"), n)
    out_space = HilbExtSpace(ctx, Taut("E", "M"), Taut("G", "N"), n)
    for phi in ctx.ext_space("E", "F").labels:
        ind = ye.induced_morphism_class(ctx, phi, "E", "F", "M", n)
        dphi = _deg(ctx, "E", "F", phi)
        for lab in a_space.labels:
            tag, fixed, free = lab
            a = PClass(a_space, {lab: 1})
            if tag == "1":
                (psi,) = fixed
                exp_sign = (-1) ** (dphi * sum(_deg(ctx, "M", "N", s) for s in free))
                opts = [ctx.compose_labels("E", "F", "G", psi, phi)]
                expected = _as_class(out_space, "1", opts, free, exp_sign)
            else:
                eta, x = fixed
                odd = _deg(ctx, "M", "G", x) + sum(_deg(ctx, "M", "N", t) for t in free)
                opts = [ctx.compose_labels("E", "F", "N", eta, phi), {x: 1}]
                expected = _as_class(out_space, "2", opts, free, (-1) ** (dphi * odd))
            assert ye.yoneda_closed(ctx, n, a, ind) == expected
            assert ye.yoneda_oracle(ctx, n, a, ind) == expected


@pytest.mark.parametrize("seed", range(4))
def test_right_naturality(seed):
    rng = random.Random(seed)
    n = 2 + seed % 2
    ctx = hom_model_context(rng, ["D", "L", "E", "F", "M"], max_dim=2, degrees=(0, 1))
    b_space = HilbExtSpace(ctx, Taut("D", "L"), Taut("E", "M"), n)
    out_space = HilbExtSpace(ctx, Taut("D", "L"), Taut("F", "M"), n)
    for phi in ctx.ext_space("E", "F").labels:
        ind = ye.induced_morphism_class(ctx, phi, "E", "F", "M", n)
        dphi = _deg(ctx, "E", "F", phi)
        for lab in b_space.labels:
            tag, fixed, free = lab
            b = PClass(b_space, {lab: 1})
            if tag == "1":
                (psi,) = fixed
                expected = _as_class(out_space, "1", [ctx.compose_labels("D", "E", "F", phi, psi)], free, 1)
            else:
                eta, x = fixed
                opts = [{eta: 1}, ctx.compose_labels("L", "E", "F", phi, x)]
                sign = (-1) ** (dphi * _deg(ctx, "D", "M", eta))
                expected = _as_class(out_space, "2", opts, free, sign)
            assert ye.yoneda_closed(ctx, n, ind, b) == expected
            assert ye.yoneda_oracle(ctx, n, ind, b) == expected


@pytest.mark.parametrize("n", [2, 3])
def test_identity_is_two_sided_unit(n):
    rng = random.Random(n)
    ctx = hom_model_context(rng, ["A", "B"], max_dim=2, degrees=(0, 1))
    unit = ye.induced_morphism_class(ctx, ctx.identity("A"), "A", "A", "B", n)
    space = unit.space
    for _ in range(4):
        c = random_class(rng, space, terms=3)
        for engine in (ye.yoneda_closed, ye.yoneda_oracle):
            assert engine(ctx, n, unit, c) == c
            assert engine(ctx, n, c, unit) == c


def test_induced_needs_identity():
    ctx = one_dim_ctx(["E", "F", "M"])
    with pytest.raises(MissingDataError):
        ye.induced_morphism_class(ctx, "EF", "E", "F", "M", 2)


# -- determinant and mixed cases --------------------------------------------------------

def test_det_det_square():
    c = Fraction(3)
    ext = {("L", "M"): GradedSpace([("s", 0)]), ("M", "N"): GradedSpace([("t", 0)]),
           ("L", "N"): GradedSpace([("u", 0)])}
    ctx = SurfaceContext(["L", "M", "N"], ext, {("L", "M", "N"): {("t", "s"): {"u": c}}})
    b = PClass(HilbExtSpace(ctx, Det("L"), Det("M"), 2), {("dd", (), ("s", "s")): 1})
    a = PClass(HilbExtSpace(ctx, Det("M"), Det("N"), 2), {("dd", (), ("t", "t")): 1})
    assert ye.det_det_compose(ctx, 2, a, b).terms == {("dd", (), ("u", "u")): c * c}


def test_det_det_identities():
    rng = random.Random(2)
    ctx = hom_model_context(rng, ["L"], max_dim=2, degrees=(0, 1))
    for n in (2, 3):
        space = HilbExtSpace(ctx, Det("L"), Det("L"), n)
        one = PClass.decomposable(space, "dd", (), (ctx.identity("L"),) * n)
        assert ye.det_det_compose(ctx, n, one, one) == one
        c = random_class(rng, space, terms=3)
        assert ye.det_det_compose(ctx, n, one, c) == c


@pytest.mark.parametrize("seed", range(4))
def test_mixed_cases_land_in_ext_spaces(seed):
    rng = random.Random(seed)
    n = 2 + seed % 2
    ctx = hom_model_context(rng, ["E", "L", "M", "N"], max_dim=2, degrees=(0, 1))
    objs = {"tE": Taut("E", "L"), "dL": Det("L"), "dM": Det("M"), "tN": Taut("N", "M")}
    for x, y, z in [("tE", "dM", "dL"), ("dL", "tN", "dM"), ("dL", "dM", "tN"), ("tE", "dM", "tN")]:
        b_space = HilbExtSpace(ctx, objs[x], objs[y], n)
        a_space = HilbExtSpace(ctx, objs[y], objs[z], n)
        a, b = random_class(rng, a_space), random_class(rng, b_space)
        out = ye.yoneda_product(ctx, n, a, b)
        assert out.space.src == objs[x] and out.space.tgt == objs[z]
        assert out.space.dims == HilbExtSpace(ctx, objs[x], objs[z], n).dims
        full = ye.compose_equivariant(ye.lift_to_equivariant(ctx, n, a), ye.lift_to_equivariant(ctx, n, b))
        assert full.is_invariant()
        assert ye.project(full, out.space) == out


def test_to_text():
    ctx = one_dim_ctx(["E", "L", "F", "M"])
    space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), 3)
    c = PClass.decomposable(space, "1", ("EF",), ("LM", "LM"), Fraction(-2, 3))
    assert c.to_text() == ["1 | EF ; LM LM | -2/3"]
