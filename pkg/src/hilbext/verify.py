"""Verification suites behind ``hilbext verify``.

Each suite returns report lines and an overall flag.  Everything is exact and
deterministic for a fixed random generator.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hilbext import symmetric_group_reps as sgr
from hilbext import taut_complex_model as tcm
from hilbext.ext_calculator import Det, HilbExtSpace, Taut, formula_poly
from hilbext.graded_core import GradedSpace, sym_power
from hilbext.oracles import danila_invariant_dims, equivariant_invariant_dims, signed_projector_dims
from hilbext.samples import hom_model_context, random_context, random_taut_triple
from hilbext.sign_combinatorics import Permutation


def expected_wedge_invariants(ell: int, p: int) -> int:
    return 1 if p % 2 == 0 and 0 <= p <= 2 * (ell - 1) else 0


def wedge_invariants_table(max_ell: int):
    rows = []
    for ell in range(2, max_ell + 1):
        rep = sgr.direct_sum(sgr.standard_rep(ell), sgr.standard_rep(ell))
        for p in range(0, 2 * ell + 1):
            got = sgr.invariants_dim(sgr.wedge_power(rep, p)) if p <= rep.dim else 0
            rows.append((ell, p, got, expected_wedge_invariants(ell, p)))
    return rows


def danila_trials(rng: random.Random, count: int, max_ell: int = 5):
    """(ok, dim) per random transitive permuted module."""
    out = []
    for _ in range(count):
        M = sgr.random_permuted_module(rng, max_ell=max_ell)
        pt = rng.choice(M.points)
        proj, inv = sgr.danila_roundtrip(M, pt)
        out.append((_composes_to_identity(proj, inv), len(proj)))
    return out


def _composes_to_identity(proj, inv) -> bool:
    k = len(proj)
    if len(inv) != k or any(len(r) != k for r in proj) or any(len(r) != k for r in inv):
        return False
    for a, b in ((proj, inv), (inv, proj)):
        for r in range(k):
            for c in range(k):
                if sum(a[r][t] * b[t][c] for t in range(k)) != (1 if r == c else 0):
                    return False
    return True


def suite_reps(max_n, rng):
    lines, ok = [], True
    for ell, p, got, want in wedge_invariants_table(max_n):
        ok &= got == want
        lines.append(f"invariants l={ell} p={p}: {got} (expected {want})")
    for ell in range(2, max_n + 1):
        for d, want in ((1, "alternating"), (2, "trivial")):
            got = sgr.top_wedge_action(ell, d)
            ok &= got == want
            lines.append(f"top wedge l={ell} d={d}: {got}")
    for k in range(2, min(max_n, 5) + 1):
        for p in range(0, k - 1):
            mat, bij = sgr.diag_induction_T(k, p)
            ok &= bij
            lines.append(f"T k={k} p={p}: {mat[0][0]} bijective={bij}")
    trials = danila_trials(rng, 20, min(max_n, 5))
    good = sum(t for t, _ in trials)
    ok &= good == len(trials)
    lines.append(f"danila round trips: {good}/{len(trials)}")
    return lines, ok


def suite_complex(max_n, rng):
    lines, ok = [], True
    for n in range(2, max_n + 1):
        samples = None if n <= 6 else 1000
        rep = tcm.check_all(n, samples, seed=rng.randrange(2**32))
        ok &= rep.ok
        mode = "exhaustive" if samples is None else f"{samples} random sigma"
        lines.append(f"complex n={n} ({mode}): {len(rep.violations)} violations in {rep.checked} checks")
        ok &= tcm.euler_characteristic(n) == 1
    return lines, ok


def closed_vs_oracle(rng, n, degrees=(0, 1, 2)):
    from hilbext.yoneda_engine import yoneda_closed, yoneda_oracle

    ctx, a, b = random_taut_triple(rng, n, allow_zero=False, degrees=degrees)
    closed = yoneda_closed(ctx, n, a, b)
    oracle = yoneda_oracle(ctx, n, a, b)
    return closed == oracle, not oracle.is_zero()


DEGREE_SETS = [(0,), (0, 1), (0, 2), (0, 1, 2), (0, 0, 1)]


def _expand_fixed(space, tag, fixed_options, free, coeff):
    from hilbext.yoneda_engine import PClass

    out = PClass.zero(space)
    combos = [((), Fraction(coeff))]
    for opts in fixed_options:
        combos = [(f + (lab,), c * c2) for f, c in combos for lab, c2 in opts.items()]
    for fixed, c in combos:
        out = out + PClass.decomposable(space, tag, fixed, free, c)
    return out


def naturality_defects(rng, n, engines=None):
    """Count basis classes where composing with an induced morphism breaks the expected law.

    Left: a o ind(phi) = (psi phi ; eta phi, x), right: ind(phi) o b = (phi psi ; eta, phi x),
    with Koszul signs from moving phi past the other letters.  Also checks the unit on both sides.
    Returns (checked, defects).
    """
    from hilbext.yoneda_engine import PClass, induced_morphism_class, yoneda_closed, yoneda_oracle

    engines = engines or (yoneda_closed, yoneda_oracle)
    checked = defects = 0

    def deg(ctx, a, b, lab):
        return ctx.ext_space(a, b).degree(lab)

    ctx = hom_model_context(rng, ["E", "F", "G", "M", "N"], max_dim=2, degrees=(0, 1))
    a_space = HilbExtSpace(ctx, Taut("F", "M"), Taut("G", "N"), n)
    out_space = HilbExtSpace(ctx, Taut("E", "M"), Taut("G", "N"), n)
    for phi in ctx.ext_space("E", "F").labels:
        ind = induced_morphism_class(ctx, phi, "E", "F", "M", n)
        dphi = deg(ctx, "E", "F", phi)
        for lab in a_space.labels:
            tag, fixed, free = lab
            if tag == "1":
                odd = sum(deg(ctx, "M", "N", s) for s in free)
                opts = [ctx.compose_labels("E", "F", "G", fixed[0], phi)]
            else:
                odd = deg(ctx, "M", "G", fixed[1]) + sum(deg(ctx, "M", "N", t) for t in free)
                opts = [ctx.compose_labels("E", "F", "N", fixed[0], phi), {fixed[1]: 1}]
            want = _expand_fixed(out_space, tag, opts, free, (-1) ** (dphi * odd))
            for engine in engines:
                checked += 1
                defects += engine(ctx, n, PClass(a_space, {lab: 1}), ind) != want

    ctx = hom_model_context(rng, ["D", "L", "E", "F", "M"], max_dim=2, degrees=(0, 1))
    b_space = HilbExtSpace(ctx, Taut("D", "L"), Taut("E", "M"), n)
    out_space = HilbExtSpace(ctx, Taut("D", "L"), Taut("F", "M"), n)
    for phi in ctx.ext_space("E", "F").labels:
        ind = induced_morphism_class(ctx, phi, "E", "F", "M", n)
        dphi = deg(ctx, "E", "F", phi)
        for lab in b_space.labels:
            tag, fixed, free = lab
            if tag == "1":
                want = _expand_fixed(out_space, "1", [ctx.compose_labels("D", "E", "F", phi, fixed[0])], free, 1)
            else:
                opts = [{fixed[0]: 1}, ctx.compose_labels("L", "E", "F", phi, fixed[1])]
                want = _expand_fixed(out_space, "2", opts, free, (-1) ** (dphi * deg(ctx, "D", "M", fixed[0])))
            for engine in engines:
                checked += 1
                defects += engine(ctx, n, ind, PClass(b_space, {lab: 1})) != want

    ctx = hom_model_context(rng, ["A", "B"], max_dim=2, degrees=(0, 1))
    unit = induced_morphism_class(ctx, ctx.identity("A"), "A", "A", "B", n)
    for lab in unit.space.labels:
        c = PClass(unit.space, {lab: 1})
        for engine in engines:
            checked += 2
            defects += (engine(ctx, n, unit, c) != c) + (engine(ctx, n, c, unit) != c)
    return checked, defects


def suite_yoneda(max_n, rng, per_n=30):
    lines, ok = [], True
    for n in range(2, max(max_n, 2) + 1):
        agree = nonzero = 0
        for _ in range(per_n):
            same, nz = closed_vs_oracle(rng, n, rng.choice(DEGREE_SETS))
            agree += same
            nonzero += nz
        ok &= agree == per_n
        lines.append(f"closed vs oracle n={n}: {agree}/{per_n} agree ({nonzero} non-zero products)")
    for n in range(2, min(max(max_n, 2), 3) + 1):
        checked, defects = naturality_defects(rng, n)
        ok &= defects == 0
        lines.append(f"identity and naturality n={n}: {checked - defects}/{checked}")
    return lines, ok


def small_graded_spaces(max_total=3, degrees=(0, 1, 2, 3)):
    """Every graded space of total dimension <= max_total with the given degrees."""
    for total in range(0, max_total + 1):
        for degs in itertools.combinations_with_replacement(degrees, total):
            yield GradedSpace((f"v{k}", d) for k, d in enumerate(degs))


def ext_consistency(ctx, src, tgt, n):
    space = HilbExtSpace(ctx, src, tgt, n)
    dims = space.dims
    return (dims == formula_poly(ctx, src, tgt, n)
            and dims == equivariant_invariant_dims(ctx, src, tgt, n)
            and dims == danila_invariant_dims(ctx, src, tgt, n))


def random_ext_case(rng):
    n = rng.choice([2, 3, 4])
    kind = rng.choice(["tt", "td", "dd", "dt"])
    src = Taut("E", "L") if kind[0] == "t" else Det("L")
    tgt = Taut("F", "M") if kind[1] == "t" else Det("M")
    pairs = [("E", "F"), ("E", "M"), ("L", "F"), ("L", "M")]
    ctx = random_context(rng, pairs=pairs, triples=[], max_dim=2, degrees=(0, 1, 2))
    return ctx, src, tgt, n


def suite_graded(max_n, rng):
    lines, ok = [], True
    checked = bad = 0
    for V in small_graded_spaces():
        for n in range(0, min(max_n, 4) + 1):
            checked += 1
            if sym_power(V, n).dims != signed_projector_dims(V, n):
                bad += 1
    ok &= bad == 0
    lines.append(f"symmetric powers vs signed projector: {checked - bad}/{checked}")
    good = 0
    for _ in range(50):
        good += ext_consistency(*random_ext_case(rng))
    ok &= good == 50
    lines.append(f"ext formulas vs bases vs equivariant counts: {good}/50")
    return lines, ok


SUITES = {"reps": suite_reps, "complex": suite_complex, "yoneda": suite_yoneda, "graded": suite_graded}


def run_suite(name, max_n, rng):
    return SUITES[name](max_n, rng)


__all__ = ["run_suite", "SUITES", "Permutation"]
