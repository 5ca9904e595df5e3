"""Random surface contexts and classes for property checks."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hilbext.ext_calculator import HilbExtSpace, SurfaceContext, Taut, UNIT
from hilbext.graded_core import GradedSpace

TAUT_OBJECTS = ("E", "L", "F", "M", "G", "N")


def taut_pairs(E="E", L="L", F="F", M="M", G="G", N="N"):
    """Ext pairs used by products of taut(E,L) -> taut(F,M) -> taut(G,N)."""
    pairs = set()
    for (x, l), (y, m) in [((E, L), (F, M)), ((F, M), (G, N)), ((E, L), (G, N))]:
        pairs |= {(x, y), (x, m), (l, y), (l, m)}
    return sorted(pairs)


def taut_triples(E="E", L="L", F="F", M="M", G="G", N="N"):
    return [(E, F, G), (L, M, N), (E, M, G), (L, F, N), (E, F, N), (L, M, G), (E, M, N), (L, F, G)]


def random_space(rng: random.Random, prefix: str, max_dim: int = 2, degrees=(0, 1, 2), allow_zero=True):
    lo = 0 if allow_zero else 1
    d = rng.randint(lo, max_dim)
    degs = sorted(rng.choice(degrees) for _ in range(d))
    return GradedSpace((f"{prefix}{k}", deg) for k, deg in enumerate(degs))


def random_table(rng: random.Random, first: GradedSpace, second: GradedSpace, out: GradedSpace,
                 density: float = 1.0, coeffs=(-2, -1, 1, 2)):
    table = {}
    for a, da in first.basis:
        for b, db in second.basis:
            targets = out.labels_in_degree(da + db)
            entry = {lab: Fraction(rng.choice(coeffs)) for lab in targets if rng.random() < density}
            if entry:
                table[(b, a)] = entry
    return table


def random_context(rng: random.Random, pairs=None, triples=None, max_dim: int = 2,
                   degrees=(0, 1, 2), allow_zero=True, aligned=True) -> SurfaceContext:
    """Random Ext spaces and (generally non-associative) composition tables.

    With ``aligned`` set, spaces that only occur as composition targets draw
    their degrees from the sums that compositions can actually produce, so that
    products are rarely forced to vanish.
    """
    pairs = pairs if pairs is not None else taut_pairs()
    triples = triples if triples is not None else taut_triples()
    objs = sorted({o for p in pairs for o in p} | {o for t in triples for o in t})
    inputs = {(t[0], t[1]) for t in triples} | {(t[1], t[2]) for t in triples}
    outputs = {(t[0], t[2]) for t in triples} | set(pairs)
    ext = {}
    for a, b in sorted(inputs | outputs):
        if (a, b) in inputs or not aligned:
            ext[(a, b)] = random_space(rng, f"{a}{b}_", max_dim, degrees, allow_zero)
    for a, b in sorted(outputs - inputs if aligned else ()):
        sums = sorted({da + db for t in triples if (t[0], t[2]) == (a, b)
                       for _, da in ext[(t[0], t[1])].basis for _, db in ext[(t[1], t[2])].basis
                       if da + db <= max(degrees)}) or list(degrees)
        d = rng.randint(0 if allow_zero else 1, max_dim)
        degs = sorted(rng.choice(sums) for _ in range(d))
        ext[(a, b)] = GradedSpace((f"{a}{b}_{k}", deg) for k, deg in enumerate(degs))
    compose = {}
    for a, b, c in triples:
        compose[(a, b, c)] = random_table(rng, ext[(a, b)], ext[(b, c)], ext[(a, c)])
    return SurfaceContext(objs, ext, compose)


def hom_model_context(rng: random.Random, objects, max_dim: int = 2, degrees=(0, 1)) -> SurfaceContext:
    """Context where ext(A, B) is the graded Hom between small graded vector spaces.

    Composition is matrix multiplication, so tables are associative and identities exist.
    """
    vecs = {}
    for obj in objects:
        d = rng.randint(1, max_dim)
        vecs[obj] = [rng.choice(degrees) for _ in range(d)]
    ext, units = {}, {}
    for a, b in itertools.product(objects, repeat=2):
        basis = []
        for p, dp in enumerate(vecs[a]):
            for q, dq in enumerate(vecs[b]):
                basis.append((f"{a}{b}_{p}{q}", dq - dp))
        ext[(a, b)] = GradedSpace(basis)
    compose = {}
    for a, b, c in itertools.product(objects, repeat=3):
        table = {}
        for p in range(len(vecs[a])):
            for q in range(len(vecs[b])):
                for r in range(len(vecs[c])):
                    table[(f"{b}{c}_{q}{r}", f"{a}{b}_{p}{q}")] = {f"{a}{c}_{p}{r}": Fraction(1)}
        compose[(a, b, c)] = table
    # identity = sum of diagonal units; give it its own basis by a change of labels
    return _with_identities(SurfaceContext(objects, ext, compose), vecs)


def _with_identities(ctx: SurfaceContext, vecs) -> SurfaceContext:
    """Rebase each ext(A, A) so that the identity is a basis vector."""
    ext = dict(ctx.ext)
    compose = {k: dict(v) for k, v in ctx.compose.items()}
    identities = {}
    for obj, degs in vecs.items():
        if len(degs) == 1:
            identities[obj] = f"{obj}{obj}_00"
            continue
        # new basis of ext(A,A): id = sum_p e_pp replaces e_00
        old = ext[(obj, obj)]
        one = f"1_{obj}"
        basis = [(one if lab == f"{obj}{obj}_00" else lab, d) for lab, d in old.basis]
        ext[(obj, obj)] = GradedSpace(basis)
        identities[obj] = one
        diag = [f"{obj}{obj}_{p}{p}" for p in range(len(degs))]
        # e_00 = id - sum_{p>0} e_pp
        e00 = {one: Fraction(1)}
        for lab in diag[1:]:
            e00[lab] = Fraction(-1)

        def expand(label):
            return e00 if label == f"{obj}{obj}_00" else {label: Fraction(1)}

        def collapse(vec):
            # rewrite e_00 in the new basis inside a result vector
            out = {}
            for lab, c in vec.items():
                for l2, c2 in expand(lab).items():
                    out[l2] = out.get(l2, 0) + c * c2
            return {k: v for k, v in out.items() if v}

        def to_old(label):
            # id -> sum_p e_pp
            if label == one:
                return {d: Fraction(1) for d in diag}
            return {label: Fraction(1)}

        for key, table in list(compose.items()):
            a, b, c = key
            new = {}
            first_new = a == obj and b == obj
            second_new = b == obj and c == obj
            out_new = a == obj and c == obj
            firsts = ext[(a, b)].labels
            seconds = ext[(b, c)].labels
            for f in firsts:
                for s in seconds:
                    acc = {}
                    for f_old, cf in (to_old(f) if first_new else {f: 1}).items():
                        for s_old, cs in (to_old(s) if second_new else {s: 1}).items():
                            for lab, c3 in table.get((s_old, f_old), {}).items():
                                acc[lab] = acc.get(lab, 0) + cf * cs * c3
                    acc = {k: v for k, v in acc.items() if v}
                    if out_new:
                        acc = collapse(acc)
                    if acc:
                        new[(s, f)] = acc
            compose[key] = new
    return SurfaceContext(ctx.objects, ext, compose, identities)


def random_class(rng: random.Random, space: HilbExtSpace, terms: int = 2, coeffs=(-2, -1, 1, 2, Fraction(1, 2))):
    from hilbext.yoneda_engine import PClass

    if not len(space):
        return PClass.zero(space)
    picks = {}
    for _ in range(terms):
        lab = rng.choice(space.labels)
        picks[lab] = picks.get(lab, 0) + Fraction(rng.choice(coeffs))
    return PClass(space, picks)


def random_taut_triple(rng, n, **kw):
    """Context plus random classes a in P(F,M,G,N) and b in P(E,L,F,M)."""
    ctx = random_context(rng, **kw)
    b_space = HilbExtSpace(ctx, Taut("E", "L"), Taut("F", "M"), n)
    a_space = HilbExtSpace(ctx, Taut("F", "M"), Taut("G", "N"), n)
    return ctx, random_class(rng, a_space), random_class(rng, b_space)


__all__ = ["random_context", "hom_model_context", "random_class", "random_taut_triple", "UNIT"]
