"""Brute-force cross-checks that share no code path with the closed formulas."""

from __future__ import annotations

import itertools
from collections import defaultdict

import numpy as np

from hilbext import qmat
from hilbext.ext_calculator import Det, Taut, index_set, slot_pairs
from hilbext.graded_core import GradedSpace, TensorSpace, act_on_tensor
from hilbext.sign_combinatorics import Permutation


def signed_projector_dims(V: GradedSpace, n: int) -> dict[int, int]:
    """Degree-wise rank of sum_sigma sigma on V^{x n}, with the Koszul-signed action."""
    if n == 0:
        return {0: 1}
    T = TensorSpace([V] * n)
    out = {}
    perms = list(Permutation.all(n))
    for deg in sorted(T.dims):
        labels = T.labels_in_degree(deg)
        pos = {lab: k for k, lab in enumerate(labels)}
        m = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for c, lab in enumerate(labels):
            degs = [V.degree(x) for x in lab]
            for sigma in perms:
                sign, new = act_on_tensor(sigma, lab, degs)
                m[pos[new], c] += sign
        r = qmat.rank(m)
        if r:
            out[deg] = r
    return out


def _signed_orbit_count(start_items, moves, by_degree):
    """Count orbits of signed monomials on which the stabilizer acts trivially.

    ``moves(item)`` yields ``(sign, image)`` for each group generator (or element).
    Returns {degree: count}, degree given by ``by_degree(item)``.
    """
    seen = {}
    out = defaultdict(int)
    for item in start_items:
        if item in seen:
            continue
        seen[item] = 1
        queue = [item]
        alive = True
        while queue:
            x = queue.pop()
            sx = seen[x]
            for sign, y in moves(x):
                sy = sx * sign
                if y not in seen:
                    seen[y] = sy
                    queue.append(y)
                elif seen[y] != sy:
                    alive = False
        if alive:
            out[by_degree(item)] += 1
    return {d: c for d, c in sorted(out.items()) if c}


def _component_basis(ctx, src, tgt, i, j, n):
    spaces = [ctx.ext_space(a, b) for a, b in slot_pairs(src, tgt, i, j, n)]
    return spaces, list(itertools.product(*[sp.labels for sp in spaces]))


def _act(sigma, idx):
    return None if idx is None else sigma(idx)


def equivariant_invariant_dims(ctx, src, tgt, n) -> dict[int, int]:
    """dim of S_n-invariants of the full component sum, by signed orbit counting over S_n."""
    comps = [(i, j) for i in index_set(src, n) for j in index_set(tgt, n)]
    spaces = {c: _component_basis(ctx, src, tgt, *c, n)[0] for c in comps}
    gens = [Permutation.transposition(n, k, k + 1) for k in range(1, n)]

    def degs(item):
        (i, j), labels = item
        return [sp.degree(x) for sp, x in zip(spaces[(i, j)], labels)]

    def moves(item):
        (i, j), labels = item
        d = degs(item)
        for g in gens:
            sign, new = act_on_tensor(g, labels, d)
            yield sign, ((_act(g, i), _act(g, j)), new)

    items = [(c, lab) for c in comps for lab in _component_basis(ctx, src, tgt, *c, n)[1]]
    return _signed_orbit_count(items, moves, lambda it: sum(degs(it)))


def danila_invariant_dims(ctx, src, tgt, n) -> dict[int, int]:
    """Sum over component orbits of the Stab-invariants of one representative component."""
    comps = [(i, j) for i in index_set(src, n) for j in index_set(tgt, n)]
    group = list(Permutation.all(n))
    total = defaultdict(int)
    remaining = set(comps)
    while remaining:
        rep = min(remaining, key=lambda c: (c[0] or 0, c[1] or 0))
        orbit = {(_act(g, rep[0]), _act(g, rep[1])) for g in group}
        remaining -= orbit
        stab = [g for g in group if (_act(g, rep[0]), _act(g, rep[1])) == rep]
        spaces, basis = _component_basis(ctx, src, tgt, *rep, n)

        def degs(labels):
            return [sp.degree(x) for sp, x in zip(spaces, labels)]

        def moves(labels):
            d = degs(labels)
            for g in stab:
                yield act_on_tensor(g, labels, d)

        for d, c in _signed_orbit_count(basis, moves, lambda lab: sum(degs(lab))).items():
            total[d] += c
    return {d: c for d, c in sorted(total.items()) if c}


__all__ = ["signed_projector_dims", "equivariant_invariant_dims", "danila_invariant_dims", "Taut", "Det"]
