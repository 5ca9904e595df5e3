"""Exact integer/rational matrix representations of symmetric groups.

A representation of S_l is stored through the images of the adjacent
transpositions s_i = (i, i+1); other elements are products along a reduced word.
Matrices act on column vectors and R(g h) = R(g) R(h).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from hilbext import qmat
from hilbext.sign_combinatorics import Permutation

DEFAULT_CAP = 7


class CapExceeded(ValueError):
    pass


class NotTransitiveError(ValueError):
    pass


def _exact_array(m):
    arr = np.array(m, dtype=object)
    if all(isinstance(x, (int, np.integer)) or (isinstance(x, Fraction) and x.denominator == 1)
           for x in arr.flat):
        ints = np.array([[int(x) for x in row] for row in arr.tolist()], dtype=object) if arr.size else arr
        if arr.size == 0 or max(abs(int(x)) for x in ints.flat) < 2**31:
            return np.array(ints.tolist() if arr.size else np.zeros(arr.shape), dtype=np.int64).reshape(arr.shape)
    return arr


@dataclass(frozen=True)
class SnRepresentation:
    ell: int
    dim: int
    generators: tuple = field(repr=False)

    def __post_init__(self):
        gens = tuple(_exact_array(g).reshape(self.dim, self.dim) for g in self.generators)
        if len(gens) != max(self.ell - 1, 0):
            raise ValueError(f"S_{self.ell} needs {self.ell - 1} generators, got {len(gens)}")
        object.__setattr__(self, "generators", gens)

    def element(self, g: Permutation):
        if g.n != self.ell:
            raise ValueError(f"{g} is not in S_{self.ell}")
        out = qmat.identity(self.dim)
        for i in g.reduced_word():
            out = qmat.matmul(out, self.generators[i - 1])
        return out

    def all_elements(self, cap: int = DEFAULT_CAP):
        """Every (g, R(g)), each reached by one multiplication from an earlier element."""
        if self.ell > cap:
            raise CapExceeded(f"S_{self.ell} exceeds the averaging cap {cap}")
        start = Permutation.identity(self.ell)
        seen = {start.images: qmat.identity(self.dim)}
        order = [start]
        queue = deque([start])
        while queue:
            g = queue.popleft()
            mat = seen[g.images]
            for i in range(1, self.ell):
                h = g * Permutation.transposition(self.ell, i, i + 1)
                if h.images not in seen:
                    seen[h.images] = qmat.matmul(mat, self.generators[i - 1])
                    order.append(h)
                    queue.append(h)
        return [(g, seen[g.images]) for g in order]

    def check_relations(self) -> list[str]:
        problems = []
        eye = qmat.identity(self.dim)
        g = self.generators
        for i, a in enumerate(g):
            if not np.array_equal(qmat.matmul(a, a), eye):
                problems.append(f"s_{i + 1}^2 != 1")
        for i in range(len(g) - 1):
            lhs = qmat.matmul(qmat.matmul(g[i], g[i + 1]), g[i])
            rhs = qmat.matmul(qmat.matmul(g[i + 1], g[i]), g[i + 1])
            if not np.array_equal(lhs, rhs):
                problems.append(f"braid relation fails at {i + 1}")
        for i in range(len(g)):
            for j in range(i + 2, len(g)):
                if not np.array_equal(qmat.matmul(g[i], g[j]), qmat.matmul(g[j], g[i])):
                    problems.append(f"s_{i + 1} s_{j + 1} != s_{j + 1} s_{i + 1}")
        return problems

    def character(self, g: Permutation):
        m = self.element(g)
        return sum(m[k, k] for k in range(self.dim))

    def reynolds_sum(self, cap: int = DEFAULT_CAP):
        """sum_g R(g); the Reynolds projector is this divided by l!."""
        total = np.zeros((self.dim, self.dim), dtype=np.int64)
        for _, m in self.all_elements(cap):
            total = total + m if total.dtype == m.dtype == np.int64 else total.astype(object) + m
        return total


def trivial_rep(ell: int) -> SnRepresentation:
    return SnRepresentation(ell, 1, tuple([[1]] for _ in range(ell - 1)))


def alternating_rep(ell: int) -> SnRepresentation:
    if ell < 1:
        raise ValueError("need l >= 1")
    return SnRepresentation(ell, 1, tuple([[-1]] for _ in range(ell - 1)))


def natural_rep(ell: int) -> SnRepresentation:
    if ell < 1:
        raise ValueError("need l >= 1")
    gens = []
    for i in range(ell - 1):
        m = np.eye(ell, dtype=np.int64)
        m[[i, i + 1]] = m[[i + 1, i]]
        gens.append(m)
    return SnRepresentation(ell, ell, tuple(gens))


def _standard(ell: int) -> SnRepresentation:
    # basis b_k = e_k - e_{k+1}; a sum-zero vector v has b-coordinates c_k = v_1 + ... + v_k
    gens = []
    for i in range(ell - 1):
        m = np.zeros((ell - 1, ell - 1), dtype=np.int64)
        for k in range(ell - 1):
            v = np.zeros(ell, dtype=np.int64)
            v[k], v[k + 1] = 1, -1
            v[[i, i + 1]] = v[[i + 1, i]]
            m[:, k] = np.cumsum(v)[:-1]
        gens.append(m)
    return SnRepresentation(ell, ell - 1, tuple(gens))


def standard_rep(ell: int) -> SnRepresentation:
    if ell < 2:
        raise ValueError("the standard representation needs l >= 2")
    return _standard(ell)


def direct_sum(*reps: SnRepresentation) -> SnRepresentation:
    ell = reps[0].ell
    if any(r.ell != ell for r in reps):
        raise ValueError("direct sum of representations of different groups")
    dim = sum(r.dim for r in reps)
    gens = []
    for i in range(ell - 1):
        m = np.zeros((dim, dim), dtype=np.int64)
        off = 0
        for r in reps:
            m[off:off + r.dim, off:off + r.dim] = r.generators[i]
            off += r.dim
        gens.append(m)
    return SnRepresentation(ell, dim, tuple(gens))


def tensor(r: SnRepresentation, s: SnRepresentation) -> SnRepresentation:
    if r.ell != s.ell:
        raise ValueError("tensor product of representations of different groups")
    gens = tuple(np.kron(a, b) for a, b in zip(r.generators, s.generators))
    return SnRepresentation(r.ell, r.dim * s.dim, gens)


def wedge_matrix(a, p: int, rows_dim: int | None = None):
    """Matrix of the p-th exterior power of a linear map (basis: sorted index subsets)."""
    a = np.asarray(a)
    n_rows = a.shape[0] if rows_dim is None else rows_dim
    n_cols = a.shape[1]
    row_sets = list(itertools.combinations(range(n_rows), p))
    col_sets = list(itertools.combinations(range(n_cols), p))
    row_index = {s: k for k, s in enumerate(row_sets)}
    out = np.zeros((len(row_sets), len(col_sets)), dtype=object)
    nonzero = [[(r, a[r, c]) for r in range(n_rows) if a[r, c] != 0] for c in range(n_cols)]
    for cidx, cols in enumerate(col_sets):
        for choice in itertools.product(*[nonzero[c] for c in cols]):
            rows = [r for r, _ in choice]
            if len(set(rows)) < p:
                continue
            coeff = 1
            for _, v in choice:
                coeff *= v
            inv = sum(1 for x in range(p) for y in range(x + 1, p) if rows[x] > rows[y])
            out[row_index[tuple(sorted(rows))], cidx] += -coeff if inv % 2 else coeff
    return _exact_array(out) if out.size else np.zeros(out.shape, dtype=np.int64)


def wedge_power(r: SnRepresentation, p: int) -> SnRepresentation:
    if not 0 <= p <= r.dim:
        raise ValueError(f"wedge power {p} out of range 0..{r.dim}")
    gens = tuple(wedge_matrix(g, p) for g in r.generators)
    return SnRepresentation(r.ell, comb(r.dim, p), gens)


def invariants_dim(r: SnRepresentation, cap: int = DEFAULT_CAP) -> int:
    """Rank of the Reynolds projector (1/l!) sum_g R(g)."""
    s = r.reynolds_sum(cap)
    if r.dim <= 80:
        return qmat.rank(s)
    # large case: S/|G| is idempotent, so its rank is its trace; check idempotence exactly
    order = factorial(r.ell)
    if not np.array_equal(qmat.matmul(s, s), order * s.astype(object) if s.dtype == object else order * s):
        raise ArithmeticError("Reynolds sum is not a multiple of an idempotent")
    tr = sum(int(s[k, k]) for k in range(r.dim))
    if tr % order:
        raise ArithmeticError("trace of the Reynolds projector is not an integer")
    return tr // order


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def class_representative(shape) -> Permutation:
    n = sum(shape)
    cycles, start = [], 1
    for length in shape:
        cycles.append(tuple(range(start, start + length)))
        start += length
    return Permutation.from_cycles(n, cycles)


def class_size(shape) -> int:
    n = sum(shape)
    z = 1
    for k, mult in Counter(shape).items():
        z *= k**mult * factorial(mult)
    return factorial(n) // z


def character_invariants_dim(r: SnRepresentation) -> int:
    """<chi_R, 1> summed over conjugacy classes."""
    total = 0
    for shape in partitions(r.ell):
        total += class_size(shape) * int(r.character(class_representative(shape)))
    q = Fraction(total, factorial(r.ell))
    if q.denominator != 1:
        raise ArithmeticError("character inner product is not an integer")
    return int(q)


def top_wedge_action(ell: int, d: int) -> str:
    """How S_l acts on the top exterior power of d copies of the standard representation."""
    if ell < 2 or d < 1:
        raise ValueError("need l >= 2 and d >= 1")
    rep = direct_sum(*[standard_rep(ell)] * d)
    top = wedge_power(rep, rep.dim)
    values = {int(g[0, 0]) for g in top.generators}
    if values == {1}:
        return "trivial"
    if values == {-1}:
        return "alternating"
    raise ArithmeticError(f"top wedge generators act by {values}")


# -- modules decomposed along a G-set ----------------------------------------

def unimodular(dim: int, rng: random.Random, steps: int = 4):
    """Random integer matrix with integer inverse, and that inverse."""
    a = np.eye(dim, dtype=np.int64)
    inv = np.eye(dim, dtype=np.int64)
    for _ in range(steps if dim > 1 else 0):
        i, j = rng.sample(range(dim), 2)
        c = rng.choice([-2, -1, 1, 2])
        e = np.eye(dim, dtype=np.int64)
        e[i, j] = c
        e_inv = np.eye(dim, dtype=np.int64)
        e_inv[i, j] = -c
        a = e @ a
        inv = inv @ e_inv
    if dim and rng.random() < 0.5:
        k = rng.randrange(dim)
        a[k] *= -1
        inv[:, k] *= -1
    return a, inv


class PermutedModule:
    """M = sum_{i in I} M_i with S_l permuting the summands along an action on I.

    Built as the module induced from a representation of Stab(base point),
    with a random change of basis on every summand.
    """

    def __init__(self, ell, points, act, summand_dims, element_fn):
        self.ell = ell
        self.points = list(points)
        self.act = act
        self.summand_dims = dict(summand_dims)
        self.offsets = {}
        off = 0
        for pt in self.points:
            self.offsets[pt] = off
            off += self.summand_dims[pt]
        self.dim = off
        self._element_fn = element_fn

    def block(self, pt) -> slice:
        return slice(self.offsets[pt], self.offsets[pt] + self.summand_dims[pt])

    def element(self, g: Permutation):
        return self._element_fn(g)

    def group(self):
        return list(Permutation.all(self.ell))

    def orbit(self, pt):
        seen = {pt}
        queue = [pt]
        while queue:
            x = queue.pop()
            for i in range(1, self.ell):
                y = self.act(Permutation.transposition(self.ell, i, i + 1), x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def orbits(self):
        left = list(self.points)
        out = []
        while left:
            orb = self.orbit(left[0])
            out.append([p for p in self.points if p in orb])
            left = [p for p in left if p not in orb]
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(self.points[0])) == len(self.points)

    def stabilizer(self, pt):
        return [g for g in self.group() if self.act(g, pt) == pt]

    @classmethod
    def induced(cls, ell, base_point, act, stab_rep, rng: random.Random | None = None):
        """Induce ``stab_rep`` (a function Stab(base) -> integer matrix) up to S_l."""
        rng = rng or random.Random(0)
        group = list(Permutation.all(ell))
        coset_rep = {}
        for g in group:
            pt = act(g, base_point)
            coset_rep.setdefault(pt, g)
        points = sorted(coset_rep, key=repr)
        d = np.asarray(stab_rep(Permutation.identity(ell))).shape[0]
        change = {pt: unimodular(d, rng) for pt in points}
        cache = {}

        def element(g):
            if g.images in cache:
                return cache[g.images]
            total = d * len(points)
            m = np.zeros((total, total), dtype=np.int64)
            for k, pt in enumerate(points):
                tgt = act(g, pt)
                kk = points.index(tgt)
                h = coset_rep[tgt].inverse() * g * coset_rep[pt]
                a_t, _ = change[tgt]
                _, a_inv = change[pt]
                m[kk * d:(kk + 1) * d, k * d:(k + 1) * d] = a_t @ np.asarray(stab_rep(h), dtype=np.int64) @ a_inv
            cache[g.images] = m
            return m

        return cls(ell, points, act, {pt: d for pt in points}, element)

    @classmethod
    def direct_sum(cls, first, second):
        if first.ell != second.ell:
            raise ValueError("modules over different groups")
        points = [(0, p) for p in first.points] + [(1, p) for p in second.points]
        dims = {(0, p): first.summand_dims[p] for p in first.points}
        dims.update({(1, p): second.summand_dims[p] for p in second.points})

        def act(g, pt):
            side, p = pt
            return (side, (first if side == 0 else second).act(g, p))

        def element(g):
            a, b = first.element(g), second.element(g)
            m = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=np.int64)
            m[:a.shape[0], :a.shape[0]] = a
            m[a.shape[0]:, a.shape[0]:] = b
            return m

        return cls(first.ell, points, act, dims, element)


def _invariant_basis(mats, dim):
    if dim == 0:
        return []
    total = np.zeros((dim, dim), dtype=np.int64)
    for m in mats:
        total = total + m
    return qmat.column_basis(total)


def module_invariants(M: PermutedModule):
    return _invariant_basis([M.element(g) for g in M.group()], M.dim)


def summand_invariants(M: PermutedModule, pt):
    blk = M.block(pt)
    return _invariant_basis([M.element(g)[blk, blk] for g in M.stabilizer(pt)], M.summand_dims[pt])


def _coset_reps(M: PermutedModule, pt):
    reps = {}
    for g in M.group():
        reps.setdefault(M.act(g, pt), g)
    return [reps[p] for p in M.points if p in reps]


def danila_inverse_vector(M: PermutedModule, pt, m_i):
    """m_i -> sum over g in G/Stab(i) of g.m_i, as a vector of M."""
    vec = [Fraction(0)] * M.dim
    embedded = np.zeros(M.dim, dtype=object)
    embedded[M.block(pt)] = m_i
    for g in _coset_reps(M, pt):
        img = np.dot(M.element(g).astype(object), embedded)
        vec = [a + b for a, b in zip(vec, img)]
    return vec


def danila_roundtrip(M: PermutedModule, pt):
    """Matrices of M^G -> M_i^Stab(i) (projection) and of its claimed inverse.

    Both are written in the Reynolds-image bases of the two invariant spaces.
    """
    if not M.is_transitive():
        raise NotTransitiveError("the group does not act transitively; decompose into orbits first")
    big = module_invariants(M)
    small = summand_invariants(M, pt)
    blk = M.block(pt)
    projected = [list(col[blk]) for col in big]
    proj = qmat.solve(small, projected) if big else []
    lifted = [danila_inverse_vector(M, pt, np.array(col, dtype=object)) for col in small]
    inv = qmat.solve(big, lifted) if small else []
    # solve returns one coordinate row per target column; transpose to matrices
    proj_mat = [[proj[c][r] for c in range(len(big))] for r in range(len(small))]
    inv_mat = [[inv[c][r] for c in range(len(small))] for r in range(len(big))]
    return proj_mat, inv_mat


def danila_by_orbits(M: PermutedModule) -> list[tuple[object, int]]:
    """Per orbit: (representative, dim M_rep^Stab(rep)); the dims add up to dim M^G."""
    return [(orb[0], len(summand_invariants(M, orb[0]))) for orb in M.orbits()]


def random_equivariant_map(M: PermutedModule, N: PermutedModule, rng: random.Random):
    x = np.array([[rng.randint(-2, 2) for _ in range(M.dim)] for _ in range(N.dim)], dtype=np.int64)
    total = np.zeros((N.dim, M.dim), dtype=np.int64)
    for g in M.group():
        total = total + N.element(g) @ x @ M.element(g.inverse())
    return total


def transported_map(M, N, phi, i, j, m_i):
    """sum over [g] in G/Stab(i) of phi(g(i), j)(g . m_i)."""
    out = np.zeros(N.summand_dims[j], dtype=object)
    phi = phi.astype(object)
    for g in _coset_reps(M, i):
        gi = M.act(g, i)
        g_m = np.dot(M.element(g)[M.block(gi), M.block(i)].astype(object), m_i)
        out = out + np.dot(phi[N.block(j), M.block(gi)], g_m)
    return list(out)


def diag_induction_T(k: int, p: int):
    """The 1x1 matrix of T between the invariant lines, and whether it is non-zero.

    Source: wedge^{2p} of two copies of rho_[k-1] with S_[k-1] acting; target:
    wedge^{2p} of two copies of rho_[k] with S_[k] acting.
    """
    if k < 2 or not 0 <= p <= k - 2:
        raise ValueError(f"need k >= 2 and 0 <= p <= k-2, got k={k}, p={p}")
    small_std = _standard(k - 1)
    big_std = _standard(k)
    small = wedge_power(direct_sum(small_std, small_std), 2 * p)
    big = wedge_power(direct_sum(big_std, big_std), 2 * p)
    # inclusion rho_[k-1] + rho_[k-1] -> rho_[k] + rho_[k]
    incl = np.zeros((2 * (k - 1), 2 * (k - 2)), dtype=np.int64)
    for c in range(k - 2):
        incl[c, c] = 1
        incl[(k - 1) + c, (k - 2) + c] = 1
    t = wedge_matrix(incl, 2 * p)
    v = _normalized_invariant(small)
    w = _normalized_invariant(big)
    tv = np.dot(t.astype(object), np.array(v, dtype=object))
    total = np.zeros(big.dim, dtype=object)
    for ell in range(1, k + 1):
        sigma = Permutation.identity(k) if ell == k else Permutation.from_cycles(k, [tuple(range(ell, k + 1))])
        total = total + np.dot(big.element(sigma).astype(object), tv)
    for gen in big.generators:
        if list(np.dot(gen.astype(object), total)) != list(total):
            raise ArithmeticError("T(v) is not invariant")
    (coeff,), = qmat.solve([w], [list(total)])
    return [[coeff]], coeff != 0


def _normalized_invariant(rep: SnRepresentation):
    basis = qmat.column_basis(rep.reynolds_sum())
    if len(basis) != 1:
        raise ArithmeticError(f"expected a one-dimensional invariant line, got {len(basis)}")
    v = basis[0]
    lead = next(x for x in v if x != 0)
    return [Fraction(x) / lead for x in v]


def _act_point(g, x):
    return g(x)


def _act_pair(g, x):
    return (g(x[0]), g(x[1]))


def _act_subset(g, x):
    return tuple(sorted(g(i) for i in x))


def _act_regular(g, x):
    return (g * Permutation(x)).images


def random_rep(ell: int, rng: random.Random, max_dim: int = 4) -> SnRepresentation:
    pool = [trivial_rep(ell), alternating_rep(ell), natural_rep(ell)]
    if ell >= 2:
        pool.append(standard_rep(ell))
        if ell >= 3:
            pool.append(wedge_power(standard_rep(ell), 2))
    pool = [r for r in pool if r.dim <= max_dim]
    picks = [rng.choice(pool) for _ in range(rng.randint(1, 2))]
    rep = direct_sum(*picks) if len(picks) > 1 else picks[0]
    return rep if rep.dim <= max_dim else picks[0]


def random_permuted_module(rng: random.Random, max_ell: int = 5, max_dim: int = 60) -> PermutedModule:
    """A transitive permuted module M induced from a restricted S_l representation."""
    while True:
        ell = rng.randint(2, max_ell)
        kind = rng.choice(["point", "pair", "subset", "regular"])
        if kind == "point":
            base, act, count = 1, _act_point, ell
        elif kind == "pair":
            base, act, count = (1, 2), _act_pair, ell * (ell - 1)
        elif kind == "subset":
            k = rng.randint(1, ell - 1) if ell > 1 else 1
            base, act, count = tuple(range(1, k + 1)), _act_subset, comb(ell, k)
        else:
            if ell > 3:
                continue
            base, act, count = Permutation.identity(ell).images, _act_regular, factorial(ell)
        rep = random_rep(ell, rng, max_dim=max(1, max_dim // count))
        if rep.dim * count > max_dim:
            continue
        return PermutedModule.induced(ell, base, act, rep.element, rng)
