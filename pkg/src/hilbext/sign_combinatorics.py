"""Permutations, subsets of [n], and the sign calculus of the tautological complex.

Permutations are stored in one-line form with 1-based images.  Products follow
the "apply the right factor first" convention: ``(s * t)(i) == s(t(i))``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb, factorial

from hilbext import kernels


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"{imgs} is not a permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> Permutation:
        """``from_cycles(3, [(1, 3, 2)])`` sends 1 -> 3 -> 2 -> 1."""
        imgs = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        return cls.from_cycles(n, [(i, j)])

    @classmethod
    def all(cls, n: int):
        for p in itertools.permutations(range(1, n + 1)):
            yield cls(p)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> Permutation:
        imgs = list(range(1, n + 1))
        rng.shuffle(imgs)
        return cls(tuple(imgs))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.n != other.n:
            raise ValueError("permutations of different degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def sign(self) -> int:
        return kernels.perm_sign([x - 1 for x in self.images])

    def zero_based(self) -> list[int]:
        return [x - 1 for x in self.images]

    def image_of(self, members) -> tuple[int, ...]:
        return tuple(sorted(self(i) for i in members))

    def reduced_word(self) -> list[int]:
        """Indices i with ``self == s_{i1} * s_{i2} * ...`` where s_i = (i, i+1)."""
        imgs = list(self.images)
        right = []
        while True:
            for i in range(len(imgs) - 1):
                if imgs[i] > imgs[i + 1]:
                    imgs[i], imgs[i + 1] = imgs[i + 1], imgs[i]
                    right.append(i + 1)
                    break
            else:
                break
        return right[::-1]

    def cycle_type(self) -> tuple[int, ...]:
        seen = set()
        lengths = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            k, length = start, 0
            while k not in seen:
                seen.add(k)
                k = self(k)
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths, reverse=True))

    def __str__(self):
        return "[" + " ".join(map(str, self.images)) + "]"


@dataclass(frozen=True)
class SubsetOfN:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted(set(int(x) for x in self.members)))
        if len(mem) != len(tuple(self.members)):
            raise ValueError(f"repeated members in {self.members}")
        if mem and (mem[0] < 1 or mem[-1] > self.n):
            raise ValueError(f"{mem} is not a subset of [1..{self.n}]")
        object.__setattr__(self, "members", mem)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return x in self.members

    def complement(self) -> SubsetOfN:
        return SubsetOfN(self.n, tuple(i for i in range(1, self.n + 1) if i not in self.members))

    def mask(self) -> int:
        m = 0
        for i in self.members:
            m |= 1 << (i - 1)
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> SubsetOfN:
        return cls(n, tuple(i + 1 for i in range(n) if (mask >> i) & 1))

    @classmethod
    def all_of_size(cls, n: int, k: int):
        for c in itertools.combinations(range(1, n + 1), k):
            yield cls(n, c)


def _as_subset(M, n: int) -> SubsetOfN:
    if isinstance(M, SubsetOfN):
        if M.n != n:
            raise ValueError(f"subset lives in [1..{M.n}], permutation acts on [1..{n}]")
        return M
    return SubsetOfN(n, tuple(M))


def eps_sigma_M(sigma: Permutation, M) -> int:
    """(-1) to the number of inversions of ``sigma`` restricted to ``M``."""
    M = _as_subset(M, sigma.n)
    return kernels.eps_sigma_mask(sigma.zero_based(), M.mask())


def eps_m_M(m: int, M) -> int:
    """(-1) to the number of members of ``M`` strictly below ``m``."""
    members = tuple(M)
    if m not in members:
        raise ValueError(f"{m} is not a member of {members}")
    return -1 if sum(1 for j in members if j < m) % 2 else 1


def increasing_map(source, target) -> dict[int, int]:
    """The unique strictly increasing bijection between two equal-size sets."""
    source, target = sorted(source), sorted(target)
    if len(source) != len(target):
        raise ValueError("sets of different cardinality")
    return dict(zip(source, target))


def coset_reps(n: int, I) -> list[Permutation]:
    """One permutation with sigma(I) = J per J of size |I|, built from increasing maps."""
    I = _as_subset(I, n)
    if len(I) == 0:
        raise ValueError("I must be non-empty")
    Ibar = I.complement()
    reps = []
    for J in SubsetOfN.all_of_size(n, len(I)):
        imgs = {}
        imgs.update(increasing_map(I.members, J.members))
        imgs.update(increasing_map(Ibar.members, J.complement().members))
        reps.append(Permutation(tuple(imgs[i] for i in range(1, n + 1))))
    return reps


def orbit_reps(k: int, p: int, n: int) -> list[SubsetOfN]:
    """Representatives [i] + [k+1, k+p-i] for i = 0..min(k, p)."""
    if not (0 <= k <= n and 0 <= p <= n):
        raise ValueError(f"need 0 <= k, p <= n, got k={k}, p={p}, n={n}")
    top = min(k, p)
    bad = [i for i in range(top + 1) if k + p - i > n]
    if bad:
        raise ValueError(f"k+p-i exceeds n={n} for i in {bad}")
    return [SubsetOfN(n, tuple(range(1, i + 1)) + tuple(range(k + 1, k + p - i + 1)))
            for i in range(top + 1)]


def young_subgroup(n: int, k: int):
    """Elements of S_[k] x S_[k+1..n]."""
    for left in itertools.permutations(range(1, k + 1)):
        for right in itertools.permutations(range(k + 1, n + 1)):
            yield Permutation(left + right)


def orbit_size_by_stabilizer(n: int, k: int, subset: SubsetOfN) -> int:
    """|G| / |Stab_G(subset)| for G = S_[k] x S_[k+1..n], by brute force."""
    members = set(subset.members)
    order = 0
    stab = 0
    for g in young_subgroup(n, k):
        order += 1
        if set(g(i) for i in members) == members:
            stab += 1
    return order // stab


def young_orbit_size(n: int, k: int, i: int, p: int) -> int:
    return comb(k, i) * comb(n - k, p - i)


def count_left_cosets(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k))
