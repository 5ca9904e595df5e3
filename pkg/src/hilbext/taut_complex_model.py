"""Sign-level model of the S_n-equivariant complex built from subsets of [n].

Each subset I carries one formal symbol, so the degree-p term has one basis
vector per subset of size p + 1. The differential and the linearization are
signed matrices between these terms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

import numpy as np

from hilbext import kernels
from hilbext.sign_combinatorics import Permutation, SubsetOfN, eps_m_M, eps_sigma_M


@dataclass(frozen=True)
class SignMatrix:
    rows: tuple
    cols: tuple
    entries: np.ndarray = field(repr=False)

    def __matmul__(self, other: SignMatrix) -> SignMatrix:
        if self.cols != other.rows:
            raise ValueError("index sets do not match")
        return SignMatrix(self.rows, other.cols, self.entries @ other.entries)

    def is_zero(self) -> bool:
        return not self.entries.any()

    def entry(self, row: SubsetOfN, col: SubsetOfN) -> int:
        return int(self.entries[self.rows.index(row), self.cols.index(col)])

    def __eq__(self, other):
        return (isinstance(other, SignMatrix) and self.rows == other.rows
                and self.cols == other.cols and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols))


def term_basis(n: int, p: int) -> tuple:
    if not 0 <= p <= n - 1:
        raise ValueError(f"degree {p} out of range 0..{n - 1}")
    return tuple(SubsetOfN.all_of_size(n, p + 1))


def term_count(n: int, p: int) -> int:
    return comb(n, p + 1)


def euler_characteristic(n: int) -> int:
    return sum((-1) ** p * term_count(n, p) for p in range(n))


def differential(n: int, p: int) -> SignMatrix:
    """d^p : C^p -> C^{p+1}, with entry (J, I) = eps_{i,J} when J = I + {i}."""
    if n < 2 or not 0 <= p <= n - 2:
        raise ValueError(f"differential needs 0 <= p <= n-2, got n={n}, p={p}")
    src, tgt = term_basis(n, p), term_basis(n, p + 1)
    row_of = {J: r for r, J in enumerate(tgt)}
    m = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for c, I in enumerate(src):
        for i in I.complement():
            J = SubsetOfN(n, tuple(I) + (i,))
            m[row_of[J], c] = eps_m_M(i, J)
    return SignMatrix(tgt, src, m)


def linearization(sigma: Permutation, p: int) -> SignMatrix:
    """lambda_sigma on C^p: the symbol of I goes to eps_{sigma,I} times that of sigma(I)."""
    n = sigma.n
    basis = term_basis(n, p)
    row_of = {I: r for r, I in enumerate(basis)}
    m = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for c, I in enumerate(basis):
        m[row_of[SubsetOfN(n, sigma.image_of(I))], c] = eps_sigma_M(sigma, I)
    return SignMatrix(basis, basis, m)


@dataclass
class Report:
    n: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _members(n, mask):
    return SubsetOfN.from_mask(n, mask)


def check_d_squared(n: int, matrices: bool = True) -> Report:
    """The identity eps_{i,J} eps_{j,J-i} + eps_{j,J} eps_{i,J-j} = 0, plus d d = 0 as matrices."""
    if n < 2:
        raise ValueError("need n >= 2")
    rep = Report(n)
    for J, i, j in kernels.d_squared_violations(n):
        rep.violations.append((_members(n, J), i + 1, j + 1))
    rep.checked = sum(comb(n, k) * comb(k, 2) for k in range(n + 1))
    if matrices:
        for p in range(n - 2):
            if not (differential(n, p + 1) @ differential(n, p)).is_zero():
                rep.violations.append(("d^2 != 0", p))
    return rep


def check_equivariance(n: int, sigmas, matrices: bool = False) -> Report:
    """eps_{i,J} eps_{sigma,I} = eps_{sigma,J} eps_{sigma(i),sigma(J)} for all I, i not in I."""
    rep = Report(n)
    per_sigma = sum(comb(n, k) * (n - k) for k in range(1, n))
    for sigma in sigmas:
        if sigma.n != n:
            raise ValueError(f"{sigma} is not in S_{n}")
        for I, i in kernels.equivariance_violations(sigma.zero_based(), n):
            rep.violations.append((_members(n, I), i + 1, sigma))
        rep.checked += per_sigma
        if matrices:
            for p in range(n - 1):
                d = differential(n, p)
                if linearization(sigma, p + 1) @ d != d @ linearization(sigma, p):
                    rep.violations.append(("lambda d != d lambda", p, sigma))
    return rep


def check_linearization_cocycle(n: int, pairs) -> Report:
    """lambda_{sigma tau} = lambda_sigma lambda_tau on every term."""
    rep = Report(n)
    for sigma, tau in pairs:
        for p in range(n):
            if linearization(sigma * tau, p) != linearization(sigma, p) @ linearization(tau, p):
                rep.violations.append((p, sigma, tau))
            rep.checked += 1
    return rep


def check_all(n: int, samples: int | None = None, seed: int = 0) -> Report:
    """d^2 = 0 and equivariance; exhaustive over S_n unless ``samples`` is given."""
    if samples is None:
        sigmas = Permutation.all(n)
    else:
        rng = random.Random(seed)
        sigmas = (Permutation.random(n, rng) for _ in range(samples))
    rep = check_d_squared(n)
    eq = check_equivariance(n, sigmas)
    rep.checked += eq.checked
    rep.violations.extend(eq.violations)
    return rep
