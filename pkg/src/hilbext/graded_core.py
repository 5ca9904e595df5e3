"""Finite-dimensional Z-graded vector spaces over Q with labeled bases.

Everything carries a Koszul sign: swapping homogeneous vectors of degrees p and q
costs (-1)^(p*q).  Symmetric powers are taken in that graded sense, so odd basis
vectors behave like exterior variables.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from math import factorial

from hilbext import kernels
from hilbext.sign_combinatorics import Permutation


class GradedSpace:
    """A graded space given by an ordered basis of ``(label, degree)`` pairs."""

    def __init__(self, basis=()):
        basis = tuple((label, int(deg)) for label, deg in basis)
        self.basis = basis
        self._index = {}
        self._degree = {}
        for k, (label, deg) in enumerate(basis):
            if label in self._index:
                raise ValueError(f"duplicate basis label {label!r}")
            self._index[label] = k
            self._degree[label] = deg

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"{type(self).__name__}(dims={self.dims})"

    @property
    def labels(self):
        return [label for label, _ in self.basis]

    def degree(self, label) -> int:
        return self._degree[label]

    def index(self, label) -> int:
        return self._index[label]

    @property
    def dims(self) -> dict[int, int]:
        out = defaultdict(int)
        for _, deg in self.basis:
            out[deg] += 1
        return dict(sorted(out.items()))

    def dim(self, degree=None) -> int:
        if degree is None:
            return len(self.basis)
        return self.dims.get(degree, 0)

    def labels_in_degree(self, degree):
        return [label for label, deg in self.basis if deg == degree]

    def poincare(self) -> list[tuple[int, int]]:
        return sorted(self.dims.items())

    def poincare_text(self) -> str:
        return poly_text(self.dims)

    def element(self, terms=None) -> GradedElement:
        return GradedElement(self, terms or {})

    def basis_element(self, label) -> GradedElement:
        return GradedElement(self, {label: 1})


class TensorSpace(GradedSpace):
    """Ordered tensor product; basis tuples run in lexicographic factor order."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        basis = []
        for combo in itertools.product(*[f.basis for f in self.factors]):
            basis.append((tuple(lab for lab, _ in combo), sum(d for _, d in combo)))
        super().__init__(basis)


class SymPowerSpace(GradedSpace):
    """Graded symmetric power S^n V.

    A basis label is a tuple of base labels in base order: even-degree labels
    may repeat, odd-degree labels may not.
    """

    def __init__(self, base: GradedSpace, n: int):
        if n < 0:
            raise ValueError("symmetric power of negative order")
        self.base = base
        self.n = n
        basis = []
        for idx in itertools.combinations_with_replacement(range(len(base)), n):
            if any(idx[k] == idx[k + 1] and base.basis[idx[k]][1] % 2 for k in range(n - 1)):
                continue
            labels = tuple(base.basis[k][0] for k in idx)
            basis.append((labels, sum(base.basis[k][1] for k in idx)))
        super().__init__(basis)

    def canonical(self, labels):
        """Sort a sequence of base labels; returns ``(sign, multiset)`` with sign 0 if it vanishes."""
        return koszul_sort(self.base, labels)


class GradedElement:
    """A vector: exact rational coefficients on basis labels; zeros are dropped."""

    __slots__ = ("space", "terms")

    def __init__(self, space: GradedSpace, terms):
        clean = {}
        for label, c in dict(terms).items():
            if label not in space:
                raise KeyError(f"{label!r} is not a basis label of the space")
            c = Fraction(c)
            if c != 0:
                clean[label] = c
        self.space = space
        self.terms = clean

    def __eq__(self, other):
        if isinstance(other, GradedElement):
            return self.space == other.space and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        if other.space != self.space:
            raise ValueError("adding elements of different spaces")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return GradedElement(self.space, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        return GradedElement(self.space, {k: scalar * c for k, c in self.terms.items()})

    def __neg__(self):
        return (-1) * self

    def __repr__(self):
        return f"GradedElement({self.terms})"

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.space.degree(k) for k in self.terms}


def koszul_sign(sigma, degrees) -> int:
    """Sign of sigma acting on homogeneous factors of the given degrees.

    The factor in slot i moves to slot sigma(i); each pair of odd factors whose
    order gets reversed contributes a -1.
    """
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    if len(degrees) != sigma.n:
        raise ValueError(f"permutation of {sigma.n} slots but {len(degrees)} degrees")
    return kernels.koszul_sign(sigma.zero_based(), [int(d) for d in degrees])


def act_on_tensor(sigma: Permutation, labels, degrees):
    """``sigma(u_1 x ... x u_k) = sign * (u_{sigma^-1(1)} x ... )``; returns (sign, labels)."""
    inv = sigma.inverse()
    new = tuple(labels[inv(k) - 1] for k in range(1, sigma.n + 1))
    return koszul_sign(sigma, degrees), new


def koszul_sort(space: GradedSpace, labels):
    """Sort labels into base order; sign of the reordering, or 0 for a repeated odd label."""
    labels = tuple(labels)
    keys = [space.index(lab) for lab in labels]
    degs = [space.degree(lab) for lab in labels]
    order = sorted(range(len(labels)), key=lambda k: keys[k])
    for a, b in zip(order, order[1:]):
        if keys[a] == keys[b] and degs[a] % 2:
            return 0, None
    # slot order[k] moves to position k
    images = [0] * len(labels)
    for pos, slot in enumerate(order):
        images[slot] = pos
    return kernels.koszul_sign(images, degs), tuple(labels[k] for k in order)


def tensor(*spaces: GradedSpace) -> TensorSpace:
    return TensorSpace(spaces)


def shift(V: GradedSpace, k: int) -> GradedSpace:
    """V[k]: every degree drops by k."""
    return GradedSpace((label, deg - k) for label, deg in V.basis)


def dual(V: GradedSpace) -> GradedSpace:
    return GradedSpace((label, -deg) for label, deg in V.basis)


def direct_sum(*spaces: GradedSpace) -> GradedSpace:
    return GradedSpace(((k, label), deg) for k, V in enumerate(spaces) for label, deg in V.basis)


def sym_power(V: GradedSpace, n: int) -> SymPowerSpace:
    return SymPowerSpace(V, n)


def symmetrize(t: GradedElement, sym: SymPowerSpace | None = None) -> GradedElement:
    """Image of a tensor in S^n V under the quotient map u_1 x...x u_n -> u_1...u_n.

    Restricted to invariant tensors this inverts :func:`expand`.
    """
    space = t.space
    if not isinstance(space, TensorSpace):
        raise TypeError("symmetrize expects an element of a TensorSpace")
    base = space.factors[0] if space.factors else GradedSpace()
    if any(f != base for f in space.factors):
        raise ValueError("symmetrize needs identical tensor factors")
    sym = sym or SymPowerSpace(base, len(space.factors))
    out = defaultdict(Fraction)
    for labels, c in t.terms.items():
        sign, key = koszul_sort(base, labels)
        if sign:
            out[key] += sign * c
    return GradedElement(sym, out)


def expand(s: GradedElement, tspace: TensorSpace | None = None) -> GradedElement:
    """S^n V -> (V^{x n})^{S_n}: u_1...u_n -> (1/n!) sum_sigma sigma(u_1 x...x u_n)."""
    sym = s.space
    if not isinstance(sym, SymPowerSpace):
        raise TypeError("expand expects an element of a SymPowerSpace")
    n = sym.n
    tspace = tspace or TensorSpace([sym.base] * n)
    out = defaultdict(Fraction)
    for labels, c in s.terms.items():
        degs = [sym.base.degree(lab) for lab in labels]
        for sigma in Permutation.all(n):
            sign, new = act_on_tensor(sigma, labels, degs)
            out[new] += Fraction(sign, factorial(n)) * c
    return GradedElement(tspace, out)


# -- Poincare polynomials as {degree: coefficient} dicts ---------------------

def poly_add(*polys) -> dict[int, int]:
    out = defaultdict(int)
    for p in polys:
        for d, c in p.items():
            out[d] += c
    return {d: c for d, c in sorted(out.items()) if c}


def poly_mul(*polys) -> dict[int, int]:
    out = {0: 1}
    for p in polys:
        nxt = defaultdict(int)
        for d1, c1 in out.items():
            for d2, c2 in p.items():
                nxt[d1 + d2] += c1 * c2
        out = nxt
    return {d: c for d, c in sorted(out.items()) if c}


def sym_power_poly(dims: dict[int, int], n: int) -> dict[int, int]:
    """Coefficient of u^n in prod_even (1 - u t^d)^-dim * prod_odd (1 + u t^d)^dim."""
    # series[k] = Poincare polynomial of S^k so far
    series = [{0: 1}] + [{} for _ in range(n)]
    for d, mult in dims.items():
        for _ in range(mult):
            if d % 2 == 0:
                factor = [{j * d: 1} for j in range(n + 1)]
            else:
                factor = [{0: 1}, {d: 1}] + [{} for _ in range(n - 1)]
            new = [{} for _ in range(n + 1)]
            for a in range(n + 1):
                for b in range(n + 1 - a):
                    if series[a] and factor[b]:
                        new[a + b] = poly_add(new[a + b], poly_mul(series[a], factor[b]))
            series = new
    return {d: c for d, c in series[n].items() if c}


def poly_text(p: dict[int, int]) -> str:
    """"1 + 2*t^2 + t^4" style text, ascending degree."""
    parts = []
    for d, c in sorted(p.items()):
        if c == 0:
            continue
        if d == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(f"t^{d}")
        else:
            parts.append(f"{c}*t^{d}")
    return " + ".join(parts) if parts else "0"


def space_from_dims(dims: dict[int, int], prefix: str = "v") -> GradedSpace:
    """A space with basis labels prefix0, prefix1, ... in ascending degree."""
    basis = []
    k = 0
    for d in sorted(dims):
        for _ in range(dims[d]):
            basis.append((f"{prefix}{k}", d))
            k += 1
    return GradedSpace(basis)
