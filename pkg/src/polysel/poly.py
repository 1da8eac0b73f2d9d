"""Sparse multivariate polynomials with float coefficients.

A polynomial stores a canonical tuple of (exponent, coefficient) terms:
exponents are tuples of nonnegative ints, one per variable, zero
coefficients are dropped, and terms are ordered by total degree first and
then lexicographically with the first variable heaviest. The fixed order
makes evaluation deterministic and keeps coefficient vectors portable
across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError

Exponent = tuple[int, ...]


def monomial_count(n: int, d: int) -> int:
    """Number of monomials in n variables of total degree at most d."""
    if n < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    return math.comb(n + d, n)


def _exponents_of_degree(n: int, deg: int) -> list[Exponent]:
    if n == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in _exponents_of_degree(n - 1, deg - first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[Exponent, ...]:
    """Canonical ordering of all exponents with |e| <= d.

    Degree blocks come first (constants, then linear, quadratic, ...);
    inside each block exponents are sorted with x1 heaviest, so for n = 2
    the order starts 1, x1, x2, x1^2, x1*x2, x2^2.
    """
    monomial_count(n, d)  # validates arguments
    out: list[Exponent] = []
    for deg in range(d + 1):
        out.extend(_exponents_of_degree(n, deg))
    return tuple(out)


def _term_key(exps: Exponent):
    return (sum(exps), tuple(-e for e in exps))


@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial in n variables."""

    n: int
    terms: tuple[tuple[Exponent, float], ...]

    @classmethod
    def from_dict(cls, n: int, mapping: Mapping[Exponent, float]) -> "Polynomial":
        if n < 1:
            raise ValueError("need at least one variable")
        cleaned = {}
        for exps, coef in mapping.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise DimensionMismatchError(
                    f"exponent {exps} does not have {n} entries"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coef = float(coef)
            if not math.isfinite(coef):
                raise ValueError("coefficients must be finite")
            if coef == 0.0:
                continue
            cleaned[exps] = cleaned.get(exps, 0.0) + coef
        items = sorted(
            ((e, c) for e, c in cleaned.items() if c != 0.0),
            key=lambda item: _term_key(item[0]),
        )
        return cls(n=n, terms=tuple(items))

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls.from_dict(n, {})

    @classmethod
    def constant(cls, n: int, value: float) -> "Polynomial":
        return cls.from_dict(n, {(0,) * n: value})

    @classmethod
    def variable(cls, n: int, index: int) -> "Polynomial":
        if not 0 <= index < n:
            raise ValueError(f"variable index {index} out of range for n={n}")
        exps = [0] * n
        exps[index] = 1
        return cls.from_dict(n, {tuple(exps): 1.0})

    @cached_property
    def _dict(self) -> dict[Exponent, float]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree; the zero polynomial reports -inf."""
        if not self.terms:
            return float("-inf")
        return max(sum(e) for e, _ in self.terms)

    def eval(self, x: Sequence[float]) -> float:
        if len(x) != self.n:
            raise DimensionMismatchError(
                f"point has {len(x)} coordinates, polynomial has {self.n}"
            )
        xs = [float(v) for v in x]
        acc = 0.0
        for exps, coef in self.terms:
            term = coef
            for xv, e in zip(xs, exps):
                if e:
                    term *= xv**e
            acc += term
        return acc

    def partial(self, axis: int) -> "Polynomial":
        return _partial(self, axis)

    def gradient(self, x: Sequence[float]) -> np.ndarray:
        return np.array([self.partial(i).eval(x) for i in range(self.n)])

    def hessian(self, x: Sequence[float]) -> np.ndarray:
        h = np.zeros((self.n, self.n))
        for i in range(self.n):
            pi = self.partial(i)
            for j in range(i, self.n):
                h[i, j] = pi.partial(j).eval(x)
                h[j, i] = h[i, j]
        return h

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_same(other)
        merged = dict(self.terms)
        for e, c in other.terms:
            merged[e] = merged.get(e, 0.0) + c
        return Polynomial.from_dict(self.n, merged)

    def __neg__(self) -> "Polynomial":
        return Polynomial.from_dict(self.n, {e: -c for e, c in self.terms})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial.from_dict(
                self.n, {e: c * float(other) for e, c in self.terms}
            )
        self._check_same(other)
        out: dict[Exponent, float] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0.0) + c1 * c2
        return Polynomial.from_dict(self.n, out)

    __rmul__ = __mul__

    def coeff_vector(self, d: int) -> list[float]:
        """Coefficients in the canonical basis order, zeros included."""
        if self.degree() > d:
            raise ValueError("polynomial degree exceeds the requested bound")
        return [self._dict.get(e, 0.0) for e in monomial_basis(self.n, d)]

    def univariate_coeffs(self) -> list[float]:
        """Dense ascending coefficients; only valid when n == 1."""
        if self.n != 1:
            raise DimensionMismatchError("univariate view needs n == 1")
        if not self.terms:
            return []
        out = [0.0] * (int(self.degree()) + 1)
        for (e,), c in self.terms:
            out[e] = c
        return out

    def _check_same(self, other: "Polynomial"):
        if self.n != other.n:
            raise DimensionMismatchError("mixed ambient dimensions")


@lru_cache(maxsize=4096)
def _partial(p: Polynomial, axis: int) -> Polynomial:
    if not 0 <= axis < p.n:
        raise DimensionMismatchError(f"axis {axis} out of range for n={p.n}")
    out: dict[Exponent, float] = {}
    for exps, coef in p.terms:
        e = exps[axis]
        if e == 0:
            continue
        new = list(exps)
        new[axis] = e - 1
        out[tuple(new)] = coef * e
    return Polynomial.from_dict(p.n, out)


def from_coeff_vector(u: Sequence[float], n: int, d: int) -> Polynomial:
    """Inverse of Polynomial.coeff_vector for the same basis order."""
    basis = monomial_basis(n, d)
    if len(u) != len(basis):
        raise ValueError(
            f"expected {len(basis)} coefficients for n={n}, d={d}, got {len(u)}"
        )
    return Polynomial.from_dict(n, dict(zip(basis, (float(c) for c in u))))


@dataclass(frozen=True)
class Instance:
    """A finite family of candidate polynomials with a shared degree cap."""

    n: int
    d: int
    polys: tuple[Polynomial, ...]

    def __post_init__(self):
        if self.n < 1 or self.d < 0:
            raise ValueError("need n >= 1 and d >= 0")
        if len(self.polys) < 1:
            raise ValueError("need at least one polynomial")
        for p in self.polys:
            if p.n != self.n:
                raise DimensionMismatchError("polynomial dimension mismatch")
            if p.degree() > self.d:
                raise ValueError("polynomial degree exceeds the instance cap")

    @property
    def r(self) -> int:
        return len(self.polys)

    def poly(self, index: int) -> Polynomial:
        """1-based accessor matching report and active-set indexing."""
        return self.polys[index - 1]

    def coeff_matrix(self) -> list[list[float]]:
        return [p.coeff_vector(self.d) for p in self.polys]


def make_instance(n: int, d: int, polys: Iterable[Polynomial]) -> Instance:
    return Instance(n=n, d=d, polys=tuple(polys))
