"""Dense univariate polynomial arithmetic over exact rationals.

A polynomial is a list of fractions.Fraction coefficients in ascending order
(index k holds the x**k coefficient); the zero polynomial is the empty list.
Every operation here is exact. This module backs the certified root
isolation, the coincidence certificates, and the resultant and discriminant
values, so nothing in it may round.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

QPoly = list  # list[Fraction], ascending coefficients, no trailing zeros


def normalize(q: Iterable) -> QPoly:
    out = [c if isinstance(c, Fraction) else Fraction(c) for c in q]
    while out and out[-1] == 0:
        out.pop()
    return out


def from_floats(coeffs: Sequence[float]) -> QPoly:
    for c in coeffs:
        if not math.isfinite(c):
            raise ValueError("coefficients must be finite to convert exactly")
    return normalize(Fraction(c) for c in coeffs)


def degree(q: QPoly) -> int:
    return len(q) - 1


def is_zero(q: QPoly) -> bool:
    return not q


def lead(q: QPoly) -> Fraction:
    return q[-1]


def add(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return normalize(out)


def neg(a: QPoly) -> QPoly:
    return [-c for c in a]


def sub(a: QPoly, b: QPoly) -> QPoly:
    return add(a, neg(b))


def scale(a: QPoly, c) -> QPoly:
    c = Fraction(c)
    if c == 0:
        return []
    return [x * c for x in a]


def mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return normalize(out)


def derivative(q: QPoly) -> QPoly:
    return normalize(k * c for k, c in enumerate(q) if k >= 1)


def eval_at(q: QPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(q):
        acc = acc * x + c
    return acc


def eval_float(q: QPoly, x: float) -> float:
    acc = 0.0
    for c in reversed(q):
        acc = acc * x + float(c)
    return acc


def monic(q: QPoly) -> QPoly:
    if not q:
        return []
    lc = q[-1]
    return [c / lc for c in q]


def divmod_poly(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = a[-1] / lb
        quo[shift] = coef
        for i, c in enumerate(b):
            a[i + shift] -= coef * c
        while a and a[-1] == 0:
            a.pop()
    return normalize(quo), normalize(a)


def gcd_poly(a: QPoly, b: QPoly) -> QPoly:
    a, b = normalize(a), normalize(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree(q: QPoly) -> QPoly:
    """Square-free part of q, made monic."""
    if degree(q) < 1:
        return monic(q)
    g = gcd_poly(q, derivative(q))
    if degree(g) < 1:
        return monic(q)
    return monic(divmod_poly(q, g)[0])


def yun(q: QPoly) -> list[tuple[QPoly, int]]:
    """Square-free decomposition: returns monic factors with multiplicities.

    The product of factor**multiplicity times the leading coefficient
    recovers q; only factors of positive degree are reported.
    """
    if degree(q) < 1:
        return []
    q = monic(q)
    dq = derivative(q)
    a = gcd_poly(q, dq)
    b = divmod_poly(q, a)[0]
    c = divmod_poly(dq, a)[0]
    d = sub(c, derivative(b))
    out = []
    i = 1
    while degree(b) >= 1:
        g = gcd_poly(b, d)
        if degree(g) >= 1:
            out.append((g, i))
        b = divmod_poly(b, g)[0] if g else b
        c = divmod_poly(d, g)[0] if g else d
        d = sub(c, derivative(b))
        i += 1
    return out


def sturm_chain(q: QPoly) -> list[QPoly]:
    """Sign-counting chain for a square-free polynomial."""
    chain = [normalize(q)]
    dq = derivative(q)
    if dq:
        chain.append(dq)
    while chain[-1] and degree(chain[-1]) > 0:
        rem = divmod_poly(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(neg(rem))
    return chain


def sign(x: Fraction) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def variations(values: Iterable[Fraction]) -> int:
    signs = [sign(v) for v in values]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(chain: Sequence[QPoly], x: Fraction) -> int:
    return variations(eval_at(q, x) for q in chain)


def count_roots_between(chain: Sequence[QPoly], a: Fraction, b: Fraction) -> int:
    """Number of real roots of the chain's polynomial in the open interval
    (a, b). The polynomial must be square-free and nonzero at both ends."""
    if a >= b:
        return 0
    return variations_at(chain, a) - variations_at(chain, b)


def cauchy_bound(q: QPoly) -> Fraction:
    """Strict bound: every real root lies in (-M, M)."""
    if degree(q) < 1:
        return Fraction(1)
    lc = abs(q[-1])
    m = max((abs(c) / lc for c in q[:-1]), default=Fraction(0))
    return Fraction(1) + m


def sylvester_resultant(a: QPoly, b: QPoly) -> Fraction:
    """Resultant of two univariate polynomials via the Sylvester matrix."""
    a, b = normalize(a), normalize(b)
    if not a or not b:
        return Fraction(0)
    m, k = degree(a), degree(b)
    if m == 0 and k == 0:
        return Fraction(1)
    if m == 0:
        return a[0] ** k
    if k == 0:
        return b[0] ** m
    size = m + k
    da = list(reversed(a))
    db = list(reversed(b))
    rows = []
    for i in range(k):
        rows.append([Fraction(0)] * i + da + [Fraction(0)] * (k - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + db + [Fraction(0)] * (m - 1 - i))
    assert all(len(r) == size for r in rows)
    return _det(rows)


def discriminant(q: QPoly) -> Fraction:
    """Discriminant with the classical sign convention."""
    q = normalize(q)
    m = degree(q)
    if m < 1:
        raise ValueError("discriminant needs degree at least 1")
    res = sylvester_resultant(q, derivative(q))
    s = -1 if (m * (m - 1) // 2) % 2 else 1
    return s * res / lead(q)


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    rows = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if rows[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pval = rows[col][col]
        det *= pval
        for i in range(col + 1, n):
            factor = rows[i][col] / pval
            if factor == 0:
                continue
            for j in range(col, n):
                rows[i][j] -= factor * rows[col][j]
    return det
