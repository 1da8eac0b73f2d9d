"""Closed-form combinatorial bounds.

All three bounds are exact integer formulas in the ambient dimension n, the
degree cap d and auxiliary counts. Python integers are unbounded, so there is
no overflow path; invalid arguments raise ValueError.
"""

import math


def critical_point_bound(n: int, d: int, r: int) -> int:
    """Ceiling on how many stationary points all selections of r polynomials
    of degree at most d in n variables can have, counted together.

    The bound is loose by design; callers treat it as a sanity ceiling.
    """
    _check(n=n, d=d, r=r)
    total = (d + 1) * (2 * d + 1) ** (n + r - 1)
    for s in range(1, r):
        block = (r - s) * (d + 1) + 1
        base = 2 * (r - s) * (d + 1) + 1
        total += math.comb(r, s) * block * base ** (n + s)
    return total


def connected_component_bound(n: int, d: int, l: int) -> int:
    """Ceiling on the number of connected components of a real solution set
    cut out by degree-d equations plus l inequations in n variables."""
    _check(n=n, d=d)
    if l < 0:
        raise ValueError("inequation count must be nonnegative")
    if l == 0:
        return d * (2 * d - 1) ** (n - 1)
    return (l * d + 1) * (2 * l * d + 1) ** n


def lojasiewicz_exponent(n: int, d: int, r: int) -> int:
    """Exponent controlling the slope-versus-value inequality near zeros."""
    _check(n=n, d=d, r=r)
    return (d + 1) * (3 * d) ** (n + r - 2)


def _check(**kwargs):
    for name, value in kwargs.items():
        if value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value}")
