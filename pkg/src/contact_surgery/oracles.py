"""Slow, independent reference computations.

These deliberately share no code with :mod:`contact_surgery.linalg`: minors
come from permutation expansion, invariant factors from determinantal
divisors, signature from Descartes' rule on the characteristic polynomial.
Only usable on small matrices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd


def _perm_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(a) -> int:
    n = len(a)
    total = 0
    for p in permutations(range(n)):
        term = _perm_sign(p)
        for i in range(n):
            term *= a[i][p[i]]
            if not term:
                break
        total += term
    return total


def invariant_factors(a) -> list[int]:
    """Invariant factors ``d_k / d_{k-1}`` from gcds ``d_k`` of k x k minors."""
    m = len(a)
    n = len(a[0]) if m else 0
    prev = 1
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, leibniz_det([[a[r][c] for c in cols] for r in rows]))
        if g == 0:
            out.extend([0] * (min(m, n) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def cokernel_type(a, n_rows: int | None = None) -> tuple[tuple[int, ...], int]:
    """``(torsion, free_rank)`` of ``Z^rows / im(a)``."""
    rows = len(a) if n_rows is None else n_rows
    facs = invariant_factors(a) if a and a[0] else []
    facs += [0] * (rows - len(facs))
    return tuple(f for f in facs if f >= 2), sum(1 for f in facs if f == 0)


# --- characteristic polynomial by permutation expansion ---


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def charpoly(a) -> list[int]:
    """Coefficients (constant first) of ``det(x I - a)``."""
    n = len(a)
    total = [0] * (n + 1)
    for p in permutations(range(n)):
        term = [_perm_sign(p)]
        for i in range(n):
            entry = [-a[i][p[i]], 1] if p[i] == i else [-a[i][p[i]]]
            term = _pmul(term, entry)
        for k, c in enumerate(term):
            total[k] += c
    return total


def _sign_changes(coeffs) -> int:
    nz = [c for c in coeffs if c]
    return sum(1 for x, y in zip(nz, nz[1:]) if (x > 0) != (y > 0))


def descartes_signature(a) -> int:
    """Exact for symmetric matrices, whose characteristic polynomial is real-rooted."""
    p = charpoly(a)
    zeros = next((k for k, c in enumerate(p) if c), len(p) - 1)
    p = p[zeros:]
    pos = _sign_changes(p)
    neg = _sign_changes([c * (-1) ** k for k, c in enumerate(p)])
    return pos - neg


# --- mod 2 and spin structures ---


def characteristic_subsets(q) -> list[tuple[int, ...]]:
    n = len(q)
    out = []
    for mask in range(1 << n):
        if all(
            (sum(q[i][j] for j in range(n) if mask >> j & 1) - q[i][i]) % 2 == 0 for i in range(n)
        ):
            out.append(tuple(j for j in range(n) if mask >> j & 1))
    return out


def cramer_solve(a, b) -> list[Fraction]:
    det = leibniz_det(a)
    out = []
    for k in range(len(a)):
        ak = [[b[i] if j == k else a[i][j] for j in range(len(a))] for i in range(len(a))]
        out.append(Fraction(leibniz_det(ak), det))
    return out


def d3_reference(q, rot, n_plus: int) -> Fraction:
    """The d3 formula evaluated with Cramer's rule and the Descartes signature."""
    x = cramer_solve(q, rot)
    c2 = sum((xi * r for xi, r in zip(x, rot)), Fraction(0))
    n = len(q)
    return (c2 - 3 * descartes_signature(q) - 2 * (1 + n)) / 4 + n_plus + Fraction(1, 2)
