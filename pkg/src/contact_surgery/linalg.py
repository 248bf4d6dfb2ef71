"""Exact integer and rational linear algebra.

Everything here works on plain nested lists of Python ints (or Fractions),
so there is no overflow and no rounding. Matrices are small (explorer
diagrams rarely exceed ten components), so clarity wins over speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def is_symmetric(a: Sequence[Sequence[int]]) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form ``U @ A @ V = D`` of an integer ``m x n`` matrix.

    Returns ``(diag, U, V)`` where ``diag`` has length ``min(m, n)``, the
    nonzero entries are positive and each divides the next, and zeros come
    last. ``U`` and ``V`` are unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, k: int) -> None:
        # row_dst += k * row_src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, k: int) -> None:
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = d[i][t] // p
                if q:
                    add_row(i, t, -q)
                if d[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = d[t][j] // p
                if q:
                    add_col(j, t, -q)
                if d[t][j]:
                    dirty = True
            if dirty:
                continue
            # pivot must divide the whole trailing block
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    diag = [d[i][i] for i in range(min(m, n))]
    return diag, u, v


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve ``A x = b`` for square nonsingular ``A`` over the rationals."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        for r in range(n):
            if r != k and m[r][k] != 0:
                f = m[r][k] / m[k][k]
                m[r] = [x - f * y for x, y in zip(m[r], m[k])]
    return [m[i][n] / m[i][i] for i in range(n)]


def inertia(a: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` eigenvalue counts of a symmetric matrix.

    Symmetric Gaussian elimination by congruence over the rationals. When
    no nonzero diagonal entry remains but an off-diagonal one does, the
    congruence ``e_i -> e_i + e_j`` creates a nonzero pivot ``2 a_ij``.
    """
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and m[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for r in active:
            f = m[r][piv] / p
            if f:
                for k in active:
                    m[r][k] -= f * m[piv][k]
        for r in active:
            m[r][piv] = m[piv][r] = Fraction(0)
    return pos, neg, n - pos - neg


def signature(a: Sequence[Sequence[int]]) -> int:
    pos, neg, _ = inertia(a)
    return pos - neg


# --- arithmetic mod 2, rows packed into int bitmasks (bit j = column j) ---


def _pack(row: Sequence[int]) -> int:
    return sum(1 << j for j, x in enumerate(row) if x % 2)


def solve_mod2(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[int | None, list[int]]:
    """Solve ``A x = b`` over GF(2).

    Returns ``(particular, kernel_basis)`` with solutions packed as
    bitmasks over the columns; ``particular`` is ``None`` when the system
    is inconsistent. The kernel basis is in reduced echelon form, so the
    enumeration order of solutions built from it is deterministic.
    """
    n = len(a[0]) if a else 0
    rows = [(_pack(row), y % 2) for row, y in zip(a, b)]
    pivots: list[tuple[int, int, int]] = []  # (column, row mask, rhs)
    for col in range(n):
        bit = 1 << col
        idx = next((i for i, (r, _) in enumerate(rows) if r & bit), None)
        if idx is None:
            continue
        pr, py = rows.pop(idx)
        rows = [((r ^ pr, y ^ py) if r & bit else (r, y)) for r, y in rows]
        pivots = [((c, r ^ pr, y ^ py) if r & bit else (c, r, y)) for c, r, y in pivots]
        pivots.append((col, pr, py))
    if any(r == 0 and y for r, y in rows):
        return None, []
    pivot_cols = {c for c, _, _ in pivots}
    particular = 0
    for c, _, y in pivots:
        if y:
            particular |= 1 << c
    kernel = []
    for free in range(n):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for c, r, _ in pivots:
            if r & (1 << free):
                vec |= 1 << c
        kernel.append(vec)
    return particular, kernel


def rank_mod2(a: Sequence[Sequence[int]]) -> int:
    n = len(a[0]) if a else 0
    return n - len(solve_mod2(a, [0] * len(a))[1]) if a else 0
