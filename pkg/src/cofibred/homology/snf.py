"""Smith normal form over the integers, with unimodular transforms.

Matrices are lists of rows of Python ints.  ``smith(A)`` returns
``(D, U, V, Uinv, Vinv)`` with ``U A V = D``, ``D`` diagonal with
non-negative entries ``d_1 | d_2 | ...``.
"""

from __future__ import annotations

from typing import NamedTuple


class SNF(NamedTuple):
    D: list
    U: list
    V: list
    Uinv: list
    Vinv: list

    @property
    def diagonal(self) -> list:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list:
    return [[0] * c for _ in range(r)]


def matmul(A: list, B: list) -> list:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * cols
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += a * bk[j]
        out.append(acc)
    return out


def transpose(A: list, ncols: int | None = None) -> list:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def smith(A: list, ncols: int | None = None) -> SNF:
    """Smith normal form of an ``r x c`` integer matrix.  ``ncols`` is
    needed only when ``r = 0``."""
    r = len(A)
    c = len(A[0]) if r else (ncols or 0)
    M = [list(row) for row in A]
    U, Uinv = identity(r), identity(r)
    V, Vinv = identity(c), identity(c)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        if not q:
            return
        Ms, Md = M[src], M[dst]
        for k in range(c):
            if Ms[k]:
                Md[k] += q * Ms[k]
        Us, Ud = U[src], U[dst]
        for k in range(r):
            if Us[k]:
                Ud[k] += q * Us[k]
        for row in Uinv:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(src, dst, q):
        # col_dst += q * col_src
        if not q:
            return
        for row in M:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        Vs, Vd = Vinv[src], Vinv[dst]
        for k in range(c):
            if Vd[k]:
                Vs[k] -= q * Vd[k]

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        U[i] = [-x for x in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            Mi = M[i]
            for j in range(t, c):
                v = Mi[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, r):
                if M[i][t]:
                    add_row(t, i, -(M[i][t] // p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if M[t][j]:
                    add_col(t, j, -(M[t][j] // p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder into the pivot and retry
                cands = [(abs(M[i][t]), i, t) for i in range(t + 1, r) if M[i][t]]
                cands += [(abs(M[t][j]), t, j) for j in range(t + 1, c) if M[t][j]]
                _, i, j = min(cands)
                if j == t:
                    swap_rows(i, t)
                else:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, r):
                Mi = M[i]
                for j in range(t + 1, c):
                    if Mi[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if M[t][t] < 0:
            negate_row(t)
        t += 1
    return SNF(M, U, V, Uinv, Vinv)


def invariant_factors(A: list, ncols: int | None = None) -> list:
    """Nonzero diagonal entries of the Smith form."""
    return [d for d in smith(A, ncols).diagonal if d]


def is_smith_form(D: list) -> bool:
    r = len(D)
    c = len(D[0]) if r else 0
    diag = []
    for i in range(r):
        for j in range(c):
            if i != j and D[i][j]:
                return False
    for i in range(min(r, c)):
        diag.append(D[i][i])
    if any(d < 0 for d in diag):
        return False
    seen_zero = False
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            seen_zero = True
        if seen_zero and b:
            return False
        if a and b % a:
            return False
    return True


def determinant_pm1(M: list) -> bool:
    """``det M = ±1``, via the Smith form."""
    n = len(M)
    if n == 0:
        return True
    return smith(M).diagonal == [1] * n
