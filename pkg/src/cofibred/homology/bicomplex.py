"""Normalized double complex of a bisimplicial set and its total complex.

The basis at ``(m, n)`` is the set of bisimplices that are degenerate in
neither direction.  ``d^h`` lowers ``n`` and ``d^v`` lowers ``m``; the
total differential is ``d = d^h + (-1)^n d^v``.
"""

from __future__ import annotations

from ..simplicial import BisimplicialSet, diagonal
from .chains import ChainComplex, ChainMap, homology, normalized_chain_complex


class Bicomplex:
    def __init__(self, K: BisimplicialSet, cap: int | None = None):
        self.K = K
        self.cap = K.cap if cap is None else min(cap, K.cap)
        D = self.cap
        self.basis = {}
        self.index = {}
        for m in range(D + 1):
            for n in range(D + 1 - m):
                b = list(K.nondegenerate(m, n))
                self.basis[(m, n)] = b
                self.index[(m, n)] = {x: k for k, x in enumerate(b)}
        self.dh = {}
        self.dv = {}
        for (m, n), b in self.basis.items():
            if n >= 1:
                idx = self.index[(m, n - 1)]
                self.dh[(m, n)] = [self._boundary(idx, lambda i, x: K.hface(m, n, i, x), n, x) for x in b]
            if m >= 1:
                idx = self.index[(m - 1, n)]
                self.dv[(m, n)] = [self._boundary(idx, lambda i, x: K.vface(m, n, i, x), m, x) for x in b]

    @staticmethod
    def _boundary(idx, face, top, x) -> dict:
        col: dict = {}
        for i in range(top + 1):
            k = idx.get(face(i, x))
            if k is not None:
                col[k] = col.get(k, 0) + (-1 if i % 2 else 1)
        return {k: v for k, v in col.items() if v}

    def size(self, m, n) -> int:
        return len(self.basis.get((m, n), ()))

    def check_commute(self) -> bool:
        """``d^h d^v = d^v d^h`` and both square to zero."""
        def apply(cols, vec):
            out: dict = {}
            for i, a in vec.items():
                for j, b in cols[i].items():
                    out[j] = out.get(j, 0) + a * b
            return {j: v for j, v in out.items() if v}

        for (m, n), b in self.basis.items():
            for k in range(len(b)):
                e = {k: 1}
                if m >= 1 and n >= 1:
                    if apply(self.dh[(m - 1, n)], apply(self.dv[(m, n)], e)) != \
                            apply(self.dv[(m, n - 1)], apply(self.dh[(m, n)], e)):
                        return False
                if n >= 2 and apply(self.dh[(m, n - 1)], apply(self.dh[(m, n)], e)):
                    return False
                if m >= 2 and apply(self.dv[(m - 1, n)], apply(self.dv[(m, n)], e)):
                    return False
        return True

    # -- total complex -------------------------------------------------------

    def blocks(self, k: int) -> list:
        """``[(m, n, offset, size)]`` for total degree ``k``, ordered by ``n``."""
        out, off = [], 0
        for n in range(k + 1):
            m = k - n
            s = self.size(m, n)
            out.append((m, n, off, s))
            off += s
        return out

    def total_complex(self) -> ChainComplex:
        D = self.cap
        basis, boundary = [], {}
        layout = [self.blocks(k) for k in range(D + 1)]
        for k in range(D + 1):
            basis.append([(m, n, x) for (m, n, _, _) in layout[k] for x in self.basis[(m, n)]])
        for k in range(1, D + 1):
            offs = {(m, n): off for (m, n, off, _) in layout[k - 1]}
            cols = []
            for (m, n, off, s) in layout[k]:
                for j in range(s):
                    col: dict = {}
                    if n >= 1:
                        o = offs[(m, n - 1)]
                        for i, v in self.dh[(m, n)][j].items():
                            col[o + i] = col.get(o + i, 0) + v
                    if m >= 1:
                        o = offs[(m - 1, n)]
                        sign = -1 if n % 2 else 1
                        for i, v in self.dv[(m, n)][j].items():
                            col[o + i] = col.get(o + i, 0) + sign * v
                    cols.append({i: v for i, v in col.items() if v})
            boundary[k] = cols
        return ChainComplex(basis, boundary, guaranteed=D - 1, name=f"Tot({self.K.name})")

    # -- columns -------------------------------------------------------------

    def column(self, n: int) -> ChainComplex:
        """Column ``n`` as a complex in ``m`` (differential ``d^v``)."""
        top = self.cap - n
        basis = [list(self.basis[(m, n)]) for m in range(top + 1)]
        boundary = {m: self.dv[(m, n)] for m in range(1, top + 1)}
        return ChainComplex(basis, boundary, guaranteed=top - 1, name=f"col{n}")

    def horizontal_map(self, n: int, cols: dict) -> ChainMap:
        """``d^h: column n -> column n-1`` as a chain map (up to the common
        top degree)."""
        def func(m, i):
            return self.dh[(m, n)][i] if (m, n) in self.dh else {}
        return ChainMap(cols[n], cols[n - 1], func)


def fibration_bicomplex(nerve_K: BisimplicialSet, cap: int | None = None) -> Bicomplex:
    return Bicomplex(nerve_K, cap)


def eilenberg_zilber_check(K: BisimplicialSet, upto: int | None = None) -> dict:
    """Compare ``H_k(Tot K)`` with ``H_k(d K)`` for ``k <= upto``."""
    B = Bicomplex(K)
    upto = B.cap - 1 if upto is None else upto
    T = B.total_complex()
    Dg = normalized_chain_complex(diagonal(K), upto=B.cap)
    rows = {k: (homology(T, k), homology(Dg, k)) for k in range(upto + 1)}
    return {"holds": all(a == b for a, b in rows.values()), "degrees": rows}
