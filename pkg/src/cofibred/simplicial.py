"""Truncated simplicial and bisimplicial sets.

A truncated object stores every level up to a cap ``D`` explicitly, with
faces and degeneracies given as functions.  Operators take the dimension
of their argument explicitly (``face(n, i, x)`` for ``x`` in level ``n``),
so the same element may appear in several levels.

Bisimplicial sets are indexed by ``(m, n)``.  *Vertical* operators act on
``m`` and *horizontal* ones on ``n``; for the fibred nerve ``m`` is the
fiber direction and ``n`` the base direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Mapping as MappingABC
from typing import Any, Callable, Mapping, NamedTuple, Sequence

from .category import FiniteCategory, Functor


class SimplicialIdentityError(ValueError):
    pass


class InvalidTwisting(SimplicialIdentityError):
    pass


class Chain(NamedTuple):
    """An ``n``-simplex of a nerve: ``n+1`` objects and ``n`` arrows."""
    objects: tuple
    arrows: tuple

    @property
    def dim(self) -> int:
        return len(self.arrows)


class SimplicialSet:
    """Truncated simplicial set with levels ``0..cap``."""

    def __init__(self, levels: Sequence[Sequence], face: Callable, degeneracy: Callable,
                 name: str = "", degenerate: Callable | None = None):
        self.levels = [tuple(level) for level in levels]
        self.cap = len(self.levels) - 1
        self._face = face
        self._degeneracy = degeneracy
        self._degenerate = degenerate
        self.name = name
        self._face_cache: dict = {}
        self._index = [None] * (self.cap + 1)
        self._nondeg = [None] * (self.cap + 1)

    def __repr__(self):
        sizes = [len(lv) for lv in self.levels]
        return f"<SimplicialSet {self.name} sizes={sizes}>"

    def level(self, n: int) -> tuple:
        return self.levels[n]

    def sizes(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def index(self, n: int) -> dict:
        if self._index[n] is None:
            self._index[n] = {x: k for k, x in enumerate(self.levels[n])}
        return self._index[n]

    def __contains__(self, item) -> bool:
        n, x = item
        return 0 <= n <= self.cap and x in self.index(n)

    def face(self, n: int, i: int, x):
        key = (n, i, x)
        try:
            return self._face_cache[key]
        except KeyError:
            y = self._face(n, i, x)
            self._face_cache[key] = y
            return y

    def degeneracy(self, n: int, j: int, x):
        return self._degeneracy(n, j, x)

    def faces(self, n: int, x) -> tuple:
        return tuple(self.face(n, i, x) for i in range(n + 1))

    def is_degenerate(self, n: int, x) -> bool:
        if n == 0:
            return False
        if self._degenerate is not None:
            return self._degenerate(n, x)
        return x not in set(self.nondegenerate(n))

    def nondegenerate(self, n: int) -> tuple:
        if self._nondeg[n] is None:
            if n == 0:
                self._nondeg[n] = self.levels[0]
            elif self._degenerate is not None:
                self._nondeg[n] = tuple(x for x in self.levels[n] if not self._degenerate(n, x))
            else:
                image = {self.degeneracy(n - 1, j, y)
                         for y in self.levels[n - 1] for j in range(n)}
                self._nondeg[n] = tuple(x for x in self.levels[n] if x not in image)
        return self._nondeg[n]

    def check_identities(self) -> None:
        """Exhaustive simplicial identities on the stored range; raises
        SimplicialIdentityError naming the failure."""
        check_simplicial_identities(self)


def check_simplicial_identities(X: SimplicialSet, error=SimplicialIdentityError) -> None:
    D = X.cap
    for n in range(D + 1):
        idx = X.index(n)
        for x in X.levels[n]:
            if n >= 1:
                for i in range(n + 1):
                    if X.face(n, i, x) not in X.index(n - 1):
                        raise error(f"d_{i} of {x!r} leaves level {n - 1}")
            if n < D:
                for j in range(n + 1):
                    if X.degeneracy(n, j, x) not in X.index(n + 1):
                        raise error(f"s_{j} of {x!r} leaves level {n + 1}")
            if n >= 2:
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        a = X.face(n - 1, i, X.face(n, j, x))
                        b = X.face(n - 1, j - 1, X.face(n, i, x))
                        if a != b:
                            raise error(f"d_{i}d_{j} != d_{j - 1}d_{i} on {x!r}")
            if n < D:
                for j in range(n + 1):
                    sx = X.degeneracy(n, j, x)
                    for i in range(n + 2):
                        lhs = X.face(n + 1, i, sx)
                        if i < j:
                            rhs = X.degeneracy(n - 1, j - 1, X.face(n, i, x))
                        elif i in (j, j + 1):
                            rhs = x
                        else:
                            rhs = X.degeneracy(n - 1, j, X.face(n, i - 1, x))
                        if lhs != rhs:
                            raise error(f"d_{i}s_{j} identity fails on {x!r}")
            if n + 2 <= D:
                for i in range(n + 1):
                    for j in range(i, n + 1):
                        a = X.degeneracy(n + 1, i, X.degeneracy(n, j, x))
                        b = X.degeneracy(n + 1, j + 1, X.degeneracy(n, i, x))
                        if a != b:
                            raise error(f"s_{i}s_{j} != s_{j + 1}s_{i} on {x!r}")
        del idx


@dataclass
class SimplicialMap:
    """A map of truncated simplicial sets, ``func(n, x)`` on level ``n``."""
    dom: SimplicialSet
    cod: SimplicialSet
    func: Callable
    name: str = ""

    def __call__(self, n: int, x):
        return self.func(n, x)

    def check(self) -> None:
        X, Y = self.dom, self.cod
        D = min(X.cap, Y.cap)
        for n in range(D + 1):
            for x in X.levels[n]:
                fx = self.func(n, x)
                if fx not in Y.index(n):
                    raise SimplicialIdentityError(f"{self.name}: image of {x!r} not in level {n}")
                if n >= 1:
                    for i in range(n + 1):
                        if self.func(n - 1, X.face(n, i, x)) != Y.face(n, i, fx):
                            raise SimplicialIdentityError(f"{self.name}: does not commute with d_{i} at {x!r}")
                if n < D:
                    for j in range(n + 1):
                        if self.func(n + 1, X.degeneracy(n, j, x)) != Y.degeneracy(n, j, fx):
                            raise SimplicialIdentityError(f"{self.name}: does not commute with s_{j} at {x!r}")

    def is_simplicial(self) -> bool:
        try:
            self.check()
        except SimplicialIdentityError:
            return False
        return True

    def is_levelwise_bijection(self, upto: int | None = None) -> bool:
        D = min(self.dom.cap, self.cod.cap) if upto is None else upto
        for n in range(D + 1):
            image = [self.func(n, x) for x in self.dom.levels[n]]
            if len(set(image)) != len(image) or set(image) != set(self.cod.levels[n]):
                return False
        return True

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(self.dom, other.cod, lambda n, x: other.func(n, self.func(n, x)),
                             name=f"{other.name}∘{self.name}")


# -- nerves ----------------------------------------------------------------

def nerve(C: FiniteCategory, cap: int = 4) -> SimplicialSet:
    """Truncated nerve: ``n``-simplices are chains of ``n`` composable arrows."""
    levels = [[Chain((x,), ()) for x in C.objects]]
    for n in range(1, cap + 1):
        nxt = []
        for ch in levels[-1]:
            last = ch.objects[-1]
            for f in C.out[last]:
                nxt.append(Chain(ch.objects + (C.dst[f],), ch.arrows + (f,)))
        levels.append(nxt)

    def face(n, i, ch):
        objs, arrs = ch
        if i == 0:
            return Chain(objs[1:], arrs[1:])
        if i == n:
            return Chain(objs[:-1], arrs[:-1])
        return Chain(objs[:i] + objs[i + 1:],
                     arrs[:i - 1] + (C.comp[(arrs[i], arrs[i - 1])],) + arrs[i + 1:])

    def degeneracy(n, j, ch):
        objs, arrs = ch
        return Chain(objs[:j + 1] + objs[j:], arrs[:j] + (C.identity[objs[j]],) + arrs[j:])

    def degenerate(n, ch):
        return any(C.is_identity(f) for f in ch.arrows)

    return SimplicialSet(levels, face, degeneracy, name=f"N({C.name})", degenerate=degenerate)


def apply_functor(F: Functor, ch: Chain) -> Chain:
    return Chain(tuple(F.ob_map[x] for x in ch.objects), tuple(F.fl_map[f] for f in ch.arrows))


def functor_nerve_map(F: Functor, X: SimplicialSet | None = None,
                      Y: SimplicialSet | None = None, cap: int = 4) -> SimplicialMap:
    if X is None:
        X = nerve(F.dom, cap)
    if Y is None:
        Y = nerve(F.cod, X.cap)
    return SimplicialMap(X, Y, lambda n, ch: apply_functor(F, ch), name=f"N({F.name})")


def product_sset(X: SimplicialSet, Y: SimplicialSet) -> SimplicialSet:
    cap = min(X.cap, Y.cap)
    levels = [[(x, y) for x in X.levels[n] for y in Y.levels[n]] for n in range(cap + 1)]
    return SimplicialSet(
        levels,
        lambda n, i, p: (X.face(n, i, p[0]), Y.face(n, i, p[1])),
        lambda n, j, p: (X.degeneracy(n, j, p[0]), Y.degeneracy(n, j, p[1])),
        name=f"{X.name}×{Y.name}")


# -- bisimplicial sets -----------------------------------------------------

class LazyLevels(MappingABC):
    """Levels ``(m, n) -> tuple`` computed on first access."""

    def __init__(self, make: Callable, cap: int):
        self._make = make
        self._keys = [(m, n) for m in range(cap + 1) for n in range(cap + 1)]
        self._store: dict = {}

    def __getitem__(self, key):
        if key not in self._store:
            if key not in self._keys:
                raise KeyError(key)
            self._store[key] = tuple(self._make(*key))
        return self._store[key]

    def __iter__(self):
        return iter(self._keys)

    def __len__(self):
        return len(self._keys)


class BisimplicialSet:
    """Truncated bisimplicial set with levels ``(m, n)``, ``m, n <= cap``.

    ``levels`` is a mapping or a function ``(m, n) -> iterable``.
    ``vface(m, n, i, x)`` maps ``K_{m,n} -> K_{m-1,n}`` and
    ``hface(m, n, i, x)`` maps ``K_{m,n} -> K_{m,n-1}``; likewise for the
    degeneracies.
    """

    def __init__(self, levels: Mapping, hface: Callable, vface: Callable,
                 hdeg: Callable, vdeg: Callable, cap: int, name: str = "",
                 hdeg_at: Callable | None = None, vdeg_at: Callable | None = None):
        if callable(levels):
            self.levels = LazyLevels(levels, cap)
        else:
            self.levels = {k: tuple(v) for k, v in levels.items()}
        self.cap = cap
        self._hface, self._vface = hface, vface
        self._hdeg, self._vdeg = hdeg, vdeg
        # optional pattern tests: x == s_j(...) in each direction
        self.hdeg_at, self.vdeg_at = hdeg_at, vdeg_at
        self.name = name
        self._index: dict = {}
        self._hcache: dict = {}
        self._vcache: dict = {}

    def __repr__(self):
        return f"<BisimplicialSet {self.name} cap={self.cap}>"

    def level(self, m: int, n: int) -> tuple:
        return self.levels[(m, n)]

    def index(self, m: int, n: int) -> dict:
        key = (m, n)
        if key not in self._index:
            self._index[key] = {x: k for k, x in enumerate(self.levels[key])}
        return self._index[key]

    def hface(self, m, n, i, x):
        key = (m, n, i, x)
        try:
            return self._hcache[key]
        except KeyError:
            y = self._hface(m, n, i, x)
            self._hcache[key] = y
            return y

    def vface(self, m, n, i, x):
        key = (m, n, i, x)
        try:
            return self._vcache[key]
        except KeyError:
            y = self._vface(m, n, i, x)
            self._vcache[key] = y
            return y

    def hdeg(self, m, n, j, x):
        return self._hdeg(m, n, j, x)

    def vdeg(self, m, n, j, x):
        return self._vdeg(m, n, j, x)

    def vertical(self, n: int) -> SimplicialSet:
        """The simplicial set ``m -> K_{m,n}`` with vertical operators."""
        return SimplicialSet([self.levels[(m, n)] for m in range(self.cap + 1)],
                             lambda m, i, x: self.vface(m, n, i, x),
                             lambda m, j, x: self.vdeg(m, n, j, x),
                             name=f"{self.name}[-,{n}]")

    def horizontal(self, m: int) -> SimplicialSet:
        """The simplicial set ``n -> K_{m,n}`` with horizontal operators."""
        return SimplicialSet([self.levels[(m, n)] for n in range(self.cap + 1)],
                             lambda n, i, x: self.hface(m, n, i, x),
                             lambda n, j, x: self.hdeg(m, n, j, x),
                             name=f"{self.name}[{m},-]")

    def is_hdegenerate(self, m, n, x) -> bool:
        if self.hdeg_at is not None:
            return any(self.hdeg_at(x, j) for j in range(n))
        return n > 0 and x in self._hdeg_image(m, n)

    def is_vdegenerate(self, m, n, x) -> bool:
        if self.vdeg_at is not None:
            return any(self.vdeg_at(x, j) for j in range(m))
        return m > 0 and x in self._vdeg_image(m, n)

    def _hdeg_image(self, m, n):
        key = ("h", m, n)
        if key not in self._index:
            self._index[key] = {self.hdeg(m, n - 1, j, y)
                                for y in self.levels[(m, n - 1)] for j in range(n)}
        return self._index[key]

    def _vdeg_image(self, m, n):
        key = ("v", m, n)
        if key not in self._index:
            self._index[key] = {self.vdeg(m - 1, n, j, y)
                                for y in self.levels[(m - 1, n)] for j in range(m)}
        return self._index[key]

    def nondegenerate(self, m, n) -> tuple:
        """Bisimplices outside the image of every degeneracy in either direction."""
        key = ("nd", m, n)
        if key not in self._index:
            self._index[key] = tuple(x for x in self.levels[(m, n)]
                                     if not self.is_hdegenerate(m, n, x)
                                     and not self.is_vdegenerate(m, n, x))
        return self._index[key]

    def check_identities(self) -> None:
        D = self.cap
        for n in range(D + 1):
            check_simplicial_identities(self.vertical(n))
        for m in range(D + 1):
            check_simplicial_identities(self.horizontal(m))
        for m in range(D + 1):
            for n in range(D + 1):
                for x in self.levels[(m, n)]:
                    for i in range(m + 1 if m else 0):
                        for k in range(n + 1 if n else 0):
                            a = self.hface(m - 1, n, k, self.vface(m, n, i, x))
                            b = self.vface(m, n - 1, i, self.hface(m, n, k, x))
                            if a != b:
                                raise SimplicialIdentityError(f"d^v_{i} and d^h_{k} do not commute on {x!r}")
                    if m < D:
                        for j in range(m + 1):
                            for k in range(n + 1 if n else 0):
                                a = self.hface(m + 1, n, k, self.vdeg(m, n, j, x))
                                b = self.vdeg(m, n - 1, j, self.hface(m, n, k, x))
                                if a != b:
                                    raise SimplicialIdentityError(f"s^v_{j} and d^h_{k} do not commute on {x!r}")
                    if n < D:
                        for j in range(n + 1):
                            for i in range(m + 1 if m else 0):
                                a = self.vface(m, n + 1, i, self.hdeg(m, n, j, x))
                                b = self.hdeg(m - 1, n, j, self.vface(m, n, i, x))
                                if a != b:
                                    raise SimplicialIdentityError(f"s^h_{j} and d^v_{i} do not commute on {x!r}")
                    if m < D and n < D:
                        for j in range(m + 1):
                            for k in range(n + 1):
                                a = self.hdeg(m + 1, n, k, self.vdeg(m, n, j, x))
                                b = self.vdeg(m, n + 1, j, self.hdeg(m, n, k, x))
                                if a != b:
                                    raise SimplicialIdentityError(f"s^v_{j} and s^h_{k} do not commute on {x!r}")


@dataclass
class BisimplicialMap:
    dom: BisimplicialSet
    cod: BisimplicialSet
    func: Callable
    name: str = ""

    def __call__(self, m, n, x):
        return self.func(m, n, x)

    def check(self) -> None:
        K, L = self.dom, self.cod
        D = min(K.cap, L.cap)
        for (m, n), xs in K.levels.items():
            if m > D or n > D:
                continue
            for x in xs:
                fx = self.func(m, n, x)
                if fx not in L.index(m, n):
                    raise SimplicialIdentityError(f"{self.name}: image of {x!r} not in level {(m, n)}")
                for i in range(m + 1 if m else 0):
                    if self.func(m - 1, n, K.vface(m, n, i, x)) != L.vface(m, n, i, fx):
                        raise SimplicialIdentityError(f"{self.name}: d^v_{i} at {x!r}")
                for i in range(n + 1 if n else 0):
                    if self.func(m, n - 1, K.hface(m, n, i, x)) != L.hface(m, n, i, fx):
                        raise SimplicialIdentityError(f"{self.name}: d^h_{i} at {x!r}")
                if m < D:
                    for j in range(m + 1):
                        if self.func(m + 1, n, K.vdeg(m, n, j, x)) != L.vdeg(m, n, j, fx):
                            raise SimplicialIdentityError(f"{self.name}: s^v_{j} at {x!r}")
                if n < D:
                    for j in range(n + 1):
                        if self.func(m, n + 1, K.hdeg(m, n, j, x)) != L.hdeg(m, n, j, fx):
                            raise SimplicialIdentityError(f"{self.name}: s^h_{j} at {x!r}")

    def is_levelwise_bijection(self) -> bool:
        for key, xs in self.dom.levels.items():
            image = [self.func(*key, x) for x in xs]
            if len(set(image)) != len(image) or set(image) != set(self.cod.levels[key]):
                return False
        return True


def constant_bisimplicial(X: SimplicialSet, direction: str = "h") -> BisimplicialSet:
    """``K_{m,n} = X_m`` (``direction='h'``: constant in the horizontal
    direction) or ``K_{m,n} = X_n`` (``direction='v'``)."""
    D = X.cap
    if direction == "h":
        levels = {(m, n): X.levels[m] for m in range(D + 1) for n in range(D + 1)}
        return BisimplicialSet(levels,
                               hface=lambda m, n, i, x: x, vface=lambda m, n, i, x: X.face(m, i, x),
                               hdeg=lambda m, n, j, x: x, vdeg=lambda m, n, j, x: X.degeneracy(m, j, x),
                               cap=D, name=f"const_h({X.name})")
    levels = {(m, n): X.levels[n] for m in range(D + 1) for n in range(D + 1)}
    return BisimplicialSet(levels,
                           hface=lambda m, n, i, x: X.face(n, i, x), vface=lambda m, n, i, x: x,
                           hdeg=lambda m, n, j, x: X.degeneracy(n, j, x), vdeg=lambda m, n, j, x: x,
                           cap=D, name=f"const_v({X.name})")


def coproduct_bisimplicial(K: BisimplicialSet, L: BisimplicialSet) -> BisimplicialSet:
    """Levelwise disjoint union, elements tagged ``(0, x)`` / ``(1, y)``."""
    D = min(K.cap, L.cap)
    parts = (K, L)
    levels = {(m, n): [(0, x) for x in K.levels[(m, n)]] + [(1, y) for y in L.levels[(m, n)]]
              for m in range(D + 1) for n in range(D + 1)}

    def lift(op):
        return lambda m, n, i, t: (t[0], getattr(parts[t[0]], op)(m, n, i, t[1]))

    return BisimplicialSet(levels, lift("hface"), lift("vface"), lift("hdeg"), lift("vdeg"),
                           cap=D, name=f"{K.name}⊔{L.name}")


def diagonal(K: BisimplicialSet) -> SimplicialSet:
    """``d(K)_n = K_{n,n}``, ``d_i = d_i^h d_i^v``, ``s_j = s_j^h s_j^v``."""
    D = K.cap
    levels = [K.levels[(n, n)] for n in range(D + 1)]
    def pattern(n, x):
        # x = s_j^h a = s_j^v b forces x = s_j^h s_j^v d_j^h b
        return any(K.hdeg_at(x, j) and K.vdeg_at(x, j) for j in range(n))

    degenerate = pattern if K.hdeg_at is not None and K.vdeg_at is not None else None
    return SimplicialSet(
        levels,
        lambda n, i, x: K.hface(n - 1, n, i, K.vface(n, n, i, x)),
        lambda n, j, x: K.hdeg(n + 1, n, j, K.vdeg(n, n, j, x)),
        name=f"d({K.name})", degenerate=degenerate)


def diagonal_map(phi: BisimplicialMap, dK: SimplicialSet | None = None,
                 dL: SimplicialSet | None = None) -> SimplicialMap:
    dK = dK or diagonal(phi.dom)
    dL = dL or diagonal(phi.cod)
    return SimplicialMap(dK, dL, lambda n, x: phi.func(n, n, x), name=f"d({phi.name})")


# -- codiagonal ------------------------------------------------------------

def codiagonal(K: BisimplicialSet) -> SimplicialSet:
    """``∇(K)_n``: tuples ``(x_0..x_n)``, ``x_i ∈ K_{i,n-i}``, with
    ``d_0^h x_i = d_{i+1}^v x_{i+1}``."""
    D = K.cap
    # candidates for x_{i+1} indexed by d_{i+1}^v x_{i+1}
    by_vface: dict = {}

    def candidates(i, n, target):
        key = (i, n)
        if key not in by_vface:
            table: dict = {}
            for y in K.levels[(i + 1, n - i - 1)]:
                table.setdefault(K.vface(i + 1, n - i - 1, i + 1, y), []).append(y)
            by_vface[key] = table
        return by_vface[key].get(target, ())

    levels = []
    for n in range(D + 1):
        out = []

        def extend(prefix, i):
            if i == n:
                out.append(tuple(prefix))
                return
            x = prefix[-1]
            target = K.hface(i, n - i, 0, x)
            for y in candidates(i, n, target):
                prefix.append(y)
                extend(prefix, i + 1)
                prefix.pop()

        for x0 in K.levels[(0, n)]:
            extend([x0], 0)
        levels.append(out)

    def face(n, i, xs):
        left = tuple(K.hface(k, n - k, i - k, xs[k]) for k in range(i))
        right = tuple(K.vface(k + 1, n - k - 1, i, xs[k + 1]) for k in range(i, n))
        return left + right

    def degeneracy(n, j, xs):
        left = tuple(K.hdeg(k, n - k, j - k, xs[k]) for k in range(j + 1))
        right = tuple(K.vdeg(k, n - k, j, xs[k]) for k in range(j, n + 1))
        return left + right

    return SimplicialSet(levels, face, degeneracy, name=f"∇({K.name})")


def codiagonal_map(phi: BisimplicialMap, cK: SimplicialSet, cL: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(cK, cL,
                         lambda n, xs: tuple(phi.func(k, n - k, x) for k, x in enumerate(xs)),
                         name=f"∇({phi.name})")


def theta(K: BisimplicialSet, dK: SimplicialSet | None = None,
          cK: SimplicialSet | None = None) -> SimplicialMap:
    """``θ(x)_i = (d_{i+1}^v)^{n-i} (d_0^h)^i x``."""
    dK = dK or diagonal(K)
    cK = cK or codiagonal(K)

    def func(n, x):
        out = []
        for i in range(n + 1):
            y = x
            for k in range(i):
                y = K.hface(n, n - k, 0, y)
            for k in range(n - i):
                y = K.vface(n - k, n - i, i + 1, y)
            out.append(y)
        return tuple(out)

    return SimplicialMap(dK, cK, func, name="θ")


# -- homotopy colimits -----------------------------------------------------

@dataclass
class SimplicialDiagram:
    """A functor ``Z: B -> SSet``: a simplicial set per object and a
    simplicial map per arrow (identities may be omitted)."""
    base: FiniteCategory
    values: Mapping
    maps: Mapping

    def map(self, phi):
        if phi in self.maps:
            return self.maps[phi]
        if self.base.is_identity(phi):
            X = self.values[self.base.src[phi]]
            return SimplicialMap(X, X, lambda n, x: x, name="id")
        raise KeyError(phi)


def nerve_diagram(F, cap: int) -> SimplicialDiagram:
    """``N∘F`` for a DiagramOfCategories ``F``."""
    values = {b: nerve(F.values[b], cap) for b in F.base.objects}
    maps = {phi: functor_nerve_map(F.maps[phi], values[F.base.src[phi]], values[F.base.dst[phi]])
            for phi in F.base.arrows}
    return SimplicialDiagram(F.base, values, maps)


def hc(Z: SimplicialDiagram, cap: int | None = None) -> BisimplicialSet:
    """Bousfield–Kan ``hc(Z)_{m,n} = ∐_{b_0 -> ... -> b_n} Z(b_0)_m``.

    Elements are pairs ``(chain, a)``.  Vertical operators act on ``a``
    inside ``Z(b_0)``; horizontal operators act on the chain, and
    ``d_0^h`` transports ``a`` along ``Z(b_0 -> b_1)``.
    """
    B = Z.base
    if cap is None:
        cap = min(X.cap for X in Z.values.values())
    NB = nerve(B, cap)
    levels = {}
    for m in range(cap + 1):
        for n in range(cap + 1):
            levels[(m, n)] = [(ch, a) for ch in NB.levels[n]
                              for a in Z.values[ch.objects[0]].levels[m]]

    def hface(m, n, i, el):
        ch, a = el
        if i == 0:
            a = Z.map(ch.arrows[0])(m, a)
        return (NB.face(n, i, ch), a)

    def vface(m, n, i, el):
        ch, a = el
        return (ch, Z.values[ch.objects[0]].face(m, i, a))

    def hdeg(m, n, j, el):
        ch, a = el
        return (NB.degeneracy(n, j, ch), a)

    def vdeg(m, n, j, el):
        ch, a = el
        return (ch, Z.values[ch.objects[0]].degeneracy(m, j, a))

    return BisimplicialSet(levels, hface, vface, hdeg, vdeg, cap=cap, name="hc")


# -- twisted cartesian products --------------------------------------------

@dataclass
class ConstantSimplicialGroup:
    """A finite group acting levelwise on a simplicial set: ``act(g, n, x)``."""
    elements: tuple
    mult: Callable
    unit: Any
    act: Callable
    space: SimplicialSet

    def check(self) -> None:
        X = self.space
        for n in range(X.cap + 1):
            for x in X.levels[n]:
                if self.act(self.unit, n, x) != x:
                    raise SimplicialIdentityError(f"unit does not act trivially on {x!r}")
                for g in self.elements:
                    gx = self.act(g, n, x)
                    if gx not in X.index(n):
                        raise SimplicialIdentityError(f"{g!r}·{x!r} leaves level {n}")
                    for h in self.elements:
                        if self.act(g, n, self.act(h, n, x)) != self.act(self.mult(g, h), n, x):
                            raise SimplicialIdentityError(f"action not associative at {x!r}")
                    for i in range(n + 1 if n else 0):
                        if self.act(g, n - 1, X.face(n, i, x)) != X.face(n, i, gx):
                            raise SimplicialIdentityError(f"action does not commute with d_{i}")
                    if n < X.cap:
                        for j in range(n + 1):
                            if self.act(g, n + 1, X.degeneracy(n, j, x)) != X.degeneracy(n, j, gx):
                                raise SimplicialIdentityError(f"action does not commute with s_{j}")


@dataclass
class TwistingFunction:
    """``τ: B_n -> G`` for ``n >= 1``."""
    func: Callable
    name: str = "τ"

    def __call__(self, n, b):
        return self.func(n, b)


def tcp(A: SimplicialSet, G: ConstantSimplicialGroup, B: SimplicialSet,
        tau: TwistingFunction, check: bool = True) -> SimplicialSet:
    """Twisted cartesian product ``A ×_τ B``:
    ``d_0(a, b) = (τ(b)·d_0 a, d_0 b)``, all other operators componentwise.
    Raises InvalidTwisting when the result violates a simplicial identity.
    """
    cap = min(A.cap, B.cap)
    levels = [[(a, b) for a in A.levels[n] for b in B.levels[n]] for n in range(cap + 1)]

    def face(n, i, pair):
        a, b = pair
        if i == 0:
            return (G.act(tau(n, b), n - 1, A.face(n, 0, a)), B.face(n, 0, b))
        return (A.face(n, i, a), B.face(n, i, b))

    def degeneracy(n, j, pair):
        a, b = pair
        return (A.degeneracy(n, j, a), B.degeneracy(n, j, b))

    X = SimplicialSet(levels, face, degeneracy, name=f"{A.name}×_{tau.name}{B.name}")
    if check:
        check_simplicial_identities(X, error=InvalidTwisting)
    return X


def group_nerve_twisting() -> TwistingFunction:
    """``τ(* -g1-> * -g2-> ... ) = g1``, the projection onto the first letter."""
    return TwistingFunction(lambda n, ch: ch.arrows[0], name="τ")
