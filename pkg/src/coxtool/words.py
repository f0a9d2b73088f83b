"""Exact computation in a Coxeter group given by its matrix.

Words are tuples of generator indices.  Two routes to the word problem
live here and are kept independent:

* ``reduce`` rewrites an arbitrary word with braid moves and ``ss``
  cancellations.  Deciding whether ``s`` is a right descent of a reduced
  word only needs the alternating ``{s, t}`` suffix, which is exposed by
  recursively asking the same question of shorter words.
* ``enumerate_group`` grows the right Cayley graph of a finite parabolic
  level by level.  A new element ``wt`` has ``s != t`` as a descent exactly
  when the ``{s, t}``-part of ``w`` has length ``m_st - 1``, so every
  element is created once and all its incoming edges are known at birth.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .diagram import INF, CoxeterMatrix, irreducible_components, odd_classes
from .errors import CapExceeded, MixedMatrixError, OddClassNotSingleton

DEFAULT_MAX_ENUM = 200_000
DEFAULT_ORDER_CAP = 1000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


def _alternating(length, last, other):
    return tuple(last if (length - 1 - i) % 2 == 0 else other for i in range(length))


class _Rewriter:
    def __init__(self, M: CoxeterMatrix):
        self.orders = M.orders
        self.memo = {}

    def ends_with(self, w, s):
        """A reduced word for ``w`` ending in ``s``, or None if ``s`` is not a descent."""
        if not w:
            return None
        t = w[-1]
        if t == s:
            return w
        m = self.orders[s][t]
        if m == INF:
            return None
        key = (w, s)
        hit = self.memo.get(key, key)
        if hit is not key:
            return hit
        v, c, result = w[:-1], s, None
        for _ in range(m - 1):
            e = self.ends_with(v, c)
            if e is None:
                break
            v = e[:-1]
            c = t if c == s else s
        else:
            result = v + _alternating(m, s, t)
        self.memo[key] = result
        return result

    def reduced(self, word, start=()):
        r = start
        for x in word:
            e = self.ends_with(r, x)
            r = e[:-1] if e is not None else r + (x,)
        return r

    def normal_form(self, reduced_word):
        """Lexicographically least reduced word of the same element."""
        rev = reduced_word[::-1]
        out = []
        while rev:
            for s in sorted(set(rev)):
                e = self.ends_with(rev, s)
                if e is not None:
                    out.append(s)
                    rev = e[:-1]
                    break
        return tuple(out)


@lru_cache(maxsize=64)
def _rewriter(M: CoxeterMatrix) -> _Rewriter:
    return _Rewriter(M)


@dataclass(frozen=True)
class Element:
    """A group element stored by its lexicographically least reduced word."""

    matrix: CoxeterMatrix = field(repr=False, compare=True)
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(self.matrix.names[i] for i in self.word)

    def __str__(self):
        return " ".join(self.letters) if self.word else "e"

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    def is_identity(self) -> bool:
        return not self.word


def parse_word(M: CoxeterMatrix, word) -> tuple[int, ...]:
    """Turn ``"s t u"``, a list of names or a list of indices into an index tuple."""
    if isinstance(word, Element):
        return word.word
    if isinstance(word, str):
        word = word.split()
    out = []
    for x in word:
        if isinstance(x, int):
            if not 0 <= x < len(M):
                raise IndexError(f"generator index {x} out of range")
            out.append(x)
        else:
            out.append(M.index(x))
    return tuple(out)


def reduce(M: CoxeterMatrix, word) -> Element:
    rw = _rewriter(M)
    return Element(M, rw.normal_form(rw.reduced(parse_word(M, word))))


def identity(M: CoxeterMatrix) -> Element:
    return Element(M, ())


def generator(M: CoxeterMatrix, name: str) -> Element:
    return Element(M, (M.index(name),))


def _same(x: Element, y: Element):
    if x.matrix != y.matrix:
        raise MixedMatrixError("elements live in different Coxeter groups")
    return x.matrix


def multiply(x: Element, *rest: Element) -> Element:
    word = x.word
    M = x.matrix
    for y in rest:
        _same(x, y)
        word = word + y.word
    return reduce(M, word)


def invert(x: Element) -> Element:
    return reduce(x.matrix, x.word[::-1])


def conjugate(x: Element, y: Element) -> Element:
    """``y^-1 x y``."""
    _same(x, y)
    return reduce(x.matrix, y.word[::-1] + x.word + y.word)


def power(x: Element, k: int) -> Element:
    return reduce(x.matrix, x.word * k)


# ---------------------------------------------------------------------------
# enumeration


class EnumeratedGroup:
    """All elements of a standard parabolic subgroup, or of a ball in it.

    Elements are numbered ``0..N-1`` in order of length (0 is the identity).
    ``right[x][i]`` is the number of ``x * gens[i]`` and is -1 only on the
    outer sphere of an incomplete ball.
    """

    def __init__(self, M, gens, words, right, lengths, descents, complete):
        self.matrix = M
        self.gens = gens
        self.subset = tuple(M.names[g] for g in gens)
        self.words = words
        self.right = right
        self.lengths = lengths
        self.descents = descents
        self.complete = complete
        self.index = {w: i for i, w in enumerate(words)}
        self._local = {g: i for i, g in enumerate(gens)}
        self._left = None

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return (Element(self.matrix, w) for w in self.words)

    def element(self, i: int) -> Element:
        return Element(self.matrix, self.words[i])

    def id_of(self, x) -> int:
        word = x.word if isinstance(x, Element) else tuple(x)
        return self.index[word]

    def contains(self, x: Element) -> bool:
        return x.word in self.index

    def walk(self, start: int, word: Sequence[int]) -> int:
        """Right-multiply element ``start`` by a word of global indices."""
        x = start
        for g in word:
            x = self.right[x][self._local[g]]
            if x < 0:
                raise CapExceeded(len(self), "ball")
        return x

    def mul(self, x: int, y: int) -> int:
        return self.walk(x, self.words[y])

    def inv(self, x: int) -> int:
        return self.walk(0, self.words[x][::-1])

    def left_tables(self):
        """``left[i][x]`` is the number of ``gens[i] * x``; needs a complete group."""
        if self._left is None:
            n = len(self.gens)
            N = len(self.words)
            left = [[0] * N for _ in range(n)]
            for i in range(n):
                row = left[i]
                row[0] = self.right[0][i]
                for v in range(1, N):
                    last = self._local[self.words[v][-1]]
                    parent = self.right[v][last]
                    row[v] = self.right[row[parent]][last]
            self._left = left
        return self._left

    @property
    def longest(self) -> Element:
        if not self.complete:
            raise ValueError("longest element needs a finite, completely enumerated group")
        top = self.lengths[-1]
        tops = [i for i in range(len(self) - 1, -1, -1) if self.lengths[i] == top]
        if len(tops) != 1:
            raise AssertionError("maximal length element is not unique")
        return self.element(tops[0])

    def center_ids(self) -> list[int]:
        left = self.left_tables()
        n = len(self.gens)
        return [
            z for z in range(len(self))
            if all(self.right[z][i] == left[i][z] for i in range(n))
        ]

    @property
    def center(self) -> list[Element]:
        return [self.element(z) for z in self.center_ids()]

    def reflection_ids(self) -> list[int]:
        """Conjugates of the generators, found by closing under conjugation."""
        left = self.left_tables()
        n = len(self.gens)
        seen = {self.right[0][i] for i in range(n)}
        stack = list(seen)
        while stack:
            r = stack.pop()
            for i in range(n):
                c = left[i][self.right[r][i]]
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return sorted(seen)

    def closure(self, ids: Iterable[int]) -> list[int]:
        """Subgroup generated by the given elements (right Cayley closure)."""
        ids = list(ids)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in ids:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)


# braids longer than this use memoized descent chains; short ones are walked
_SHORT_BRAID = 6


def _alternating_descent(w, s, t, limit, descents, right, chains):
    """Length, capped at limit, of the longest chain w > ws > wst > ... of descents."""
    path = []
    u, c, d = w, s, t
    while len(path) < limit and (u, c, d) not in chains and descents[u] >> c & 1:
        path.append((u, c, d))
        u, c, d = right[u][c], d, c
    if len(path) == limit:
        # the walk was cut off, so only its start has a known capped value
        chains[path[0]] = limit
        return limit
    tail = chains.get((u, c, d), 0)
    for k, key in enumerate(reversed(path), start=1):
        chains[key] = min(k + tail, limit)
    return min(len(path) + tail, limit)


def _grow(M: CoxeterMatrix, gens, cap, radius):
    orders = [[M.orders[g][h] for h in gens] for g in gens]
    n = len(gens)
    words = [()]
    right = [[-1] * n]
    lengths = [0]
    descents = [0]
    chains = {}
    current = [0]
    level = 0
    while current and (radius is None or level < radius):
        nxt = []
        for w in current:
            dw = descents[w]
            rw = right[w]
            for t in range(n):
                if dw >> t & 1 or rw[t] >= 0:
                    continue
                v = len(words)
                if v >= cap:
                    raise CapExceeded(cap)
                rv = [-1] * n
                rw[t] = v
                rv[t] = w
                dv = 1 << t
                for s in range(n):
                    m = orders[s][t]
                    if s == t or m == INF:
                        continue
                    if m > _SHORT_BRAID:
                        p = _alternating_descent(w, s, t, m - 1, descents, right, chains)
                        u, c = w, s
                        if p == m - 1:
                            for _ in range(p):
                                u, c = right[u][c], t if c == s else s
                    else:
                        u, c, p = w, s, 0
                        while p < m - 1 and descents[u] >> c & 1:
                            u = right[u][c]
                            p += 1
                            c = t if c == s else s
                    if p == m - 1:
                        dv |= 1 << s
                        other = u
                        for x in _alternating(m - 1, t, s):
                            other = right[other][x]
                        right[other][s] = v
                        rv[s] = other
                words.append(None)
                right.append(rv)
                lengths.append(level + 1)
                descents.append(dv)
                nxt.append(v)
        for v in nxt:
            dv, rv = descents[v], right[v]
            words[v] = min(words[rv[t]] + (gens[t],) for t in range(n) if dv >> t & 1)
        current = nxt
        level += 1
    complete = not current
    return EnumeratedGroup(M, tuple(gens), words, right, lengths, descents, complete)


@lru_cache(maxsize=128)
def _enumerate_cached(M, gens, cap):
    return _grow(M, gens, cap, None)


def enumerate_group(M: CoxeterMatrix, J: Iterable[str] | None = None,
                    cap: int = DEFAULT_MAX_ENUM) -> EnumeratedGroup:
    """All elements of the parabolic subgroup generated by J (default: all of S).

    Raises CapExceeded when the subgroup has more than ``cap`` elements,
    which is also how an infinite parabolic announces itself.
    """
    gens = M.indices(M.names if J is None else J)
    return _enumerate_cached(M, gens, cap)


def ball(M: CoxeterMatrix, radius: int, J: Iterable[str] | None = None,
         cap: int = DEFAULT_MAX_ENUM) -> EnumeratedGroup:
    """Elements of length at most ``radius``; complete if the group is smaller."""
    gens = M.indices(M.names if J is None else J)
    return _grow(M, gens, cap, radius)


def longest_element(M: CoxeterMatrix, J: Iterable[str], cap: int = DEFAULT_MAX_ENUM) -> Element:
    return enumerate_group(M, J, cap).longest


def center(M: CoxeterMatrix, J: Iterable[str], cap: int = DEFAULT_MAX_ENUM) -> list[Element]:
    return enumerate_group(M, J, cap).center


# ---------------------------------------------------------------------------
# orders, reflections, parity


@dataclass(frozen=True)
class OrderResult:
    value: int | None
    cap: int
    certified_infinite: str | None = None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    @property
    def is_infinite(self) -> bool:
        return self.certified_infinite is not None

    def __str__(self):
        if self.value is not None:
            return str(self.value)
        if self.certified_infinite:
            return f"inf[{self.certified_infinite}]"
        return f">{self.cap}"


def support(x: Element) -> frozenset:
    return frozenset(x.letters)


def element_order(x: Element, cap: int = DEFAULT_ORDER_CAP) -> OrderResult:
    """Smallest k <= cap with x^k = e."""
    M = x.matrix
    supp = support(x)
    if not supp:
        return OrderResult(1, cap)
    if irreducible_components(M, supp).is_spherical:
        G = enumerate_group(M, supp)
        z = G.id_of(x)
        p, k = z, 1
        while p != 0:
            if k >= cap:
                return OrderResult(None, cap)
            p = G.mul(p, z)
            k += 1
        return OrderResult(k, cap)
    rw = _rewriter(M)
    p = x.word
    for k in range(2, cap + 1):
        p = rw.reduced(x.word, start=p)
        if not p:
            return OrderResult(k, cap)
    return OrderResult(None, cap)


def product_order(x: Element, y: Element, cap: int = DEFAULT_ORDER_CAP) -> OrderResult:
    """Order of ``x*y``; never claims infinity, only AboveCap."""
    _same(x, y)
    return element_order(multiply(x, y), cap)


def is_reflection_in(M: CoxeterMatrix, J: Iterable[str], x: Element,
                     cap: int = DEFAULT_MAX_ENUM) -> bool:
    """Whether x is a conjugate, inside <J>, of a generator in J."""
    G = enumerate_group(M, J, cap)
    if not G.contains(x):
        raise ValueError(f"{x} is not in the parabolic subgroup <{', '.join(G.subset)}>")
    return G.id_of(x) in set(G.reflection_ids())


def parity_character(M: CoxeterMatrix, s: str, word) -> int:
    """Image of a word under the homomorphism sending s to -1 and the rest to +1."""
    cls = next(c for c in odd_classes(M) if s in c)
    if cls != {s}:
        raise OddClassNotSingleton(f"{s} is conjugate to {sorted(cls - {s})}")
    i = M.index(s)
    return -1 if parse_word(M, word).count(i) % 2 else 1
