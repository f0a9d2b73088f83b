"""Coxeter diagrams: parsing, components, and the spherical classification.

Orders are Python ints, except infinity which is always the float
``INF`` (``math.inf``).  Subsets of generators are passed around as
iterables of generator names and returned as frozensets of names.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from math import factorial
from typing import Iterable

from .errors import DiagramParseError, NotIrreducibleError, UnknownGeneratorError

INF = math.inf

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


def format_order(m) -> str:
    return "inf" if m == INF else str(m)


def parse_order(token: str):
    if token == "inf":
        return INF
    if not re.fullmatch(r"[0-9]+", token):
        raise ValueError(f"order label must be an integer or 'inf', got {token!r}")
    return int(token)


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric order matrix over a finite, totally ordered generator set."""

    names: tuple[str, ...]
    orders: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("generator names must be unique")
        for name in self.names:
            if not _NAME.match(name):
                raise ValueError(f"bad generator name {name!r}")
        if len(self.orders) != n or any(len(row) != n for row in self.orders):
            raise ValueError("order matrix has the wrong shape")
        for i in range(n):
            if self.orders[i][i] != 1:
                raise ValueError(f"m({self.names[i]},{self.names[i]}) must be 1")
            for j in range(i + 1, n):
                m = self.orders[i][j]
                if m != self.orders[j][i]:
                    raise ValueError("order matrix must be symmetric")
                if not (m == INF or (isinstance(m, int) and m >= 2)):
                    raise ValueError(
                        f"m({self.names[i]},{self.names[j]}) = {m!r} must be >= 2 or inf"
                    )

    @classmethod
    def from_edges(cls, names, edges=(), default=2) -> "CoxeterMatrix":
        names = tuple(names)
        index = {name: i for i, name in enumerate(names)}
        rows = [[1 if i == j else default for j in range(len(names))] for i in range(len(names))]
        for x, y, m in edges:
            i, j = index[x], index[y]
            rows[i][j] = rows[j][i] = m
        return cls(names, tuple(tuple(r) for r in rows))

    @cached_property
    def _index(self):
        return {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGeneratorError(name) from None

    def indices(self, subset: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted({self.index(x) for x in subset}))

    def m(self, x, y):
        i = x if isinstance(x, int) else self.index(x)
        j = y if isinstance(y, int) else self.index(y)
        return self.orders[i][j]

    def restrict(self, subset: Iterable[str]) -> "CoxeterMatrix":
        idx = self.indices(subset)
        return CoxeterMatrix(
            tuple(self.names[i] for i in idx),
            tuple(tuple(self.orders[i][j] for j in idx) for i in idx),
        )

    def edges(self):
        """Yield ``(x, y, m)`` for every pair with ``m != 2``."""
        n = len(self.names)
        for i in range(n):
            for j in range(i + 1, n):
                if self.orders[i][j] != 2:
                    yield self.names[i], self.names[j], self.orders[i][j]

    def to_text(self) -> str:
        lines = ["generators " + " ".join(self.names)]
        lines += [f"edge {x} {y} {format_order(m)}" for x, y, m in self.edges()]
        return "\n".join(lines) + "\n"

    def is_right_angled(self) -> bool:
        return all(m in (1, 2, INF) for row in self.orders for m in row)


def parse_diagram(text: str) -> CoxeterMatrix:
    """Parse the line-oriented diagram format into a validated matrix."""
    names = None
    default = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        keyword, args = words[0], words[1:]
        if names is None and keyword != "generators":
            raise DiagramParseError("first directive must be 'generators'", lineno)
        if keyword == "generators":
            if names is not None:
                raise DiagramParseError("'generators' given twice", lineno)
            for name in args:
                if not _NAME.match(name):
                    raise DiagramParseError(f"bad generator name {name!r}", lineno)
            dup = {x for x in args if args.count(x) > 1}
            if dup:
                raise DiagramParseError(f"duplicate generator {sorted(dup)[0]!r}", lineno)
            names = tuple(args)
        elif keyword == "default":
            if default is not None:
                raise DiagramParseError("'default' given twice", lineno)
            if len(args) != 1:
                raise DiagramParseError("'default' takes one label", lineno)
            default = _label(args[0], lineno)
        elif keyword == "edge":
            if len(args) != 3:
                raise DiagramParseError("'edge' takes two names and a label", lineno)
            x, y, token = args
            for name in (x, y):
                if name not in names:
                    raise DiagramParseError(f"unknown generator {name!r}", lineno)
            if x == y:
                raise DiagramParseError(f"edge joins {x!r} to itself", lineno)
            edges.append((x, y, _label(token, lineno), lineno))
        else:
            raise DiagramParseError(f"unknown directive {keyword!r}", lineno)
    if names is None:
        raise DiagramParseError("missing 'generators' line")
    seen = {}
    for x, y, m, lineno in edges:
        key = frozenset((x, y))
        if key in seen and seen[key] != m:
            raise DiagramParseError(f"conflicting labels for {x} {y}", lineno)
        seen[key] = m
    return CoxeterMatrix.from_edges(
        names, [(x, y, m) for x, y, m, _ in edges], 2 if default is None else default
    )


def _label(token, lineno):
    try:
        m = parse_order(token)
    except ValueError as exc:
        raise DiagramParseError(str(exc), lineno) from None
    if m != INF and m < 2:
        raise DiagramParseError(f"label {m} < 2 for distinct generators", lineno)
    return m


# ---------------------------------------------------------------------------
# components


def _check_subset(M, J):
    J = list(J)
    for x in J:
        M.index(x)
    return J


def connected_parts(vertices, adjacent):
    """Connected components of a graph given by a vertex list and a predicate.

    Components come out in order of their first vertex; vertices inside a
    component keep the input order.
    """
    vertices = list(vertices)
    seen = set()
    parts = []
    for v in vertices:
        if v in seen:
            continue
        seen.add(v)
        part, stack = [v], [v]
        while stack:
            x = stack.pop()
            for y in vertices:
                if y not in seen and adjacent(x, y):
                    seen.add(y)
                    part.append(y)
                    stack.append(y)
        order = {x: i for i, x in enumerate(vertices)}
        parts.append(sorted(part, key=order.__getitem__))
    return parts


@dataclass(frozen=True)
class SphericalType:
    family: str
    rank: int
    edge_label: int | None = None

    def __str__(self):
        if self.family == "I2":
            return f"I2({self.edge_label})"
        return f"{self.family}{self.rank}"

    @property
    def order(self) -> int:
        """Order of the Coxeter group of this type."""
        n = self.rank
        if self.family == "A":
            return factorial(n + 1)
        if self.family == "C":
            return 2**n * factorial(n)
        if self.family == "D":
            return 2 ** (n - 1) * factorial(n)
        if self.family == "I2":
            return 2 * self.edge_label
        return _EXCEPTIONAL_ORDERS[str(self)]

    @property
    def reflection_count(self) -> int:
        """Number of reflections, i.e. of positive roots."""
        n = self.rank
        if self.family == "A":
            return n * (n + 1) // 2
        if self.family == "C":
            return n * n
        if self.family == "D":
            return n * (n - 1)
        if self.family == "I2":
            return self.edge_label
        return _EXCEPTIONAL_REFLECTIONS[str(self)]

    @property
    def dihedral_label(self) -> int | None:
        """The label m when this type is a rank-2 type I2(m), else None."""
        if self.rank != 2:
            return None
        return {"A": 3, "C": 4, "I2": self.edge_label}[self.family]


_EXCEPTIONAL_ORDERS = {
    "E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400,
}
_EXCEPTIONAL_REFLECTIONS = {"E6": 36, "E7": 63, "E8": 120, "F4": 24, "H3": 15, "H4": 60}


class NonSpherical:
    """Marker for an irreducible component with infinite parabolic subgroup."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NonSpherical"

    __str__ = __repr__

    def __reduce__(self):
        return (NonSpherical, ())


NON_SPHERICAL = NonSpherical()


def spherical_type(family: str, rank: int = 2, edge_label: int | None = None) -> SphericalType:
    """Build a canonical SphericalType, resolving the classical coincidences."""
    if family == "I2":
        if edge_label is None or edge_label < 3:
            raise ValueError("I2(m) needs m >= 3")
        if edge_label == 3:
            return SphericalType("A", 2)
        if edge_label == 4:
            return SphericalType("C", 2)
        return SphericalType("I2", 2, edge_label)
    if family == "D" and rank == 3:
        return SphericalType("A", 3)
    if family == "C" and rank == 1:
        return SphericalType("A", 1)
    valid = {
        "A": rank >= 1,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "H": rank in (3, 4),
    }
    if not valid.get(family, False):
        raise ValueError(f"no spherical type {family}{rank}")
    return SphericalType(family, rank)


@dataclass(frozen=True)
class ComponentDecomposition:
    subsets: tuple[frozenset, ...]
    types: tuple

    def __iter__(self):
        return iter(zip(self.subsets, self.types))

    def __len__(self):
        return len(self.subsets)

    @property
    def is_spherical(self) -> bool:
        return all(t is not NON_SPHERICAL for t in self.types)

    @property
    def order(self):
        if not self.is_spherical:
            return INF
        return math.prod(t.order for t in self.types)


def irreducible_components(M: CoxeterMatrix, J: Iterable[str] | None = None) -> ComponentDecomposition:
    """Split J into irreducible components and classify each of them."""
    J = list(M.names) if J is None else _check_subset(M, J)
    J = sorted(set(J), key=M.index)
    parts = connected_parts(J, lambda x, y: M.m(x, y) != 2)
    subsets = tuple(frozenset(p) for p in parts)
    return ComponentDecomposition(subsets, tuple(classify_spherical(M, p) for p in parts))


def classify_spherical(M: CoxeterMatrix, C: Iterable[str]):
    """Match an irreducible generator subset against the finite-type diagrams."""
    C = sorted(set(_check_subset(M, C)), key=M.index)
    if not C:
        raise NotIrreducibleError("empty subset is not irreducible")
    if len(connected_parts(C, lambda x, y: M.m(x, y) != 2)) != 1:
        raise NotIrreducibleError(f"{C} is not irreducible")
    n = len(C)
    if n == 1:
        return SphericalType("A", 1)
    edges = [(x, y, M.m(x, y)) for i, x in enumerate(C) for y in C[i + 1:] if M.m(x, y) != 2]
    if any(m == INF for _, _, m in edges):
        return NON_SPHERICAL
    if n == 2:
        return spherical_type("I2", edge_label=edges[0][2])
    if len(edges) != n - 1:
        return NON_SPHERICAL
    degree = {x: 0 for x in C}
    for x, y, _ in edges:
        degree[x] += 1
        degree[y] += 1
    heavy = [(x, y, m) for x, y, m in edges if m > 3]
    if max(degree.values()) > 3 or any(m > 5 for _, _, m in heavy) or len(heavy) > 1:
        return NON_SPHERICAL
    branch = [x for x in C if degree[x] == 3]
    if not heavy:
        if not branch:
            return SphericalType("A", n)
        if len(branch) > 1:
            return NON_SPHERICAL
        arms = sorted(_arm_lengths(C, edges, branch[0]))
        if arms[:2] == [1, 1]:
            return SphericalType("D", n)
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return SphericalType("E", n)
        return NON_SPHERICAL
    if branch:
        return NON_SPHERICAL
    x, y, m = heavy[0]
    at_end = degree[x] == 1 or degree[y] == 1
    if m == 4:
        if at_end:
            return SphericalType("C", n)
        if n == 4:
            return SphericalType("F", 4)
        return NON_SPHERICAL
    if at_end and n in (3, 4):
        return SphericalType("H", n)
    return NON_SPHERICAL


def _arm_lengths(C, edges, center):
    nbrs = {x: [] for x in C}
    for x, y, _ in edges:
        nbrs[x].append(y)
        nbrs[y].append(x)
    lengths = []
    for start in nbrs[center]:
        prev, cur, k = center, start, 1
        while len(nbrs[cur]) == 2:
            prev, cur = cur, next(z for z in nbrs[cur] if z != prev)
            k += 1
        lengths.append(k)
    return lengths


# ---------------------------------------------------------------------------
# tables


def is_minus_one_type(t: SphericalType) -> bool:
    """True when the longest element is central (nontrivial center)."""
    if t.family == "A":
        return t.rank == 1
    if t.family == "D":
        return t.rank % 2 == 0
    if t.family == "E":
        return t.rank in (7, 8)
    if t.family == "I2":
        return t.edge_label % 2 == 0
    return t.family in ("C", "F", "H")


def is_minus_one_subset(M: CoxeterMatrix, J: Iterable[str]) -> bool:
    """A subset is of (-1)-type when every irreducible component is."""
    dec = irreducible_components(M, J)
    return dec.is_spherical and all(is_minus_one_type(t) for t in dec.types)


def is_odd_dihedral(t) -> bool:
    """Matches I2(2k+1) for k >= 1, so A2 counts as I2(3)."""
    label = t.dihedral_label if isinstance(t, SphericalType) else None
    return label is not None and label % 2 == 1


def is_odd_d(t) -> bool:
    """Matches D_{2k+1} for k >= 1, so A3 counts as D3."""
    if not isinstance(t, SphericalType):
        return False
    if t.family == "A" and t.rank == 3:
        return True
    return t.family == "D" and t.rank % 2 == 1


def spherical_intrinsic_table(t: SphericalType) -> bool:
    """Whether the generators of an irreducible finite type are intrinsic reflections."""
    if not is_minus_one_type(t) and t != SphericalType("A", 5):
        return True
    if t in (SphericalType("A", 1), SphericalType("H", 3), SphericalType("E", 7)):
        return True
    label = t.dihedral_label
    return label is not None and label % 4 == 0


def neighborhoods(M: CoxeterMatrix, s: str):
    """Return ``(s_perp, s_infinity)`` as frozensets of names."""
    M.index(s)
    perp = frozenset(t for t in M.names if t != s and M.m(s, t) == 2)
    infinity = frozenset(t for t in M.names if M.m(s, t) == INF)
    return perp, infinity


def odd_classes(M: CoxeterMatrix) -> list[frozenset]:
    """Classes of generators joined by odd finite labels (they are conjugate)."""
    def odd(x, y):
        m = M.m(x, y)
        return m != INF and m % 2 == 1 and x != y

    return [frozenset(p) for p in connected_parts(M.names, odd)]
