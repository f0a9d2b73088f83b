"""Deciding whether a right-angled generator is an intrinsic reflection.

For a right-angled ``s`` the answer reads off the diagram: ``s`` fails to
be intrinsic exactly when some ``s``-component is of (-1)-type or some
``a`` in ``s^perp`` is a blowing-down generator.  Every verdict carries
the facts it rests on so that reports can be audited.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .diagram import (
    INF,
    CoxeterMatrix,
    ComponentDecomposition,
    SphericalType,
    connected_parts,
    irreducible_components,
    is_minus_one_type,
    is_odd_d,
    is_odd_dihedral,
    neighborhoods,
)
from .errors import NotRightAngled, SystemNotRightAngled
from .words import DEFAULT_MAX_ENUM, enumerate_group, Element


@dataclass(frozen=True)
class RightAngledContext:
    matrix: CoxeterMatrix = field(repr=False)
    s: str
    s_perp: frozenset
    s_infinity: frozenset
    components_of_perp: ComponentDecomposition

    def infinity_of(self, x: str) -> frozenset:
        return frozenset(t for t in self.matrix.names if self.matrix.m(x, t) == INF)

    def component_of(self, a: str) -> tuple[frozenset, object]:
        for subset, t in self.components_of_perp:
            if a in subset:
                return subset, t
        raise ValueError(f"{a} is not in s^perp of {self.s}")


def build_context(M: CoxeterMatrix, s: str) -> RightAngledContext:
    perp, infinity = neighborhoods(M, s)
    for t in M.names:
        if t != s and t not in perp and t not in infinity:
            raise NotRightAngled(s, t, M.m(s, t))
    order = sorted(perp, key=M.index)
    return RightAngledContext(M, s, perp, infinity, irreducible_components(M, order))


def s_components(ctx: RightAngledContext) -> list[tuple[frozenset, SphericalType]]:
    """Irreducible spherical components of the system on s^perp."""
    return [(c, t) for c, t in ctx.components_of_perp if isinstance(t, SphericalType)]


@dataclass(frozen=True)
class BlowDownCandidate:
    a: str
    b: str
    component: frozenset
    component_type: SphericalType
    proper: bool
    rho: Element = field(repr=False, compare=False)

    def to_dict(self, M: CoxeterMatrix | None = None):
        key = M.index if M is not None else None
        return {
            "a": self.a,
            "b": self.b,
            "component": sorted(self.component, key=key),
            "component_type": str(self.component_type),
            "proper": self.proper,
            "rho": str(self.rho),
        }


@dataclass(frozen=True)
class Rejection:
    a: str
    reason: str

    def __bool__(self):
        return False


def check_bdg1(ctx: RightAngledContext, a: str, cap: int = DEFAULT_MAX_ENUM):
    """Return a BlowDownCandidate, or a falsy Rejection explaining the failure."""
    M = ctx.matrix
    C, ctype = ctx.component_of(a)
    if not (is_odd_dihedral(ctype) or is_odd_d(ctype)):
        return Rejection(a, f"component of type {ctype} is neither I2(2k+1) nor D(2k+1)")
    G = enumerate_group(M, C, cap)
    rho = G.longest
    rho_id = G.id_of(rho)
    image = G.mul(G.mul(rho_id, G.id_of((M.index(a),))), rho_id)
    word = G.words[image]
    if len(word) != 1:
        raise AssertionError("conjugation by the longest element must permute generators")
    b = M.names[word[0]]
    if b == a:
        return Rejection(a, f"rho fixes {a}")
    proper = ctx.s_infinity <= ctx.infinity_of(b)
    return BlowDownCandidate(a, b, C, ctype, proper, rho)


@dataclass(frozen=True)
class Bdg2Result:
    ok: bool
    witnesses: tuple = ()
    path: tuple = ()

    def __bool__(self):
        return self.ok


def bdg2_components(vertices: Iterable, finite_edge, a_infinity, b_infinity,
                    labels=("a", "b")) -> Bdg2Result:
    """Component form of the path condition on s^infinity.

    Each connected component (edges: finite-order pairs) must lie inside
    ``a_infinity`` or inside ``b_infinity``.
    """
    vertices = list(vertices)
    witnesses = []
    for K in connected_parts(vertices, finite_edge):
        if set(K) <= a_infinity:
            witnesses.append((tuple(K), labels[0]))
        elif set(K) <= b_infinity:
            witnesses.append((tuple(K), labels[1]))
        else:
            start = next(u for u in K if u not in b_infinity)
            return Bdg2Result(False, tuple(witnesses), _shortest_path(K, finite_edge, start, a_infinity))
    return Bdg2Result(True, tuple(witnesses))


def _shortest_path(K, finite_edge, start, a_infinity):
    prev = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x not in a_infinity:
            path = [x]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return tuple(reversed(path))
        for y in K:
            if y not in prev and y != x and finite_edge(x, y):
                prev[y] = x
                queue.append(y)
    raise AssertionError("component was not connected")


def check_bdg2(ctx: RightAngledContext, a: str, b: str) -> Bdg2Result:
    M = ctx.matrix
    verts = sorted(ctx.s_infinity, key=M.index)
    return bdg2_components(
        verts,
        lambda u, v: M.m(u, v) != INF,
        ctx.infinity_of(a),
        ctx.infinity_of(b),
        labels=(a, b),
    )


def find_blowdown_generators(ctx: RightAngledContext, cap: int = DEFAULT_MAX_ENUM):
    found = []
    for a in sorted(ctx.s_perp, key=ctx.matrix.index):
        cand = check_bdg1(ctx, a, cap)
        if cand and check_bdg2(ctx, cand.a, cand.b):
            found.append(cand)
    return found


@dataclass(frozen=True)
class IntrinsicVerdict:
    s: str
    intrinsic: bool
    reason: str
    component: tuple = ()
    component_type: str | None = None
    candidate: BlowDownCandidate | None = None
    certificates: tuple = ()

    @property
    def verdict(self) -> str:
        return "Intrinsic" if self.intrinsic else "NotIntrinsic"


def decide_intrinsic(M: CoxeterMatrix, s: str, cap: int = DEFAULT_MAX_ENUM) -> IntrinsicVerdict:
    ctx = build_context(M, s)
    key = M.index
    comps = s_components(ctx)
    certs = [{
        "fact": "partition",
        "s_perp": sorted(ctx.s_perp, key=key),
        "s_infinity": sorted(ctx.s_infinity, key=key),
    }, {
        "fact": "s_components",
        "components": [
            {"generators": sorted(c, key=key), "type": str(t), "minus_one_type": is_minus_one_type(t)}
            for c, t in comps
        ],
    }]
    for c, t in comps:
        if is_minus_one_type(t):
            return IntrinsicVerdict(
                s, False, "MinusOneComponent", tuple(sorted(c, key=key)), str(t),
                certificates=tuple(certs),
            )
    rejected = []
    for a in sorted(ctx.s_perp, key=key):
        cand = check_bdg1(ctx, a, cap)
        if not cand:
            rejected.append({"generator": a, "bdg1": cand.reason})
            continue
        bdg2 = check_bdg2(ctx, cand.a, cand.b)
        if bdg2:
            certs.append({
                "fact": "blowing_down_generator",
                "candidate": cand.to_dict(M),
                "bdg2_components": [
                    {"component": list(k), "inside_infinity_of": x} for k, x in bdg2.witnesses
                ],
            })
            return IntrinsicVerdict(
                s, False, "BlowDownGenerator", tuple(sorted(cand.component, key=key)),
                str(cand.component_type), cand, tuple(certs),
            )
        rejected.append({"generator": a, "b": cand.b, "bdg2_path": list(bdg2.path)})
    certs.append({"fact": "no_blowing_down_generator", "rejections": rejected})
    return IntrinsicVerdict(s, True, "AllChecksPassed", certificates=tuple(certs))


def has_a1_direct_factor(M: CoxeterMatrix, J: Iterable[str]) -> bool:
    J = set(J)
    return any(all(M.m(t, u) == 2 for u in J if u != t) for t in J)


def right_angled_system_criterion(M: CoxeterMatrix, s: str) -> bool:
    """Intrinsic iff the system on s^perp has no direct factor of type A1."""
    if not M.is_right_angled():
        raise SystemNotRightAngled("every label must be 2 or inf")
    perp, _ = neighborhoods(M, s)
    return not has_a1_direct_factor(M, perp)
