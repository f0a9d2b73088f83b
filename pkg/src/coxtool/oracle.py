"""Brute-force ground truth in finite Coxeter groups.

Everything here enumerates the whole group and searches exhaustively.
Nothing imports the decision procedure or the rewrites, so the results
can be used to check them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diagram import CoxeterMatrix, irreducible_components
from .errors import HypothesisViolated, NotInvolution
from .words import DEFAULT_MAX_ENUM, Element, EnumeratedGroup, enumerate_group


@dataclass
class VerificationReport:
    claim: str
    status: str  # "Verified", "Refuted" or "Skipped"
    evidence: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "Verified"

    def to_dict(self):
        out = {"claim": self.claim, "status": self.status, "evidence": self.evidence}
        if self.reason:
            out["reason"] = self.reason
        return out


def _order_in(G: EnumeratedGroup, z: int) -> int:
    p, k = z, 1
    while p != 0:
        p = G.mul(p, z)
        k += 1
    return k


def verify_coxeter_generating_set(M: CoxeterMatrix, gs, expected: CoxeterMatrix,
                                  cap: int = DEFAULT_MAX_ENUM) -> VerificationReport:
    """Check that the words of ``gs`` form a Coxeter generating set with matrix ``expected``.

    Relations plus equal group orders imply the natural surjection from the
    Coxeter group of ``expected`` onto W is an isomorphism.
    """
    claim = f"coxeter_generating_set:{'/'.join(gs.names)}"
    G = enumerate_group(M, None, cap)
    ids = [G.id_of(gs.element(x)) for x in gs.names]
    evidence = {"group_order": len(G)}
    if len(expected) != len(ids):
        return VerificationReport(claim, "Refuted", {**evidence, "rank": len(ids),
                                                     "expected_rank": len(expected)})
    for i, j in combinations(range(len(ids)), 2):
        got = _order_in(G, G.mul(ids[i], ids[j]))
        want = expected.orders[i][j]
        if got != want:
            return VerificationReport(claim, "Refuted", {
                **evidence, "pair": [gs.names[i], gs.names[j]], "order": got, "expected": want})
    for i, x in enumerate(ids):
        if x == 0 or G.mul(x, x) != 0:
            return VerificationReport(claim, "Refuted", {**evidence, "not_involution": gs.names[i]})
    closure = G.closure(ids)
    evidence["closure_order"] = len(closure)
    if len(closure) != len(G):
        return VerificationReport(claim, "Refuted", evidence)
    dec = irreducible_components(expected)
    evidence["expected_type"] = " x ".join(str(t) for t in dec.types)
    evidence["expected_order"] = dec.order if dec.is_spherical else "inf"
    if dec.order != len(G):
        return VerificationReport(claim, "Refuted", evidence)
    return VerificationReport(claim, "Verified", evidence)


def reflection_set(M: CoxeterMatrix, cap: int = DEFAULT_MAX_ENUM) -> list[Element]:
    """All conjugates w^-1 s w, computed over every w in W."""
    G = enumerate_group(M, None, cap)
    found = set()
    for w in range(len(G)):
        wi = G.inv(w)
        for g in G.gens:
            found.add(G.mul(G.walk(wi, (g,)), w))
    return [G.element(i) for i in sorted(found)]


def _in_parabolic(word, J_idx) -> bool:
    return set(word) <= J_idx


def parabolic_closure(M: CoxeterMatrix, X, cap: int = DEFAULT_MAX_ENUM):
    """Smallest parabolic subgroup w^-1 <J> w containing X, as ``(J, w)``."""
    G = enumerate_group(M, None, cap)
    xs = [G.id_of(x) for x in X]
    best = None
    for r in range(len(M) + 1):
        for J in combinations(range(len(M)), r):
            J_idx = set(J)
            size = len(enumerate_group(M, [M.names[j] for j in J], cap))
            if best is not None and size >= best[0]:
                continue
            for w in range(len(G)):
                wi = G.inv(w)
                if all(_in_parabolic(G.words[G.mul(G.mul(w, x), wi)], J_idx) for x in xs):
                    best = (size, J, w)
                    break
    _, J, w = best
    return frozenset(M.names[j] for j in J), G.element(w)


def _longest_is_central(G: EnumeratedGroup) -> bool:
    top = len(G) - 1
    return top in G.center_ids()


def minus_one_form(M: CoxeterMatrix, r: Element, cap: int = DEFAULT_MAX_ENUM):
    """Find ``(J, v)`` with J of (-1)-type and ``v^-1 r v`` the longest element of J."""
    G = enumerate_group(M, None, cap)
    x = G.id_of(r)
    if x == 0 or G.mul(x, x) != 0:
        raise NotInvolution(f"{r} is not an involution")
    for k in range(1, len(M) + 1):
        for J in combinations(M.names, k):
            H = enumerate_group(M, J, cap)
            if not _longest_is_central(H):
                continue
            rho = G.id_of(H.longest)
            for v in range(len(G)):
                if G.mul(G.mul(G.inv(v), x), v) == rho:
                    return frozenset(J), G.element(v)
    raise AssertionError("no (-1)-type form found")


def perp_of(M: CoxeterMatrix, J) -> frozenset:
    J = set(J)
    return frozenset(t for t in M.names if t not in J and all(M.m(t, j) == 2 for j in J))


def verify_normalizer_formula(M: CoxeterMatrix, J, cap: int = DEFAULT_MAX_ENUM) -> VerificationReport:
    """Compare the normalizer of <J> with <J> x <J^perp> by exhaustive search."""
    J = frozenset(J)
    G = enumerate_group(M, None, cap)
    for t in M.names:
        if t in J:
            continue
        if any(M.m(t, j) != 2 for j in J):
            raise HypothesisViolated(f"{t} generates a finite group with J but does not commute with it")
    J_idx = set(M.indices(J))
    gens = [G.id_of((M.index(j),)) for j in J]
    normalizer = []
    for w in range(len(G)):
        wi = G.inv(w)
        if all(_in_parabolic(G.words[G.mul(G.mul(wi, g), w)], J_idx) for g in gens):
            normalizer.append(w)
    allowed = set(M.indices(J | perp_of(M, J)))
    product = [w for w in range(len(G)) if _in_parabolic(G.words[w], allowed)]
    evidence = {"normalizer_order": len(normalizer), "product_order": len(product),
                "J": sorted(J, key=M.index), "J_perp": sorted(perp_of(M, J), key=M.index)}
    status = "Verified" if normalizer == product else "Refuted"
    return VerificationReport(f"normalizer:{'/'.join(evidence['J'])}", status, evidence)


def express(M: CoxeterMatrix, gs, x: Element, cap: int = DEFAULT_MAX_ENUM) -> tuple[str, ...]:
    """A shortest word in the new generators of ``gs`` that evaluates to x."""
    G = enumerate_group(M, None, cap)
    target = G.id_of(x)
    ids = [(name, G.id_of(gs.element(name))) for name in gs.names]
    prev = {0: None}
    frontier = [0]
    while target not in prev:
        if not frontier:
            raise ValueError(f"{x} is not generated by {gs.names}")
        nxt = []
        for y in frontier:
            for name, g in ids:
                z = G.mul(y, g)
                if z not in prev:
                    prev[z] = (y, name)
                    nxt.append(z)
        frontier = nxt
    out = []
    while prev[target] is not None:
        target, name = prev[target]
        out.append(name)
    return tuple(reversed(out))

