"""Generating-set rewrites that remove a right-angled generator from the reflections.

Each rewrite returns a :class:`GeneratingSet`: named words over the original
generators together with the order of every pair of new generators.  An
order is either computed (finite), certified infinite by one of two rules,
or left open above the cap:

``R1``
    the entry is an infinite label of an input matrix;
``R2``
    ``(s r) u`` with ``r`` an involution of ``<s^perp>`` and ``u`` in
    ``s^infinity`` always has infinite order.  The hypotheses are checked
    on the words before the stamp is applied.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    INF,
    CoxeterMatrix,
    SphericalType,
    connected_parts,
    is_minus_one_type,
    is_odd_d,
    is_odd_dihedral,
    neighborhoods,
    spherical_type,
)
from .errors import CandidateInvalid, CandidateNotProper, ComponentNotMinusOneType
from .intrinsic import (
    BlowDownCandidate,
    build_context,
    check_bdg1,
    check_bdg2,
    find_blowdown_generators,
    s_components,
)
from .words import (
    DEFAULT_MAX_ENUM,
    DEFAULT_ORDER_CAP,
    Element,
    conjugate,
    enumerate_group,
    generator,
    identity,
    is_reflection_in,
    multiply,
    parity_character,
    product_order,
    reduce,
)

RULES = {
    "R1": "infinite label of an input matrix",
    "R2": "(s r) u has infinite order for an involution r in <s^perp> and u in s^infinity",
}


@dataclass(frozen=True)
class DerivedEntry:
    value: int | None
    provenance: str
    cap: int | None = None
    note: str = ""

    @property
    def order(self):
        """The order as a matrix entry, or None when it is above the cap."""
        if self.value is not None:
            return self.value
        return INF if self.provenance in RULES else None

    def to_dict(self):
        out = {"order": "inf" if self.order == INF else self.order, "provenance": self.provenance}
        if self.order is None:
            out["cap"] = self.cap
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class GeneratingSet:
    """Named words over the generators of ``matrix``, proposed as new Coxeter generators."""

    matrix: CoxeterMatrix
    names: tuple[str, ...]
    words: dict
    derived: dict
    provenance: dict
    certificates: list = field(default_factory=list)

    def element(self, name: str) -> Element:
        return Element(self.matrix, self.words[name])

    def elements(self) -> list[Element]:
        return [self.element(x) for x in self.names]

    def entry(self, x: str, y: str) -> DerivedEntry:
        if x == y:
            return DerivedEntry(1, "identity")
        return self.derived[(x, y)] if (x, y) in self.derived else self.derived[(y, x)]

    def to_matrix(self) -> CoxeterMatrix:
        rows = []
        for x in self.names:
            row = []
            for y in self.names:
                order = self.entry(x, y).order
                if order is None:
                    raise ValueError(f"order of {x}{y} is above the cap")
                row.append(order)
            rows.append(tuple(row))
        return CoxeterMatrix(self.names, tuple(rows))

    def to_dict(self):
        M = self.matrix
        return {
            "generators": list(self.names),
            "words": {x: " ".join(M.names[i] for i in self.words[x]) or "e" for x in self.names},
            "derived_matrix": [
                {"pair": [x, y], **self.entry(x, y).to_dict()}
                for i, x in enumerate(self.names)
                for y in self.names[i + 1:]
            ],
            "provenance": self.provenance,
            "certificates": self.certificates,
        }


def _fresh_name(M: CoxeterMatrix, base: str, taken=()) -> str:
    used = set(M.names) | set(taken)
    name, k = base, 1
    while name in used:
        k += 1
        name = f"{base}{k}"
    return name


def r2_applies(M: CoxeterMatrix, s: str, x: Element, u: Element) -> bool:
    """Mechanically check the hypotheses of rule R2 for the pair (x, u)."""
    if len(u.word) != 1:
        return False
    try:
        perp, infinity = neighborhoods(M, s)
        build_context(M, s)
    except Exception:
        return False
    if M.names[u.word[0]] not in infinity:
        return False
    r = multiply(generator(M, s), x)
    if not set(r.letters) <= perp:
        return False
    return multiply(r, r).is_identity()


def _derive(M, s, names, words, cap, *, r2=True, predicted=None):
    derived = {}
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            ex, ey = Element(M, words[x]), Element(M, words[y])
            if len(ex.word) == 1 and len(ey.word) == 1:
                m = M.m(ex.word[0], ey.word[0])
                derived[(x, y)] = DerivedEntry(None, "R1") if m == INF else DerivedEntry(m, "input")
                continue
            if r2 and s is not None and (r2_applies(M, s, ex, ey) or r2_applies(M, s, ey, ex)):
                derived[(x, y)] = DerivedEntry(None, "R2")
                continue
            res = product_order(ex, ey, cap)
            if predicted is not None:
                want = predicted.m(x, y)
                if want == INF and not res.is_finite:
                    derived[(x, y)] = DerivedEntry(None, "R1", note="input label carried by the twist")
                    continue
                if res.value != want:
                    raise AssertionError(f"order of {x}{y} is {res}, expected {want}")
            if res.is_finite:
                derived[(x, y)] = DerivedEntry(res.value, "enumerated")
            else:
                derived[(x, y)] = DerivedEntry(None, "above_cap", cap)
    return derived


def _not_reflection_certificate(M, s, C, s_rho, cap):
    J = sorted({s} | set(C), key=M.index)
    return {
        "fact": "s_not_in_new_reflections",
        "parity_of_s_rho": parity_character(M, s, s_rho.word),
        "s_rho_is_reflection_of_parabolic": is_reflection_in(M, J, s_rho, cap),
        "parabolic": J,
    }


def s_translation(M: CoxeterMatrix, s: str, C, cap: int = DEFAULT_ORDER_CAP,
                  max_enum: int = DEFAULT_MAX_ENUM) -> GeneratingSet:
    """Replace s by s*rho_C for an s-component C of (-1)-type."""
    ctx = build_context(M, s)
    C = frozenset(C)
    match = [t for c, t in s_components(ctx) if c == C]
    if not match:
        raise ComponentNotMinusOneType(f"{sorted(C)} is not an s-component of {s}")
    if not is_minus_one_type(match[0]):
        raise ComponentNotMinusOneType(f"s-component {sorted(C)} has type {match[0]}")
    rho = enumerate_group(M, C, max_enum).longest
    s_rho = multiply(generator(M, s), rho)
    new = _fresh_name(M, f"{s}_rho")
    names = tuple(new if x == s else x for x in M.names)
    words = {x: (M.index(x),) for x in M.names if x != s}
    words[new] = s_rho.word
    return GeneratingSet(
        M, names, words, _derive(M, s, names, words, cap),
        {"transform": "s_translation", "s": s, "component": sorted(C, key=M.index),
         "component_type": str(match[0]), "replaced": {s: new}},
        [_not_reflection_certificate(M, s, C, s_rho, max_enum)],
    )


def _revalidate(ctx, cand: BlowDownCandidate, max_enum):
    fresh = check_bdg1(ctx, cand.a, max_enum)
    if not fresh or fresh.b != cand.b or fresh.component != cand.component:
        raise CandidateInvalid(f"{cand.a} fails the first blowing-down condition")
    if not check_bdg2(ctx, fresh.a, fresh.b):
        raise CandidateInvalid(f"{cand.a} fails the second blowing-down condition")
    return fresh


def sigma_of(M: CoxeterMatrix, C, rho: Element) -> dict:
    """The permutation of C induced by conjugation with rho, found by word computation."""
    out = {}
    for c in sorted(C, key=M.index):
        image = conjugate(generator(M, c), rho)
        if len(image.word) != 1:
            raise AssertionError("rho does not normalize its component")
        out[c] = image.letters[0]
    return out


def diagram_twist(M: CoxeterMatrix, s: str, candidate: BlowDownCandidate,
                  cap: int = DEFAULT_ORDER_CAP, max_enum: int = DEFAULT_MAX_ENUM):
    """Twist the block of s^infinity seen by b so that the candidate becomes proper.

    Returns ``(M1, gs)``: the twisted matrix and the words over S for its
    generators.  An already proper candidate or an empty block gives back
    ``M`` unchanged.
    """
    ctx = build_context(M, s)
    cand = _revalidate(ctx, candidate, max_enum)
    inf_b = ctx.infinity_of(cand.b)
    K0 = {t for t in ctx.s_infinity if t not in inf_b}
    K = set()
    if not cand.proper:
        finite = lambda u, v: M.m(u, v) != INF
        for part in connected_parts(sorted(ctx.s_infinity, key=M.index), finite):
            if K0 & set(part):
                K |= set(part)
    if not K:
        words = {x: (M.index(x),) for x in M.names}
        kind = "noop" if cand.proper else "identity"
        gs = GeneratingSet(M, M.names, words, _derive(M, s, M.names, words, cap),
                           {"transform": "diagram_twist", "result": kind, "s": s, "candidate": cand.a})
        return M, gs

    sigma = sigma_of(M, cand.component, cand.rho)
    renamed = {}
    for x in sorted(K, key=M.index):
        renamed[x] = _fresh_name(M, f"{x}_tw", renamed.values())
    names = tuple(renamed.get(x, x) for x in M.names)
    back = {renamed.get(x, x): x for x in M.names}

    def twisted(x1, y1):
        x, y = back[x1], back[y1]
        if x == y:
            return 1
        if x in K and y in K:
            return M.m(x, y)
        if x in K and y in sigma:
            return M.m(x, sigma[y])
        if y in K and x in sigma:
            return M.m(y, sigma[x])
        return M.m(x, y)

    M1 = CoxeterMatrix(names, tuple(tuple(twisted(x, y) for y in names) for x in names))
    ctx1 = build_context(M1, s)
    after = check_bdg1(ctx1, cand.a, max_enum)
    if not after or after.b != cand.b or not after.proper or not check_bdg2(ctx1, after.a, after.b):
        raise CandidateInvalid(f"twist did not make {cand.a} a proper blowing-down generator")

    rho = cand.rho
    words = {}
    for x1 in names:
        x = back[x1]
        if x in K:
            words[x1] = conjugate(generator(M, x), rho).word
        else:
            words[x1] = (M.index(x),)
    gs = GeneratingSet(
        M, names, words, _derive(M, s, names, words, cap, r2=False, predicted=M1),
        {"transform": "diagram_twist", "result": "twisted", "s": s, "candidate": cand.a,
         "b": cand.b, "block": sorted(K, key=M.index), "renamed": renamed,
         "sigma": sigma},
        [{"fact": "proper_after_twist", "s_infinity": sorted(ctx1.s_infinity, key=M1.index),
          "b_infinity_contains_s_infinity": True}],
    )
    return M1, gs


def blow_down(M: CoxeterMatrix, s: str, candidate: BlowDownCandidate,
              cap: int = DEFAULT_ORDER_CAP, max_enum: int = DEFAULT_MAX_ENUM) -> GeneratingSet:
    """Drop s and b, add s*rho, for a proper blowing-down generator."""
    ctx = build_context(M, s)
    cand = _revalidate(ctx, candidate, max_enum)
    if not cand.proper:
        raise CandidateNotProper(
            f"{cand.a} is not proper (s^inf not inside {cand.b}^inf); apply diagram_twist first"
        )
    s_rho = multiply(generator(M, s), cand.rho)
    new = _fresh_name(M, f"{s}_rho")
    names = tuple(new if x == s else x for x in M.names if x != cand.b)
    words = {x: (M.index(x),) for x in names if x != new}
    words[new] = s_rho.word
    return GeneratingSet(
        M, names, words, _derive(M, s, names, words, cap),
        {"transform": "blow_down", "s": s, "a": cand.a, "b": cand.b,
         "component": sorted(cand.component, key=M.index),
         "component_type": str(cand.component_type), "replaced": {s: new}, "removed": cand.b},
        [_not_reflection_certificate(M, s, cand.component, s_rho, max_enum)],
    )


def compose(outer: GeneratingSet, inner: GeneratingSet) -> GeneratingSet:
    """Rewrite the words of ``outer`` (over inner's generators) as words over inner's base."""
    M = inner.matrix
    words = {}
    for x in outer.names:
        w = ()
        for i in outer.words[x]:
            w += inner.words[outer.matrix.names[i]]
        words[x] = reduce(M, w).word
    return GeneratingSet(
        M, outer.names, words, dict(outer.derived),
        {"transform": "composite", "steps": [inner.provenance, outer.provenance]},
        inner.certificates + outer.certificates,
    )


def eliminate_reflection(M: CoxeterMatrix, s: str, cap: int = DEFAULT_ORDER_CAP,
                         max_enum: int = DEFAULT_MAX_ENUM) -> GeneratingSet | None:
    """A generating set whose reflections avoid s, or None when s is intrinsic."""
    ctx = build_context(M, s)
    for C, t in s_components(ctx):
        if is_minus_one_type(t):
            return s_translation(M, s, C, cap, max_enum)
    cands = find_blowdown_generators(ctx, max_enum)
    if not cands:
        return None
    cand = cands[0]
    if cand.proper:
        return blow_down(M, s, cand, cap, max_enum)
    M1, twist = diagram_twist(M, s, cand, cap, max_enum)
    cand1 = check_bdg1(build_context(M1, s), cand.a, max_enum)
    return compose(blow_down(M1, s, cand1, cap, max_enum), twist)


# ---------------------------------------------------------------------------
# direct-product decompositions of irreducible finite types


def decomposition_case(t: SphericalType):
    """Which centre-split decomposition an irreducible finite type admits, if any."""
    label = t.dihedral_label
    if label is not None and label % 4 == 2 and label >= 6:
        k = (label - 2) // 4
        return {"cases": ["I"], "whole": str(t),
                "factor": str(spherical_type("I2", edge_label=2 * k + 1)), "coxeter_factor": True}
    if t.family == "C" and t.rank % 2 == 1 and t.rank >= 3:
        return {"cases": ["D", "Dbar"], "whole": str(t),
                "factor": str(spherical_type("D", t.rank)), "coxeter_factor": True}
    if str(t) in ("E7", "H3"):
        return {"cases": ["center_split"], "whole": str(t), "factor": None, "coxeter_factor": False}
    return None


# ---------------------------------------------------------------------------
# identities inside the finite parabolic <s> x <C>


def _setup(M, s, a, max_enum):
    ctx = build_context(M, s)
    cand = check_bdg1(ctx, a, max_enum)
    if not cand:
        raise CandidateInvalid(cand.reason)
    g = lambda x: generator(M, x)
    return cand, g(s), g(cand.a), g(cand.b), cand.rho


def case_d_identities(M: CoxeterMatrix, s: str, a: str, max_enum: int = DEFAULT_MAX_ENUM) -> dict:
    """Identities for a D(2k+1) component with tau = s rho and sigma = a b tau."""
    cand, s_, a_, b_, rho = _setup(M, s, a, max_enum)
    if not is_odd_d(cand.component_type):
        raise CandidateInvalid(f"component type {cand.component_type} is not D(2k+1)")
    e = identity(M)
    perp, _ = neighborhoods(M, s)
    ab = a_ * b_
    tau = s_ * rho
    sigma = ab * tau
    ab_rho = ab * rho
    return {
        "ab_eq_ba": ab == b_ * a_,
        "ab_nontrivial_involution": ab != e and (ab * ab).is_identity(),
        "ab_in_s_perp": set(ab.letters) <= perp,
        "rho_commutes_with_ab": rho * ab == ab * rho,
        "ab_rho_involution": ab_rho != e and (ab_rho * ab_rho).is_identity(),
        "rho_commutes_with_s": rho * s_ == s_ * rho,
        "tau_involution": (tau * tau).is_identity() and tau != e,
        "a_conj_tau_eq_b": conjugate(a_, tau) == b_,
        "sigma_eq_tau_conj_a": sigma == conjugate(tau, a_),
        "sigma_ne_tau": sigma != tau,
        "sigma_commutes_with_tau": sigma * tau == tau * sigma,
        "rho_length": rho.length == cand.component_type.reflection_count,
    }


def case_i_identities(M: CoxeterMatrix, s: str, a: str, max_enum: int = DEFAULT_MAX_ENUM) -> dict:
    """Identities for an I2(2k+1) component with tau = s rho."""
    cand, s_, a_, b_, rho = _setup(M, s, a, max_enum)
    if not is_odd_dihedral(cand.component_type):
        raise CandidateInvalid(f"component type {cand.component_type} is not I2(2k+1)")
    tau = s_ * rho
    J = sorted({s} | set(cand.component), key=M.index)
    G = enumerate_group(M, J, max_enum)
    generated = G.closure([G.id_of(a_), G.id_of(tau)])
    return {
        "b_eq_a_conj_tau": conjugate(a_, tau) == b_,
        "a_tau_generate_parabolic": len(generated) == len(G),
        "rho_tau_a_distinct": rho != tau and tau != a_ and a_ != rho,
        "tau_commutes_with_rho": tau * rho == rho * tau,
    }
