"""Invariant suites run by ``coxtool verify``.

Table checks compare the classification tables against the degrees of the
basic invariants and always run.  Enumeration checks build the group and
are skipped, with a reason, when the tabulated order exceeds the cap.
"""
from __future__ import annotations

import math

from .complex import FiniteComplex
from .diagram import (
    CoxeterMatrix,
    SphericalType,
    connected_parts,
    irreducible_components,
    is_minus_one_type,
)
from .errors import CapExceeded
from .oracle import VerificationReport
from .words import DEFAULT_MAX_ENUM, enumerate_group

COMPLEX_LIMIT = 1200


def degrees(t: SphericalType) -> list[int]:
    """Degrees of the basic polynomial invariants of a finite Coxeter group."""
    n = t.rank
    if t.family == "A":
        return list(range(2, n + 2))
    if t.family == "C":
        return list(range(2, 2 * n + 1, 2))
    if t.family == "D":
        return sorted(list(range(2, 2 * n - 1, 2)) + [n])
    if t.family == "I2":
        return [2, t.edge_label]
    return {
        "E6": [2, 5, 6, 8, 9, 12],
        "E7": [2, 6, 8, 10, 12, 14, 18],
        "E8": [2, 8, 12, 14, 18, 20, 24, 30],
        "F4": [2, 6, 8, 12],
        "H3": [2, 6, 10],
        "H4": [2, 12, 20, 30],
    }[str(t)]


def _report(claim, ok, evidence):
    return VerificationReport(claim, "Verified" if ok else "Refuted", evidence)


def table_checks(t: SphericalType, label: str) -> list[VerificationReport]:
    d = degrees(t)
    return [
        _report(f"{label}:order_is_product_of_degrees", math.prod(d) == t.order,
                {"type": str(t), "degrees": d, "order": t.order}),
        _report(f"{label}:reflections_from_degrees", sum(x - 1 for x in d) == t.reflection_count,
                {"type": str(t), "reflections": t.reflection_count}),
        # -1 lies in the reflection representation iff every degree is even
        _report(f"{label}:minus_one_type_from_degrees",
                is_minus_one_type(t) == all(x % 2 == 0 for x in d),
                {"type": str(t), "minus_one_type": is_minus_one_type(t)}),
    ]


def enumeration_checks(M: CoxeterMatrix, J, t: SphericalType, label: str,
                       max_enum: int) -> list[VerificationReport]:
    if t.order > max_enum:
        return [VerificationReport(f"{label}:enumeration", "Skipped",
                                   {"type": str(t), "order": t.order},
                                   f"CapExceeded: {t.order} > {max_enum}")]
    G = enumerate_group(M, J, max_enum)
    refl = G.reflection_ids()
    center = G.center_ids()
    top = G.longest
    central_top = G.id_of(top) in center
    return [
        _report(f"{label}:order", len(G) == t.order, {"enumerated": len(G), "table": t.order}),
        _report(f"{label}:longest_length", top.length == t.reflection_count,
                {"length": top.length, "reflections": t.reflection_count}),
        _report(f"{label}:reflection_count", len(refl) == t.reflection_count,
                {"enumerated": len(refl), "table": t.reflection_count}),
        _report(f"{label}:center", len(center) == (2 if is_minus_one_type(t) else 1)
                and central_top == is_minus_one_type(t),
                {"center_order": len(center), "longest_is_central": central_top}),
    ]


def complex_checks(M: CoxeterMatrix, max_enum: int) -> list[VerificationReport]:
    dec = irreducible_components(M)
    if not dec.is_spherical or dec.order > min(COMPLEX_LIMIT, max_enum):
        size = "inf" if not dec.is_spherical else dec.order
        return [VerificationReport("complex", "Skipped", {"order": size},
                                   f"CapExceeded: complex checks need a finite group of order <= {COMPLEX_LIMIT}")]
    X = FiniteComplex(M, max_enum)
    gates, roots = X.check_gates(), X.check_roots()
    walls, rank2 = X.check_disjoint_walls(), X.check_rank2_wall_panels()
    convex, proj = X.check_convexity(), X.check_projected_wall_panels()
    roots = {**roots, "failures": len(roots["failures"])}
    return [
        _report("complex:gates", gates["failures"] == 0, gates),
        _report("complex:root_halves", roots["failures"] == 0, roots),
        _report("complex:disjoint_walls", walls["failures"] == 0, walls),
        _report("complex:rank2_wall_panels", rank2["ok"], rank2),
        _report("complex:convexity", convex["failures"] == 0, convex),
        _report("complex:projected_wall_panels", proj["failures"] == 0, proj),
    ]


def spherical_subsets(M: CoxeterMatrix):
    """Connected spherical subsets of S with their types, by size then position."""
    edge = lambda u, v: M.m(u, v) != 2
    found = []
    n = len(M)
    for mask in range(1, 1 << n):
        J = [M.names[i] for i in range(n) if mask >> i & 1]
        if len(connected_parts(J, edge)) != 1:
            continue
        (t,) = irreducible_components(M, J).types
        if isinstance(t, SphericalType):
            found.append((J, t))
    found.sort(key=lambda p: (len(p[0]), [M.index(x) for x in p[0]]))
    return found


def run_verify_suite(M: CoxeterMatrix, max_enum: int = DEFAULT_MAX_ENUM) -> list[VerificationReport]:
    """Table checks on every connected spherical subset, enumeration once per type."""
    reports = []
    enumerated = set()
    for J, t in spherical_subsets(M):
        label = "/".join(J)
        reports.extend(table_checks(t, label))
        if str(t) in enumerated:
            continue
        enumerated.add(str(t))
        try:
            reports.extend(enumeration_checks(M, J, t, label, max_enum))
        except CapExceeded as exc:
            reports.append(VerificationReport(f"{label}:enumeration", "Skipped", {}, f"CapExceeded: {exc}"))
    reports.extend(complex_checks(M, max_enum))
    return reports
