"""The Coxeter complex as a thin chamber system.

Chambers are group elements, panels are pairs ``{c, c s}`` and the group
acts on the left, so a residue of type J is a left coset ``c<J>`` and the
panel ``{c, c s}`` lies on the wall of ``t = c s c^-1``.  The distance
between chambers is ``l(c^-1 d)``.  Roots are never materialised for an
infinite group: the root of ``t`` containing the identity is the set of
chambers ``c`` with ``l(t c) > l(c)``.

:class:`FiniteComplex` builds dense numpy tables for a finite group and
runs the exhaustive geometric checks on them.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .diagram import CoxeterMatrix, irreducible_components
from .errors import CapExceeded, HypothesisViolated, NotAReflection
from .words import (
    DEFAULT_MAX_ENUM,
    Element,
    ball,
    enumerate_group,
    generator,
    identity,
    invert,
    multiply,
)

POSITIVE = "Positive"
NEGATIVE = "Negative"


def is_reflection(t: Element) -> bool:
    """Whether t is conjugate to a generator.

    A reflection of length > 1 always has a generator s with
    ``l(s t s) = l(t) - 2``, and ``s t s`` is again a reflection.
    """
    n = t.length
    if n == 1:
        return True
    if n % 2 == 0:
        return False
    M = t.matrix
    for i in sorted(set(t.word)):
        s = Element(M, (i,))
        u = multiply(s, t, s)
        if u.length == n - 2 and is_reflection(u):
            return True
    return False


def root_side(M: CoxeterMatrix, t: Element, c: Element, check: bool = True) -> str:
    """Side of the wall of t on which chamber c lies; the identity is Positive."""
    if check and not is_reflection(t):
        raise NotAReflection(f"{t} is not a reflection")
    return POSITIVE if multiply(t, c).length > c.length else NEGATIVE


@dataclass(frozen=True)
class Residue:
    type_subset: frozenset
    representative: Element

    @property
    def rank(self) -> int:
        return len(self.type_subset)

    def contains(self, x: Element) -> bool:
        return set(multiply(invert(self.representative), x).letters) <= self.type_subset

    def chambers(self, cap: int = DEFAULT_MAX_ENUM) -> list[Element]:
        M = self.representative.matrix
        G = enumerate_group(M, self.type_subset, cap)
        return [multiply(self.representative, y) for y in G]

    def is_stabilized_by(self, g: Element) -> bool:
        return self.contains(multiply(g, self.representative))


@dataclass(frozen=True)
class Panel:
    """The panel ``{chamber, chamber * generator}`` keyed by its shorter chamber."""

    chamber: Element
    generator: str

    @classmethod
    def of(cls, c: Element, s: str) -> "Panel":
        d = multiply(c, generator(c.matrix, s))
        return cls(min(c, d, key=lambda x: (x.length, x.word)), s)

    @property
    def chambers(self) -> tuple[Element, Element]:
        c = self.chamber
        return c, multiply(c, generator(c.matrix, self.generator))

    def reflection(self) -> Element:
        c = self.chamber
        return multiply(c, generator(c.matrix, self.generator), invert(c))


def distance(c: Element, d: Element) -> int:
    return multiply(invert(c), d).length


def projection(M: CoxeterMatrix, R: Residue, c: Element, cap: int = DEFAULT_MAX_ENUM) -> Element:
    """The gate of c in R: the chamber of R nearest to c."""
    chambers = R.chambers(cap)
    dists = [distance(c, x) for x in chambers]
    best = min(dists)
    gates = [x for x, d in zip(chambers, dists) if d == best]
    if len(gates) != 1:
        raise AssertionError("nearest chamber in a residue is not unique")
    return gates[0]


def wall_panels_in_residue(M: CoxeterMatrix, t: Element, R: Residue,
                           cap: int = DEFAULT_MAX_ENUM) -> list[Panel]:
    """Panels inside R that t stabilizes."""
    out = []
    for x in R.chambers(cap):
        for s in sorted(R.type_subset, key=M.index):
            P = Panel.of(x, s)
            if P.chamber == x and multiply(t, x) == P.chambers[1]:
                out.append(P)
    return out


def residues_in_ball(M: CoxeterMatrix, radius: int, spherical_only: bool = True,
                     cap: int = DEFAULT_MAX_ENUM) -> list[Residue]:
    """Residues whose chambers all have length at most ``radius``."""
    B = ball(M, radius, cap=cap)
    found = []
    for r in range(len(M) + 1):
        for J in combinations(M.names, r):
            if spherical_only and not irreducible_components(M, J).is_spherical:
                continue
            H = enumerate_group(M, J, cap)
            seen = set()
            for c in B:
                if c.word in seen:
                    continue
                members = [multiply(c, y) for y in H]
                seen.update(x.word for x in members)
                if all(x.length <= radius for x in members):
                    rep = min(members, key=lambda x: (x.length, x.word))
                    found.append(Residue(frozenset(J), rep))
    return found


def _closure(elements: list[Element], cap: int) -> list[Element]:
    if not elements:
        return []
    M = elements[0].matrix
    seen = {identity(M)}
    frontier = [identity(M)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in elements:
                y = multiply(x, g)
                if y not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded(cap, "subgroup")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda x: (x.length, x.word))


@dataclass
class FixedResidueReport:
    residues: list
    sidedness: str | None = None  # None, "one_side", "split", "not_applicable"
    certified: bool = True
    side: str | None = None


def spherical_residues_fixed_by(M: CoxeterMatrix, U: Iterable[Element], radius: int,
                                t: Element | None = None, cap: int = 500) -> FixedResidueReport:
    """Spherical residues in the ball of ``radius`` stabilized by every element of U.

    With a reflection t and ``<U, t>`` above the cap the residues should all
    lie in one root of t; that is reported but marked uncertified.
    """
    U = list(U)
    _closure(U, cap)
    fixed = [R for R in residues_in_ball(M, radius)
             if all(R.is_stabilized_by(u) for u in U)]
    report = FixedResidueReport(fixed)
    if t is None:
        return report
    try:
        _closure(U + [t], cap)
    except CapExceeded:
        report.certified = False
    else:
        report.sidedness = "not_applicable"
        return report
    sides = {root_side(M, t, x) for R in fixed for x in R.chambers()}
    report.sidedness = "one_side" if len(sides) <= 1 else "split"
    report.side = next(iter(sides)) if len(sides) == 1 else None
    return report


# ---------------------------------------------------------------------------
# dense tables for finite groups


class FiniteComplex:
    def __init__(self, M: CoxeterMatrix, cap: int = DEFAULT_MAX_ENUM):
        G = enumerate_group(M, None, cap)
        if not G.complete:
            raise CapExceeded(cap)
        self.matrix = M
        self.group = G
        N, n = len(G), len(G.gens)
        self.N, self.n = N, n
        right = np.array(G.right, dtype=np.int32).reshape(N, n)
        self.right = right
        self.length = np.array(G.lengths, dtype=np.int32)
        # ids are numbered by length, so each length is a contiguous block
        self.levels = np.searchsorted(self.length, np.arange(int(self.length[-1]) + 2))
        self.last = np.array([0] + [G._local[w[-1]] for w in G.words[1:]], dtype=np.int32)
        # built by rows of the transpose, so every write is contiguous
        mul_t = np.empty((N, N), dtype=np.int32)
        mul_t[0] = np.arange(N)
        # support[g]: bitmask of the letters in any reduced word for g
        self.support = np.zeros(N, dtype=np.int64)
        for lo, hi in zip(self.levels[1:-1], self.levels[2:]):
            ids = np.arange(lo, hi)
            last = self.last[ids]
            parent = right[ids, last]
            mul_t[ids] = right[mul_t[parent], last[:, None]]
            self.support[ids] = self.support[parent] | (1 << last.astype(np.int64))
        mul = np.ascontiguousarray(mul_t.T)
        self.mul = mul
        self.inv = np.argmax(mul == 0, axis=1).astype(np.int32)
        self.reflections = np.array(G.reflection_ids(), dtype=np.int32)
        # panel (c, i) = {c, c g_i} lies on the wall of c g_i c^-1
        self.panel_wall = mul[right, self.inv[:, None]]
        self._cosets = {}

    def element(self, i) -> Element:
        return self.group.element(int(i))

    def id_of(self, x: Element) -> int:
        return self.group.id_of(x)

    def coset_labels(self, J_local) -> np.ndarray:
        """Label of each chamber: the shortest chamber of its J-residue."""
        J = np.asarray(J_local, dtype=np.int64)
        cur = np.arange(self.N, dtype=np.int32)
        active = np.arange(self.N)
        while J.size and active.size:
            below = self.right[cur[active]][:, J]
            down = self.length[below] < self.length[cur[active]][:, None]
            has = down.any(axis=1)
            active, below, down = active[has], below[has], down[has]
            cur[active] = below[np.arange(len(active)), down.argmax(axis=1)]
        return cur

    def parabolic(self, J_local) -> np.ndarray:
        """Ids of the standard parabolic W_J, the J-residue of the identity."""
        mask = sum(1 << j for j in J_local)
        return np.flatnonzero(self.support & ~mask == 0)

    def left_reps(self, J_local) -> np.ndarray:
        """Shortest chamber of each orbit of W_J acting on the left."""
        simple = self.right[0, list(J_local)]
        return np.flatnonzero((self.length[self.mul[simple]] > self.length[None, :]).all(axis=0))

    def subsets(self, rank=None):
        ranks = range(self.n + 1) if rank is None else [rank]
        for r in ranks:
            yield from combinations(range(self.n), r)

    def side(self, t: int) -> np.ndarray:
        """True on the root of t that contains the identity."""
        return self.length[self.mul[t]] > self.length

    def wall_mask(self, t: int) -> np.ndarray:
        """``mask[c, i]`` is True when panel (c, i) lies on the wall of t."""
        return self.panel_wall == t

    def lower_panels(self) -> np.ndarray:
        return self.length[:, None] < self.length[self.right]

    # -- exhaustive checks --------------------------------------------------
    #
    # With ``orbits=True`` a check only visits configurations translated so
    # that the residue is a standard parabolic W_J, the panel contains the
    # identity, or the wall belongs to a simple reflection.  Left
    # multiplication by W preserves distance, residues, panels and walls, and
    # every reflection is conjugate to a simple one, so every configuration
    # is a translate of a visited one and the verdict matches the pairwise
    # run at a fraction of the cost.

    def cosets(self, J_local):
        """Coset index of every chamber and the member table ``cols[coset]``."""
        key = tuple(J_local)
        if key not in self._cosets:
            self._cosets[key] = self._build_cosets(key)
        return self._cosets[key]

    def _build_cosets(self, J_local):
        labels = self.coset_labels(J_local)
        _, which = np.unique(labels, return_inverse=True)
        order = np.argsort(which, kind="stable")
        ncos = int(which.max()) + 1
        return which.astype(np.int32), order.reshape(ncos, self.N // ncos)

    def distances(self, rows, cols) -> np.ndarray:
        """``d(rows[i], cols[...])`` broadcast over the shape of cols."""
        rows = np.asarray(rows)
        shape = (len(rows),) + (1,) * np.ndim(cols)
        return self.length[self.mul[self.inv[rows].reshape(shape), cols[None]]]

    def gates(self, rows, cols) -> np.ndarray:
        """``gate[i, k]`` is the chamber of coset k nearest to ``rows[i]``."""
        block = self.distances(rows, cols)
        return cols[np.arange(len(cols))[None, :], block.argmin(axis=2)]

    def check_gates(self, orbits: bool = False) -> dict:
        """Gate equation and uniqueness for every residue and every chamber."""
        checked = failures = 0
        for J in self.subsets():
            if orbits:
                # W_J fixes its own residue, so one chamber per W_J-orbit suffices
                rows, cols = self.left_reps(J), self.parabolic(J)[None, :]
            else:
                rows, cols = np.arange(self.N), self.cosets(J)[1]
            block = self.distances(rows, cols)          # chamber x coset x member
            best = block.min(axis=2)
            unique = (block == best[:, :, None]).sum(axis=2) == 1
            gate = cols[np.arange(len(cols))[None, :], block.argmin(axis=2)]
            onward = self.length[self.mul[self.inv[gate][:, :, None], cols[None, :, :]]]
            ok = (best[:, :, None] + onward == block).all(axis=2) & unique
            failures += int((~ok).sum())
            checked += ok.size
        return {"pairs_checked": checked, "failures": failures}

    def check_roots(self, orbits: bool = False, chunk: int = 64) -> dict:
        """Each wall cuts the chambers into two halves of size N/2 swapped by t.

        Connectivity of a half is certified by descent: on the identity side
        every chamber but e has a neighbour closer to e, on the other side
        every chamber but t has a neighbour closer to t, in both cases across
        a panel off the wall and without leaving the half.
        """
        failures = []
        down_e = self.length[self.right] < self.length[:, None]
        reflections = self.right[0] if orbits else self.reflections
        for start in range(0, len(reflections), chunk):
            ts = reflections[start:start + chunk]
            from_t = self.length[self.mul[ts]]                                 # t x c
            side = from_t > self.length[None, :]
            swapped = (np.take_along_axis(side, self.mul[ts], axis=1) != side).all(axis=1)
            halves = side.sum(axis=1) * 2 == self.N
            off_wall = self.panel_wall[None] != ts[:, None, None]            # t x c x i
            across = side[:, self.right] != side[:, :, None]
            split_ok = (across == ~off_wall).all(axis=(1, 2))
            down_t = from_t[:, self.right] < from_t[:, :, None]
            down = np.where(side[:, :, None], down_e[None], down_t)
            descends = (down & ~across).any(axis=2)
            sinks = ~descends
            ok = (swapped & halves & split_ok
                  & ((sinks & side).sum(axis=1) == 1) & ((sinks & ~side).sum(axis=1) == 1))
            failures += [int(t) for t in ts[~ok]]
        return {"reflections": len(reflections), "failures": failures}

    def check_disjoint_walls(self, orbits: bool = False) -> dict:
        """Every panel is stabilized by exactly one nontrivial element, a reflection."""
        if orbits:
            c = np.zeros(self.n, dtype=np.int64)
            i = np.arange(self.n)
        else:
            c, i = np.nonzero(self.lower_panels())
        d = self.right[c, i]
        fix = (self.mul[:, c] == c) & (self.mul[:, d] == d)
        swap = (self.mul[:, c] == d) & (self.mul[:, d] == c)
        bad = int(((fix | swap)[1:].sum(axis=0) != 1).sum())
        # the swapping element must be the recorded wall, and a reflection
        wall = self.panel_wall[c, i]
        recorded = swap[wall, np.arange(len(c))]
        on_reflection = np.isin(wall, self.reflections)
        return {"panels": len(c), "failures": bad + int((~(recorded & on_reflection)).sum())}

    def check_rank2_wall_panels(self, orbits: bool = False) -> dict:
        """At most two panels of any wall inside a rank-2 residue."""
        worst = 0
        lower = self.lower_panels()
        for J in self.subsets(2):
            J = list(J)
            if orbits:
                c = self.parabolic(J)
                c, j = np.nonzero(lower[c][:, J])
                key = self.panel_wall[self.parabolic(J)[c], np.asarray(J)[j]]
            else:
                labels = self.coset_labels(J)
                c, j = np.nonzero(lower[:, J])
                key = labels[c].astype(np.int64) * self.N + self.panel_wall[c, np.asarray(J)[j]]
            if key.size:
                worst = max(worst, int(np.unique(key, return_counts=True)[1].max()))
        return {"max_panels": worst, "ok": worst <= 2}

    def _prefixes(self) -> np.ndarray:
        """``pre[g, k]`` is the element spelled by the first k letters of g's normal form."""
        top = int(self.length[-1])
        pre = np.zeros((self.N, top + 1), dtype=np.int32)
        # dropping the last letter of a normal form leaves a normal form
        for k, (lo, hi) in enumerate(zip(self.levels[1:-1], self.levels[2:]), start=1):
            ids = np.arange(lo, hi)
            pre[ids, :k] = pre[self.right[ids, self.last[ids]], :k]
            pre[ids, k:] = ids[:, None]
        return pre

    def check_convexity(self, orbits: bool = False, budget: int = 4_000_000) -> dict:
        """Geodesic galleries between chambers of a residue stay inside it.

        The residue of type S is the whole complex and is skipped.
        """
        pre = self._prefixes()
        step = max(1, budget // pre.shape[1])
        failures = checked = 0
        for J in self.subsets():
            if len(J) == self.n:
                continue
            if orbits:
                d = self.parabolic(J)
                outside = ~np.int64(sum(1 << j for j in J))
                gallery = pre[d]
                inside = (self.support[gallery] & outside == 0).all(axis=1)
                failures += int((~inside).sum())
                checked += inside.size
                continue
            which, cols = self.cosets(J)
            k = cols.shape[1]
            c_all = np.repeat(cols, k, axis=1).ravel()
            d_all = np.tile(cols, (1, k)).ravel()
            for start in range(0, len(c_all), step):
                c, d = c_all[start:start + step], d_all[start:start + step]
                gallery = self.mul[c[:, None], pre[self.mul[self.inv[c], d]]]
                inside = (which[gallery] == which[c][:, None]).all(axis=1)
                failures += int((~inside).sum())
                checked += inside.size
        return {"pairs_checked": checked, "failures": failures}

    def check_projected_wall_panels(self, orbits: bool = False) -> dict:
        """Projecting a wall panel onto a residue stabilized by t gives a wall panel.

        The residue of type S is skipped: projecting onto it is the identity.
        """
        failures = checked = 0
        lower = self.lower_panels()
        for J in self.subsets():
            if not J or len(J) == self.n:
                continue
            if orbits:
                # W_J against every wall panel of a reflection lying in W_J,
                # one panel end per W_J-orbit, either end first
                members = self.parabolic(J)
                reps = self.left_reps(J)
                x, i = np.nonzero(np.isin(self.panel_wall[reps], members))
                x = reps[x]
                px = self.gates(x, members[None, :])[:, 0]
                py = self.gates(self.right[x, i], members[None, :])[:, 0]
                ok = self._projected_ok(self.panel_wall[x, i], px, py)
                failures += int((~ok).sum())
                checked += ok.size
                continue
            which, cols = self.cosets(J)
            for t in self.reflections:
                stab = np.flatnonzero(which[self.mul[t, cols[:, 0]]] == np.arange(len(cols)))
                if not stab.size:
                    continue
                x, i = np.nonzero(self.wall_mask(t) & lower)
                px = self.gates(x, cols[stab])
                py = self.gates(self.right[x, i], cols[stab])
                ok = self._projected_ok(t, px, py)
                failures += int((~ok).sum())
                checked += ok.size
        return {"checked": checked, "failures": failures}

    def _projected_ok(self, t, px, py) -> np.ndarray:
        """t swaps the two projections and they are adjacent."""
        t = np.broadcast_to(np.reshape(t, np.shape(t) + (1,) * (px.ndim - np.ndim(t))), px.shape)
        return (self.mul[t, px] == py) & (self.right[px] == py[..., None]).any(axis=-1)

    def run_checks(self, orbits: bool = False) -> dict:
        """All exhaustive checks, keyed by name."""
        return {
            "gates": self.check_gates(orbits),
            "roots": self.check_roots(orbits),
            "disjoint_walls": self.check_disjoint_walls(orbits),
            "rank2_wall_panels": self.check_rank2_wall_panels(orbits),
            "convexity": self.check_convexity(orbits),
            "projected_wall_panels": self.check_projected_wall_panels(orbits),
        }

    def wall_sandwich(self, J, rep: int, t: int, u: int, v: int) -> dict:
        """Panels of the wall of t avoid the mixed quadrants of the walls of u, v."""
        refl = set(self.reflections.tolist())
        if len({t, u, v}) != 3:
            raise HypothesisViolated("t, u, v must be pairwise distinct")
        for name, x in (("t", t), ("u", u), ("v", v)):
            if x not in refl:
                raise HypothesisViolated(f"{name} is not a reflection")
        if len(J) != 2:
            raise HypothesisViolated("residue must have rank 2")
        labels = self.coset_labels(J)
        for name, x in (("t", t), ("u", u), ("v", v)):
            if labels[self.mul[x, rep]] != labels[rep]:
                raise HypothesisViolated(f"{name} does not stabilize the residue")
        if self.mul[u, v] != self.mul[v, u]:
            raise HypothesisViolated("u and v do not commute")
        lower = self.lower_panels()
        side_u, side_v = self.side(u), self.side(v)
        in_R = (labels == labels[rep])[:, None] & np.isin(np.arange(self.n), J)[None, :]
        start = np.argwhere(self.wall_mask(t) & lower & in_R)
        c0 = start[0][0]
        alpha, beta = bool(side_u[c0]), bool(side_v[c0])

        def quadrants(w):
            cells = {"alpha_beta": 0, "-alpha_-beta": 0, "alpha_-beta": 0, "-alpha_beta": 0, "split": 0}
            for c, i in np.argwhere(self.wall_mask(w) & lower):
                d = self.right[c, i]
                su, sv = side_u[[c, d]], side_v[[c, d]]
                if su[0] != su[1] or sv[0] != sv[1]:
                    cells["split"] += 1
                    continue
                key = ("alpha" if su[0] == alpha else "-alpha") + "_" + ("beta" if sv[0] == beta else "-beta")
                cells[key] += 1
            return cells

        utu = int(self.mul[self.mul[u, t], u])
        wall_t, wall_utu = quadrants(t), quadrants(utu)
        ok = (
            wall_t["alpha_-beta"] == wall_t["-alpha_beta"] == wall_t["split"] == 0
            and wall_utu["alpha_beta"] == wall_utu["-alpha_-beta"] == wall_utu["split"] == 0
        )
        return {
            "alpha": {"reflection": str(self.element(u)), "contains_identity": alpha},
            "beta": {"reflection": str(self.element(v)), "contains_identity": beta},
            "wall_t": wall_t,
            "wall_utu": wall_utu,
            "verified": ok,
        }

    def statistics(self) -> dict:
        lower = self.lower_panels()
        walls = {}
        for t in self.reflections:
            walls[int(t)] = int((self.wall_mask(t) & lower).sum())
        return {
            "chambers": self.N,
            "panels": int(lower.sum()),
            "reflections": len(self.reflections),
            "panels_per_wall": sorted(set(walls.values())),
            "root_sizes": sorted({int(self.side(t).sum()) for t in self.reflections}),
            "chambers_by_length": np.bincount(self.length).tolist(),
        }


def check_wall_sandwich(M: CoxeterMatrix, R: Residue, t: Element, u: Element, v: Element,
                        cap: int = DEFAULT_MAX_ENUM) -> dict:
    X = FiniteComplex(M, cap)
    J = [X.group._local[M.index(x)] for x in sorted(R.type_subset, key=M.index)]
    return X.wall_sandwich(J, X.id_of(R.representative), X.id_of(t), X.id_of(u), X.id_of(v))


def ball_statistics(M: CoxeterMatrix, radius: int, cap: int = DEFAULT_MAX_ENUM) -> dict:
    """Chamber, panel, wall and root counts inside the ball of ``radius``.

    Only panels with both chambers in the ball are counted; a root size is
    the number of ball chambers on the side of the wall holding the identity.
    """
    B = ball(M, radius, cap=cap)
    chambers = list(B)
    walls = {}
    panels = 0
    for c in chambers:
        for s in M.names:
            P = Panel.of(c, s)
            if P.chamber != c or P.chambers[1].length > radius:
                continue
            panels += 1
            t = P.reflection()
            walls[t] = walls.get(t, 0) + 1
    roots = [sum(root_side(M, t, c, check=False) == POSITIVE for c in chambers) for t in walls]
    by_length = [0] * (radius + 1)
    for c in chambers:
        by_length[c.length] += 1
    return {
        "radius": radius,
        "complete": B.complete,
        "chambers": len(chambers),
        "panels": panels,
        "walls_met": len(walls),
        "panels_per_wall": sorted(set(walls.values())),
        "root_sizes": sorted(set(roots)),
        "positive_fraction": sorted({round(r / len(chambers), 4) for r in roots}),
        "chambers_by_length": by_length if not B.complete else by_length[: max(B.lengths) + 1],
    }
