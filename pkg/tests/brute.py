"""Brute-force oracles written straight from the definitions."""
from __future__ import annotations

from coxtool.words import generator, product_order


def walk_vertex_sets(vertices, finite) -> set[frozenset]:
    """Vertex sets of all walks u0, u1, ..., un with every u_{i-1} u_i of finite order.

    Search over states (current vertex, vertices visited so far).
    """
    found = set()
    for start in vertices:
        stack = [(start, frozenset([start]))]
        seen = set(stack)
        while stack:
            u, visited = stack.pop()
            found.add(visited)
            for v in vertices:
                if finite(u, v):
                    state = (v, visited | {v})
                    if state not in seen:
                        seen.add(state)
                        stack.append(state)
    return found


def finite_product(M, cap=50):
    """``finite(u, v)``: the product of the two generators has order at most cap."""
    def finite(u, v):
        return product_order(generator(M, u), generator(M, v), cap).value is not None
    return finite


def path_condition(walk_sets, a_infinity, b_infinity) -> bool:
    """Every walk lies inside the infinity set of a or inside that of b."""
    return all(W <= a_infinity or W <= b_infinity for W in walk_sets)
