"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's bitmask machinery: pattern
containment is checked by trying every injective vertex map, and isomorphism
by trying every vertex (and allowed color) permutation.  They are the ground
truth the fast detectors and canonical forms are measured against.
"""

from __future__ import annotations

import itertools

from gallairamsey.detect import embedding_edges
from gallairamsey.model import (
    ColoredComplete,
    PatternGraph,
    SimpleGraph,
    all_pairs,
    pair_count,
)


def oracle_contains(h: SimpleGraph, p: PatternGraph) -> bool:
    """Pattern containment by exhaustive injective maps."""
    m = p.order
    if m > h.n:
        return False
    template = embedding_edges(p, tuple(range(m)))
    for verts in itertools.permutations(range(h.n), m):
        if all(h.has_edge(verts[u], verts[v]) for u, v in template):
            return True
    return False


def oracle_isomorphic(
    g1: ColoredComplete, g2: ColoredComplete, color_perms=None
) -> bool:
    """Colored isomorphism by brute force over vertex (x color) permutations."""
    if g1.n != g2.n or g1.k != g2.k:
        return False
    perms = color_perms or [tuple(range(1, g1.k + 1))]
    for cp in perms:
        for vp in itertools.permutations(range(g1.n)):
            if all(
                cp[g1.color(u, v) - 1] == g2.color(vp[u], vp[v])
                for u, v in all_pairs(g1.n)
            ):
                return True
    return False


def all_colorings(n: int, k: int):
    """Every k-coloring of K_n (labeled)."""
    for codes in itertools.product(range(1, k + 1), repeat=pair_count(n)):
        yield ColoredComplete(n, k, codes)


def pentagon() -> ColoredComplete:
    """The 2-coloring of K_5 whose color classes are two 5-cycles."""
    return ColoredComplete.from_function(
        5, 2, lambda u, v: 1 if (v - u) % 5 in (1, 4) else 2
    )


def graph_from_edges(n: int, edges) -> SimpleGraph:
    rows = [0] * n
    for u, v in edges:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return SimpleGraph(n, tuple(rows))
