"""Canonical representation of k-edge-colored complete graphs.

Edges of K_n are stored in colex order: pair (u, v) with u < v has index
v*(v-1)//2 + u.  All edges among vertices 0..m-1 therefore occupy a prefix
of the code vector, which lets one-vertex extensions append a row and lets
canonical forms be prefix-closed (the property the orderly search relies on).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import (
    ColorOutOfRange,
    DuplicateEdge,
    MissingEdge,
    NotABijection,
    UnsupportedPattern,
)

MAX_VERTICES = 64


def pair_index(u: int, v: int) -> int:
    """Colex index of the unordered pair {u, v}."""
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def all_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Unordered pairs in colex order (matching the code vector layout)."""
    for v in range(1, n):
        for u in range(v):
            yield (u, v)


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> Iterator[int]:
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


@dataclass(frozen=True)
class SimpleGraph:
    """An uncolored graph on vertices 0..n-1, adjacency as bitmask rows."""

    n: int
    adj: tuple[int, ...]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in all_pairs(self.n) if self.has_edge(u, v)]

    def edge_count(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def max_degree(self) -> int:
        return max((popcount(row) for row in self.adj), default=0)


class PatternKind(Enum):
    PATH = "path"
    CYCLE = "cycle"
    COMPLETE_BIPARTITE = "complete_bipartite"
    SINGLE_EDGE = "single_edge"
    LINEAR_FOREST = "linear_forest"


@dataclass(frozen=True, order=True)
class PatternGraph:
    """A small target graph to be found as a (monochromatic) subgraph.

    Paths and cycles are parametrized by vertex count, complete bipartite
    patterns by the two side sizes, and linear forests by the multiset of
    path orders of their components (used internally when search constraints
    are pushed down through substitutions).
    """

    kind: PatternKind
    a: int = 0
    b: int = 0
    segments: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind is PatternKind.PATH and self.a < 2:
            raise UnsupportedPattern(f"path order must be >= 2, got {self.a}")
        if self.kind is PatternKind.CYCLE and self.a < 3:
            raise UnsupportedPattern(f"cycle order must be >= 3, got {self.a}")
        if self.kind is PatternKind.COMPLETE_BIPARTITE:
            if not (1 <= self.a <= self.b):
                raise UnsupportedPattern(
                    f"bipartite sides must satisfy 1 <= a <= b, got ({self.a},{self.b})"
                )
        if self.kind is PatternKind.LINEAR_FOREST:
            if not self.segments or any(s < 1 for s in self.segments):
                raise UnsupportedPattern("forest segments must be positive")
            if tuple(sorted(self.segments, reverse=True)) != self.segments:
                raise UnsupportedPattern("forest segments must be sorted descending")

    @staticmethod
    def path(order: int) -> "PatternGraph":
        if order == 2:
            return PatternGraph(PatternKind.SINGLE_EDGE, 2)
        return PatternGraph(PatternKind.PATH, order)

    @staticmethod
    def cycle(order: int) -> "PatternGraph":
        return PatternGraph(PatternKind.CYCLE, order)

    @staticmethod
    def complete_bipartite(a: int, b: int) -> "PatternGraph":
        if a > b:
            a, b = b, a
        return PatternGraph(PatternKind.COMPLETE_BIPARTITE, a, b)

    @staticmethod
    def single_edge() -> "PatternGraph":
        return PatternGraph(PatternKind.SINGLE_EDGE, 2)

    @staticmethod
    def linear_forest(segments: Iterable[int]) -> "PatternGraph":
        segs = tuple(sorted(segments, reverse=True))
        if segs and max(segs) >= 2 and len(segs) == 1:
            return PatternGraph.path(segs[0])
        return PatternGraph(PatternKind.LINEAR_FOREST, segments=segs)

    @property
    def order(self) -> int:
        """Number of vertices of the pattern."""
        if self.kind in (PatternKind.PATH, PatternKind.CYCLE):
            return self.a
        if self.kind is PatternKind.COMPLETE_BIPARTITE:
            return self.a + self.b
        if self.kind is PatternKind.SINGLE_EDGE:
            return 2
        return sum(self.segments)

    def __str__(self) -> str:
        if self.kind is PatternKind.PATH:
            return f"P{self.a}"
        if self.kind is PatternKind.CYCLE:
            return f"C{self.a}"
        if self.kind is PatternKind.COMPLETE_BIPARTITE:
            return f"K{self.a},{self.b}"
        if self.kind is PatternKind.SINGLE_EDGE:
            return "P2"
        return "+".join(f"P{s}" for s in self.segments)


def parse_pattern(text: str) -> PatternGraph:
    """Parse a pattern name such as P5, C8, K3, K2,3 or P3+P1."""
    s = text.strip().upper()
    if "+" in s:
        segs = []
        for part in s.split("+"):
            part = part.strip()
            if not part.startswith("P") or not part[1:].isdigit():
                raise UnsupportedPattern(f"cannot parse forest component {part!r}")
            segs.append(int(part[1:]))
        return PatternGraph.linear_forest(segs)
    if s.startswith("P") and s[1:].isdigit():
        return PatternGraph.path(int(s[1:]))
    if s.startswith("C") and s[1:].isdigit():
        return PatternGraph.cycle(int(s[1:]))
    if s.startswith("K"):
        body = s[1:]
        if "," in body:
            a, b = body.split(",", 1)
            if a.isdigit() and b.isdigit():
                return PatternGraph.complete_bipartite(int(a), int(b))
        elif body == "3":
            # K3 is the triangle
            return PatternGraph.cycle(3)
        elif body == "2":
            return PatternGraph.single_edge()
    raise UnsupportedPattern(f"cannot parse pattern {text!r}")


def pattern_sort_key(p: PatternGraph) -> tuple:
    return (p.kind.value, p.a, p.b, p.segments)


# The four nested targets used throughout: removing vertices from an 8-cycle
# yields P7, P5, P3 in turn.
P3 = PatternGraph.path(3)
P5 = PatternGraph.path(5)
P7 = PatternGraph.path(7)
C8 = PatternGraph.cycle(8)
CHAIN = (P3, P5, P7, C8)


@dataclass(frozen=True)
class TargetSpec:
    """Forbidden monochromatic patterns per color (1-based colors).

    ``per_color[j]`` is the set of patterns forbidden in color j+1.  When
    every color forbids exactly one member of the nested chain P3 < P5 < P7
    < C8, the spec has a well-defined weight sigma = sum of chain indices.
    """

    per_color: tuple[frozenset, ...]

    @property
    def k(self) -> int:
        return len(self.per_color)

    @property
    def sigma(self) -> Optional[int]:
        total = 0
        for targets in self.per_color:
            if len(targets) != 1:
                return None
            (p,) = targets
            if p == PatternGraph.path(3):
                total += 0
            elif p == P5:
                total += 1
            elif p == P7:
                total += 2
            elif p == C8:
                total += 3
            else:
                return None
        return total

    @staticmethod
    def of(*target_sets: Iterable[PatternGraph]) -> "TargetSpec":
        return TargetSpec(tuple(frozenset(ts) for ts in target_sets))

    @staticmethod
    def uniform(pattern: PatternGraph, k: int) -> "TargetSpec":
        return TargetSpec(tuple(frozenset([pattern]) for _ in range(k)))

    @staticmethod
    def chain(indices: Sequence[int]) -> "TargetSpec":
        """Spec with color j forbidding the chain member of index indices[j-1]."""
        sets = []
        for i in indices:
            if not 0 <= i <= 3:
                raise ValueError(f"chain index must be in 0..3, got {i}")
            sets.append(frozenset([CHAIN[i]]))
        return TargetSpec(tuple(sets))

    def targets(self, color: int) -> frozenset:
        if not 1 <= color <= self.k:
            raise ColorOutOfRange(f"color {color} outside 1..{self.k}")
        return self.per_color[color - 1]

    def key(self) -> tuple:
        """Hashable canonical description (order of colors preserved)."""
        return tuple(
            tuple(sorted(map(str, ts))) for ts in self.per_color
        )

    def group_labels(self) -> tuple[int, ...]:
        """Map each color to a group id; colors with equal targets share one.

        Group ids are assigned by sorting the target descriptions, so they do
        not depend on the order colors happen to appear in.
        """
        keys = [tuple(sorted(map(str, ts))) for ts in self.per_color]
        ordered = sorted(set(keys))
        index = {key: i for i, key in enumerate(ordered)}
        return tuple(index[key] for key in keys)

    def with_color(self, targets: Iterable[PatternGraph]) -> "TargetSpec":
        return TargetSpec(self.per_color + (frozenset(targets),))


@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism-invariant fingerprint of a coloring."""

    digest: str
    mode: str  # "fixed" or "permutable"


@dataclass(frozen=True)
class ColoredComplete:
    """A k-edge-colored complete graph on vertices 0..n-1.

    ``codes[pair_index(u, v)]`` is the color (1..k) of edge {u, v}.  Colors
    beyond those actually used are permitted: a small filling inside a larger
    search carries the full palette of the enclosing problem.
    """

    n: int
    k: int
    codes: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        if self.k < 1:
            raise ColorOutOfRange("need at least one color")
        if len(self.codes) != pair_count(self.n):
            raise MissingEdge(
                f"expected {pair_count(self.n)} edge codes, got {len(self.codes)}"
            )

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("diagonal is undefined")
        return self.codes[pair_index(u, v)]

    def adjacency(self, color: int) -> tuple[int, ...]:
        """Bitmask adjacency rows of the given color class (cached)."""
        if not 1 <= color <= self.k:
            raise ColorOutOfRange(f"color {color} outside 1..{self.k}")
        cache = self.__dict__.get("_adj")
        if cache is None:
            cache = {}
            object.__setattr__(self, "_adj", cache)
        rows = cache.get(color)
        if rows is None:
            acc = [0] * self.n
            codes = self.codes
            idx = 0
            for v in range(1, self.n):
                for u in range(v):
                    if codes[idx] == color:
                        acc[u] |= 1 << v
                        acc[v] |= 1 << u
                    idx += 1
            rows = tuple(acc)
            cache[color] = rows
        return rows

    def used_colors(self) -> frozenset[int]:
        return frozenset(self.codes)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for (u, v), c in zip(all_pairs(self.n), self.codes):
            yield (u, v, c)

    def induced(self, vertices: Sequence[int]) -> "ColoredComplete":
        """Sub-coloring on the given vertices (in the given order)."""
        verts = list(vertices)
        codes = tuple(
            self.color(verts[u], verts[v]) for u, v in all_pairs(len(verts))
        )
        return ColoredComplete(len(verts), self.k, codes)

    def with_colors(self, k: int) -> "ColoredComplete":
        """Same coloring over a palette of k colors."""
        if k < max(self.codes, default=1):
            raise ColorOutOfRange("palette smaller than a used color")
        return ColoredComplete(self.n, k, self.codes)

    @staticmethod
    def from_function(
        n: int, k: int, color_of: Callable[[int, int], int]
    ) -> "ColoredComplete":
        codes = tuple(color_of(u, v) for u, v in all_pairs(n))
        return ColoredComplete(n, k, codes)

    @staticmethod
    def monochromatic(n: int, k: int = 1, color: int = 1) -> "ColoredComplete":
        return ColoredComplete(n, k, tuple([color] * pair_count(n)))


def build_coloring(
    n: int, k: int, edges: Iterable[tuple[int, int, int]]
) -> ColoredComplete:
    """Build a coloring from an explicit edge list, rejecting gaps and dupes."""
    if not 1 <= n <= MAX_VERTICES:
        raise ValueError(f"vertex count {n} outside 1..{MAX_VERTICES}")
    codes: list[Optional[int]] = [None] * pair_count(n)
    for u, v, c in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise MissingEdge(f"edge ({u},{v}) is not a vertex pair of K_{n}")
        if not 1 <= c <= k:
            raise ColorOutOfRange(f"color {c} outside 1..{k} on edge ({u},{v})")
        idx = pair_index(u, v)
        if codes[idx] is not None:
            raise DuplicateEdge(f"edge ({u},{v}) assigned twice")
        codes[idx] = c
    for (u, v), c in zip(all_pairs(n), codes):
        if c is None:
            raise MissingEdge(f"edge ({u},{v}) never assigned")
    return ColoredComplete(n, k, tuple(codes))  # type: ignore[arg-type]


def color_class(g: ColoredComplete, color: int) -> SimpleGraph:
    """The simple graph formed by the edges of one color."""
    return SimpleGraph(g.n, g.adjacency(color))


def apply_permutation(
    g: ColoredComplete,
    vertex_perm: Optional[Sequence[int]] = None,
    color_perm: Optional[Sequence[int]] = None,
) -> ColoredComplete:
    """Relabel vertices and/or colors.

    ``vertex_perm[v]`` is the image of vertex v; ``color_perm[c-1]`` the image
    of color c.  The new coloring satisfies
    color'(sigma(u), sigma(v)) = pi(color(u, v)).
    """
    n, k = g.n, g.k
    if vertex_perm is None:
        vertex_perm = range(n)
    if color_perm is None:
        color_perm = range(1, k + 1)
    vp = list(vertex_perm)
    cp = list(color_perm)
    if sorted(vp) != list(range(n)):
        raise NotABijection("vertex permutation is not a bijection on 0..n-1")
    if sorted(cp) != list(range(1, k + 1)):
        raise NotABijection("color permutation is not a bijection on 1..k")
    codes = [0] * pair_count(n)
    for (u, v), c in zip(all_pairs(n), g.codes):
        codes[pair_index(vp[u], vp[v])] = cp[c - 1]
    return ColoredComplete(n, k, tuple(codes))


# --- canonicalization ------------------------------------------------------
#
# The canonical word of a coloring is the minimum, over all vertex orderings
# compatible with an invariant refinement partition, of the colex edge-color
# sequence with colors renamed by first use inside their permutation group.
# Renaming makes the word invariant under allowed color permutations; taking
# the minimum makes it invariant under relabeling.


def _twin_classes(g: ColoredComplete) -> list[int]:
    """Partition vertices into classes of pairwise twins.

    u and w are twins when color(u, x) == color(w, x) for every other vertex
    x; swapping them is then an automorphism, so the word minimizer only needs
    to branch on one representative.
    """
    n = g.n
    ids = list(range(n))
    for u in range(n):
        if ids[u] != u:
            continue
        for w in range(u + 1, n):
            if ids[w] != w:
                continue
            if all(
                g.color(u, x) == g.color(w, x)
                for x in range(n)
                if x != u and x != w
            ):
                ids[w] = u
    return ids


def _refine_cells(g: ColoredComplete, groups: tuple[int, ...]) -> list[int]:
    """Stable 1-WL style refinement; returns a cell index per vertex.

    Cell indices are assigned in sorted key order, so they are invariant
    under vertex relabeling and group-preserving color permutations.
    """
    n = g.n
    cls = [0] * n
    while True:
        keys = []
        for v in range(n):
            profile = sorted(
                (cls[u], groups[g.color(v, u) - 1]) for u in range(n) if u != v
            )
            keys.append((cls[v], tuple(profile)))
        order = {key: i for i, key in enumerate(sorted(set(keys)))}
        new = [order[key] for key in keys]
        if new == cls:
            return cls
        cls = new


def _canonical_word(
    g: ColoredComplete, groups: tuple[int, ...]
) -> tuple[int, ...]:
    n = g.n
    if n == 1:
        return ()
    cells = _refine_cells(g, groups)
    twins = _twin_classes(g)
    n_groups = max(groups) + 1
    span = max(groups.count(gi) for gi in range(n_groups))
    # symbol = group * span + first-use rank within the group
    color_cache = g.codes
    best: list[Optional[list[int]]] = [None]
    gen = [0]  # bumped whenever best is replaced

    order: list[int] = []
    placed = [False] * n
    rename: dict[int, int] = {}
    rank_used = [0] * n_groups

    def extend(pos: int, word: list[int], tight: bool) -> None:
        # invariant: if tight, word equals the current best prefix; otherwise
        # word is strictly smaller (or no best exists yet)
        if pos == n:
            if best[0] is None or not tight:
                best[0] = word.copy()
                gen[0] += 1
            return
        cell = min(cells[v] for v in range(n) if not placed[v])
        cand = sorted(v for v in range(n) if not placed[v] and cells[v] == cell)
        tried: set[int] = set()
        base = len(word)
        entry_gen = gen[0]
        for v in cand:
            if twins[v] in tried:
                continue
            tried.add(twins[v])
            # any best update since node entry extended this node's prefix,
            # so the prefix is now exactly equal to the best prefix
            cur_tight = tight if gen[0] == entry_gen else True
            bw = best[0]
            seg: list[int] = []
            fresh: list[int] = []
            less = not cur_tight and bw is not None
            worse = False
            for s, u in enumerate(order):
                c = color_cache[pair_index(u, v)] if u < v else color_cache[
                    pair_index(v, u)
                ]
                sym = rename.get(c)
                if sym is None:
                    grp = groups[c - 1]
                    sym = grp * span + rank_used[grp]
                    rank_used[grp] += 1
                    rename[c] = sym
                    fresh.append(c)
                seg.append(sym)
                if not less and bw is not None:
                    ref = bw[base + s]
                    if sym > ref:
                        worse = True
                        break
                    if sym < ref:
                        less = True
            if not worse:
                order.append(v)
                placed[v] = True
                word.extend(seg)
                extend(pos + 1, word, bw is not None and not less)
                del word[base:]
                placed[v] = False
                order.pop()
            for c in reversed(fresh):
                rank_used[groups[c - 1]] -= 1
                del rename[c]

    extend(0, [], False)
    assert best[0] is not None
    return tuple(best[0])


def canonical_key_groups(g: ColoredComplete, groups: tuple[int, ...]) -> tuple:
    """Canonical key under an explicit color-group assignment."""
    return (g.n, _canonical_word(g, groups))


def canonical_key(
    g: ColoredComplete, spec: Optional[TargetSpec] = None
) -> tuple:
    """Total-order key equal across isomorphic colorings.

    With a spec, colors inside equal-target groups count as interchangeable;
    without one every color is its own group (vertex relabeling only).
    """
    if spec is not None:
        if spec.k != g.k:
            from .errors import SpecArityMismatch

            raise SpecArityMismatch(
                f"spec has {spec.k} colors, coloring has {g.k}"
            )
        groups = spec.group_labels()
    else:
        groups = tuple(range(g.k))
    return (g.n, _canonical_word(g, groups))


def canonical_form(
    g: ColoredComplete, spec: Optional[TargetSpec] = None
) -> CanonicalForm:
    """Digest invariant under relabeling (and allowed color permutation)."""
    key = canonical_key(g, spec)
    mode = "permutable" if spec is not None else "fixed"
    payload = repr((key[0], mode, key[1])).encode()
    return CanonicalForm(hashlib.sha256(payload).hexdigest(), mode)
