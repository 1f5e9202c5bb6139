"""Witness-producing detectors for rainbow triangles and monochromatic patterns.

Two layers: ``has_pattern`` answers existence with polynomially bounded
bitmask dynamic programming (safe inside search loops, where the pattern is
usually absent), and ``find_pattern`` produces the lexicographically least
embedding by ascending depth-first search (used when a witness must be
reported).  Containment is subgraph containment throughout, per Ramsey
convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import SpecArityMismatch, UnsupportedPattern
from .model import (
    ColoredComplete,
    PatternGraph,
    PatternKind,
    SimpleGraph,
    TargetSpec,
    bits,
    color_class,
    pattern_sort_key,
    popcount,
)


class WitnessKind(Enum):
    RAINBOW_TRIANGLE = "rainbow_triangle"
    MONO_PATTERN = "mono_pattern"


@dataclass(frozen=True)
class Witness:
    """A self-verifying claim: a rainbow triangle or a monochromatic pattern."""

    kind: WitnessKind
    vertices: tuple[int, ...]
    color: int = 0
    pattern: Optional[PatternGraph] = None

    def check(self, g: ColoredComplete) -> bool:
        """Re-check the claim against the host coloring."""
        vs = self.vertices
        if self.kind is WitnessKind.RAINBOW_TRIANGLE:
            if len(vs) != 3:
                return False
            a, b, c = vs
            colors = {g.color(a, b), g.color(a, c), g.color(b, c)}
            return len(colors) == 3
        assert self.pattern is not None
        if len(set(vs)) != len(vs) or len(vs) != self.pattern.order:
            return False
        return all(
            g.color(u, v) == self.color for u, v in embedding_edges(self.pattern, vs)
        )


@dataclass(frozen=True)
class AuditResult:
    clean: bool
    witness: Optional[Witness] = None

    def __post_init__(self):
        assert self.clean == (self.witness is None)


def embedding_edges(p: PatternGraph, verts: tuple[int, ...]) -> list[tuple[int, int]]:
    """Edges a vertex tuple must realize to embed the pattern."""
    if p.kind in (PatternKind.PATH, PatternKind.SINGLE_EDGE):
        return list(zip(verts, verts[1:]))
    if p.kind is PatternKind.CYCLE:
        return list(zip(verts, verts[1:])) + [(verts[-1], verts[0])]
    if p.kind is PatternKind.COMPLETE_BIPARTITE:
        left, right = verts[: p.a], verts[p.a :]
        return [(u, v) for u in left for v in right]
    if p.kind is PatternKind.LINEAR_FOREST:
        edges = []
        pos = 0
        for seg in p.segments:
            chunk = verts[pos : pos + seg]
            edges.extend(zip(chunk, chunk[1:]))
            pos += seg
        return edges
    raise UnsupportedPattern(str(p.kind))


# --- existence layer --------------------------------------------------------


def _components(adj: tuple[int, ...], universe: int) -> list[int]:
    comps = []
    todo = universe
    while todo:
        seed = todo & -todo
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for v in bits(frontier):
                grow |= adj[v] & universe
            frontier = grow & ~comp
            comp |= frontier
        comps.append(comp)
        todo &= ~comp
    return comps


def _two_core(adj: tuple[int, ...], universe: int) -> int:
    """Iteratively strip vertices of degree <= 1; cycles survive."""
    core = universe
    changed = True
    while changed:
        changed = False
        for v in bits(core):
            if popcount(adj[v] & core) <= 1:
                core &= ~(1 << v)
                changed = True
    return core


def _has_path_dp(adj: tuple[int, ...], universe: int, m: int) -> bool:
    """Path on m vertices inside the universe, via (mask, ends) frontier DP."""
    if m <= 1:
        return popcount(universe) >= m
    if popcount(universe) < m:
        return False
    frontier: dict[int, int] = {}
    for v in bits(universe):
        if adj[v] & universe:
            frontier[1 << v] = 1 << v
    for _ in range(m - 1):
        nxt: dict[int, int] = {}
        for mask, ends in frontier.items():
            for e in bits(ends):
                grow = adj[e] & universe & ~mask
                for u in bits(grow):
                    key = mask | (1 << u)
                    nxt[key] = nxt.get(key, 0) | (1 << u)
        if not nxt:
            return False
        frontier = nxt
    return True


def _has_cycle_dp(adj: tuple[int, ...], universe: int, m: int) -> bool:
    """Cycle on m vertices: anchored path DP returning to a neighbor."""
    core = _two_core(adj, universe)
    if popcount(core) < m:
        return False
    for comp in _components(adj, core):
        if popcount(comp) < m:
            continue
        verts = list(bits(comp))
        for i, a in enumerate(verts):
            # a is the least vertex of the candidate cycle
            allowed = 0
            for v in verts[i:]:
                allowed |= 1 << v
            frontier = {1 << a: 1 << a}
            for _ in range(m - 1):
                nxt: dict[int, int] = {}
                for mask, ends in frontier.items():
                    for e in bits(ends):
                        grow = adj[e] & allowed & ~mask
                        for u in bits(grow):
                            key = mask | (1 << u)
                            nxt[key] = nxt.get(key, 0) | (1 << u)
                frontier = nxt
                if not frontier:
                    break
            for mask, ends in frontier.items():
                if ends & adj[a]:
                    return True
    return False


def _has_bipartite(adj: tuple[int, ...], universe: int, a: int, b: int) -> bool:
    """K_{a,b} containment; specialised to the a == 2 common-neighborhood scan."""
    n_bits = popcount(universe)
    if n_bits < a + b:
        return False
    if a == 1:
        return any(popcount(adj[v] & universe) >= b for v in bits(universe))
    if a == 2:
        vs = list(bits(universe))
        for i, u in enumerate(vs):
            for v in vs[i + 1 :]:
                common = adj[u] & adj[v] & universe & ~(1 << u) & ~(1 << v)
                if popcount(common) >= b:
                    return True
        return False
    raise UnsupportedPattern(f"complete bipartite side {a} not supported")


def _place_segments(
    adj: tuple[int, ...], universe: int, segs: tuple[int, ...], idx: int
) -> bool:
    """Vertex-disjoint placement of path segments (all of order >= 2)."""
    if idx == len(segs):
        return True
    m = segs[idx]

    def walk(mask: int, end: int, left: int) -> bool:
        if left == 0:
            return _place_segments(adj, universe & ~mask, segs, idx + 1)
        for u in bits(adj[end] & universe & ~mask):
            if walk(mask | (1 << u), u, left - 1):
                return True
        return False

    for v in bits(universe):
        if walk(1 << v, v, m - 1):
            return True
    return False


def _has_forest(adj: tuple[int, ...], universe: int, segments: tuple[int, ...]) -> bool:
    total = sum(segments)
    if popcount(universe) < total:
        return False
    real = tuple(s for s in segments if s >= 2)
    if not real:
        return True
    # capacity pre-filter: segments cannot outgrow their components
    caps = sorted((popcount(c) for c in _components(adj, universe)), reverse=True)
    need = sorted(real, reverse=True)
    if not caps or need[0] > caps[0] or sum(need) > sum(caps):
        return False
    return _place_segments(adj, universe, need, 0)


def has_pattern(
    h: SimpleGraph, p: PatternGraph, universe: Optional[int] = None
) -> bool:
    """Whether the pattern embeds in the graph (existence only)."""
    if universe is None:
        universe = (1 << h.n) - 1
    if p.order > popcount(universe):
        return False
    if p.kind in (PatternKind.PATH, PatternKind.SINGLE_EDGE):
        return _has_path_dp(h.adj, universe, p.a if p.kind is PatternKind.PATH else 2)
    if p.kind is PatternKind.CYCLE:
        return _has_cycle_dp(h.adj, universe, p.a)
    if p.kind is PatternKind.COMPLETE_BIPARTITE:
        return _has_bipartite(h.adj, universe, p.a, p.b)
    if p.kind is PatternKind.LINEAR_FOREST:
        return _has_forest(h.adj, universe, p.segments)
    raise UnsupportedPattern(str(p.kind))


# --- witness layer ----------------------------------------------------------


def _find_path_seq(h: SimpleGraph, m: int) -> Optional[tuple[int, ...]]:
    adj = h.adj
    if m == 1:
        return (0,) if h.n >= 1 else None

    def extend(seq: list[int], mask: int) -> Optional[tuple[int, ...]]:
        if len(seq) == m:
            return tuple(seq)
        for u in bits(adj[seq[-1]] & ~mask):
            seq.append(u)
            out = extend(seq, mask | (1 << u))
            if out is not None:
                return out
            seq.pop()
        return None

    for v in range(h.n):
        out = extend([v], 1 << v)
        if out is not None:
            return out
    return None


def _find_cycle_seq(h: SimpleGraph, m: int) -> Optional[tuple[int, ...]]:
    adj = h.adj

    def extend(seq: list[int], mask: int, anchor: int) -> Optional[tuple[int, ...]]:
        if len(seq) == m:
            if adj[seq[-1]] >> anchor & 1 and seq[1] < seq[-1]:
                return tuple(seq)
            return None
        for u in bits(adj[seq[-1]] & ~mask):
            if u < anchor:
                continue
            seq.append(u)
            out = extend(seq, mask | (1 << u), anchor)
            if out is not None:
                return out
            seq.pop()
        return None

    for a in range(h.n):
        out = extend([a], 1 << a, a)
        if out is not None:
            return out
    return None


def _find_bipartite_seq(
    h: SimpleGraph, a: int, b: int
) -> Optional[tuple[int, ...]]:
    if a == 1:
        for v in range(h.n):
            if popcount(h.adj[v]) >= b:
                picks = sorted(bits(h.adj[v]))[:b]
                return (v, *picks)
        return None
    if a == 2:
        for u in range(h.n):
            for v in range(u + 1, h.n):
                common = h.adj[u] & h.adj[v] & ~(1 << u) & ~(1 << v)
                if popcount(common) >= b:
                    picks = sorted(bits(common))[:b]
                    return (u, v, *picks)
        return None
    raise UnsupportedPattern(f"complete bipartite side {a} not supported")


def _find_forest_seq(
    h: SimpleGraph, segments: tuple[int, ...]
) -> Optional[tuple[int, ...]]:
    universe = (1 << h.n) - 1
    real = [s for s in segments if s >= 2]
    singles = len(segments) - len(real)

    def place(idx: int, used: int, acc: list[int]) -> Optional[tuple[int, ...]]:
        if idx == len(real):
            free = sorted(bits(universe & ~used))
            if len(free) < singles:
                return None
            return tuple(acc + free[:singles])
        m = real[idx]

        def walk(seq: list[int], mask: int) -> Optional[tuple[int, ...]]:
            if len(seq) == m:
                return place(idx + 1, used | mask, acc + seq)
            for u in bits(h.adj[seq[-1]] & ~used & ~mask):
                seq.append(u)
                out = walk(seq, mask | (1 << u))
                if out is not None:
                    return out
                seq.pop()
            return None

        for v in bits(universe & ~used):
            out = walk([v], 1 << v)
            if out is not None:
                return out
        return None

    return place(0, 0, [])


def find_pattern(h: SimpleGraph, p: PatternGraph) -> Optional[tuple[int, ...]]:
    """Lexicographically least embedding of the pattern, or None."""
    if p.order > h.n:
        return None
    if p.kind is PatternKind.SINGLE_EDGE:
        return _find_path_seq(h, 2)
    if p.kind is PatternKind.PATH:
        return _find_path_seq(h, p.a)
    if p.kind is PatternKind.CYCLE:
        return _find_cycle_seq(h, p.a)
    if p.kind is PatternKind.COMPLETE_BIPARTITE:
        return _find_bipartite_seq(h, p.a, p.b)
    if p.kind is PatternKind.LINEAR_FOREST:
        return _find_forest_seq(h, p.segments)
    raise UnsupportedPattern(str(p.kind))


def contains_pattern(h: SimpleGraph, p: PatternGraph) -> Optional[tuple[int, ...]]:
    """Public detector: an embedding of p in h iff one exists (exact search)."""
    if has_pattern(h, p):
        out = find_pattern(h, p)
        assert out is not None
        return out
    return None


# --- pinned existence (used by the edge-extension search) -------------------


def has_path_through(h: SimpleGraph, m: int, v: int) -> bool:
    """Path on m vertices that uses vertex v."""
    adj = h.adj

    def arm(seq_end: int, mask: int, left: int, then) -> bool:
        if left == 0:
            return then(mask)
        for u in bits(adj[seq_end] & ~mask):
            if arm(u, mask | (1 << u), left - 1, then):
                return True
        return False

    base = 1 << v
    for a in range(m):
        b = m - 1 - a
        if arm(v, base, a, lambda mask: arm(v, mask | base, b, lambda _: True)):
            return True
    return False


def has_cycle_through(h: SimpleGraph, m: int, v: int) -> bool:
    """Cycle on m vertices through v: a path of m vertices from v ending at a neighbor."""
    adj = h.adj

    def walk(end: int, mask: int, left: int) -> bool:
        if left == 0:
            return bool(adj[end] >> v & 1)
        for u in bits(adj[end] & ~mask):
            if walk(u, mask | (1 << u), left - 1):
                return True
        return False

    return walk(v, 1 << v, m - 1)


def has_pattern_through(h: SimpleGraph, p: PatternGraph, v: int) -> bool:
    """Whether some embedding of p uses vertex v."""
    if p.order > h.n:
        return False
    if p.kind is PatternKind.SINGLE_EDGE:
        return bool(h.adj[v])
    if p.kind is PatternKind.PATH:
        return has_path_through(h, p.a, v)
    if p.kind is PatternKind.CYCLE:
        return has_cycle_through(h, p.a, v)
    if p.kind is PatternKind.COMPLETE_BIPARTITE:
        a, b = p.a, p.b
        # v on the small side
        for u in range(h.n):
            if u == v:
                continue
            common = h.adj[u] & h.adj[v] & ~(1 << u) & ~(1 << v)
            if a == 2 and popcount(common) >= b:
                return True
            # v on the large side: u, w joined to v and b-1 others
            if a == 2:
                for w in range(u + 1, h.n):
                    if w == v:
                        continue
                    cm = h.adj[u] & h.adj[w] & ~(1 << u) & ~(1 << w)
                    if cm >> v & 1 and popcount(cm) >= b:
                        return True
        if a == 1:
            if popcount(h.adj[v]) >= b:
                return True
            return any(
                h.adj[u] >> v & 1 and popcount(h.adj[u]) >= b
                for u in range(h.n)
                if u != v
            )
        return False
    raise UnsupportedPattern(str(p.kind))


# --- path endpoint structures (used by the edge-extension search) -----------


def path_end_sets(
    adj: tuple[int, ...], universe: int, m: int
) -> tuple[set[int], set[tuple[int, int]]]:
    """Endpoints of paths on m vertices inside the universe.

    Returns (singles, pairs): ``singles`` is the set of vertices that end some
    m-vertex path, ``pairs`` the set of ordered-min endpoint pairs (a, b) with
    a <= b realized by some m-vertex path.
    """
    singles: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    if m == 1:
        for v in bits(universe):
            singles.add(v)
            pairs.add((v, v))
        return singles, pairs
    # frontier: mask -> {start: endmask}
    frontier: dict[int, dict[int, int]] = {}
    for v in bits(universe):
        frontier[1 << v] = {v: 1 << v}
    for _ in range(m - 1):
        nxt: dict[int, dict[int, int]] = {}
        for mask, by_start in frontier.items():
            for start, ends in by_start.items():
                for e in bits(ends):
                    grow = adj[e] & universe & ~mask
                    for u in bits(grow):
                        key = mask | (1 << u)
                        slot = nxt.setdefault(key, {})
                        slot[start] = slot.get(start, 0) | (1 << u)
        frontier = nxt
        if not frontier:
            return singles, pairs
    for by_start in frontier.values():
        for start, ends in by_start.items():
            for e in bits(ends):
                singles.add(start)
                singles.add(e)
                pairs.add((min(start, e), max(start, e)))
    return singles, pairs


def disjoint_path_pair_ends(
    adj: tuple[int, ...], universe: int, a: int, b: int
) -> set[tuple[int, int]]:
    """Endpoint pairs (x, y) of two vertex-disjoint paths on a and b vertices."""
    out: set[tuple[int, int]] = set()

    def paths(m: int):
        """(mask, endpoints-set) for all m-vertex paths in the universe."""
        if m == 1:
            for v in bits(universe):
                yield 1 << v, {v}
            return
        frontier: dict[int, dict[int, int]] = {}
        for v in bits(universe):
            frontier[1 << v] = {v: 1 << v}
        for _ in range(m - 1):
            nxt: dict[int, dict[int, int]] = {}
            for mask, by_start in frontier.items():
                for start, ends in by_start.items():
                    for e in bits(ends):
                        for u in bits(adj[e] & universe & ~mask):
                            key = mask | (1 << u)
                            slot = nxt.setdefault(key, {})
                            slot[start] = slot.get(start, 0) | (1 << u)
            frontier = nxt
            if not frontier:
                return
        for mask, by_start in frontier.items():
            endpoints = set()
            for start, ends in by_start.items():
                for e in bits(ends):
                    endpoints.add(start)
                    endpoints.add(e)
            yield mask, endpoints

    first = list(paths(a))
    for mask_a, ends_a in first:
        sub = universe & ~mask_a
        if b == 1:
            for y in bits(sub):
                for x in ends_a:
                    out.add((x, y))
            continue
        frontier: dict[int, dict[int, int]] = {}
        for v in bits(sub):
            frontier[1 << v] = {v: 1 << v}
        for _ in range(b - 1):
            nxt: dict[int, dict[int, int]] = {}
            for mask, by_start in frontier.items():
                for start, ends in by_start.items():
                    for e in bits(ends):
                        for u in bits(adj[e] & sub & ~mask):
                            key = mask | (1 << u)
                            slot = nxt.setdefault(key, {})
                            slot[start] = slot.get(start, 0) | (1 << u)
            frontier = nxt
            if not frontier:
                break
        for by_start in frontier.values():
            for start, ends in by_start.items():
                for e in bits(ends):
                    for x in ends_a:
                        out.add((x, start))
                        out.add((x, e))
    return out


# --- coloring-level audits ---------------------------------------------------


def find_rainbow_triangle(g: ColoredComplete) -> Optional[Witness]:
    """Lexicographically least triangle with three distinct edge colors."""
    n = g.n
    for i in range(n):
        for j in range(i + 1, n):
            cij = g.color(i, j)
            for l in range(j + 1, n):
                cil = g.color(i, l)
                if cil == cij:
                    continue
                cjl = g.color(j, l)
                if cjl != cij and cjl != cil:
                    return Witness(WitnessKind.RAINBOW_TRIANGLE, (i, j, l))
    return None


def is_matching(h: SimpleGraph) -> bool:
    """True iff max degree <= 1 (equivalently, no P3)."""
    return h.max_degree() <= 1


def audit(g: ColoredComplete, spec: TargetSpec) -> AuditResult:
    """Decide whether the coloring defeats the spec, with a witness if not."""
    if spec.k != g.k:
        raise SpecArityMismatch(f"spec has {spec.k} colors, coloring has {g.k}")
    rainbow = find_rainbow_triangle(g)
    if rainbow is not None:
        return AuditResult(False, rainbow)
    for color in range(1, g.k + 1):
        targets = spec.targets(color)
        if not targets:
            continue
        h = color_class(g, color)
        for p in sorted(targets, key=pattern_sort_key):
            if has_pattern(h, p):
                verts = find_pattern(h, p)
                assert verts is not None
                return AuditResult(
                    False, Witness(WitnessKind.MONO_PATTERN, verts, color, p)
                )
    return AuditResult(True)


def is_clean(g: ColoredComplete, spec: TargetSpec) -> bool:
    """Existence-only audit (no witness construction)."""
    if spec.k != g.k:
        raise SpecArityMismatch(f"spec has {spec.k} colors, coloring has {g.k}")
    if find_rainbow_triangle(g) is not None:
        return False
    for color in range(1, g.k + 1):
        targets = spec.targets(color)
        if not targets:
            continue
        h = color_class(g, color)
        if any(has_pattern(h, p) for p in targets):
            return False
    return True
