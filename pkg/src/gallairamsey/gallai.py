"""Gallai partition decomposition, reduced graphs, and substitution.

Every rainbow-triangle-free coloring of a complete graph on at least two
vertices admits a nontrivial vertex partition with at most two colors between
parts and one color between each pair of parts.  This module finds such a
partition constructively, extracts the reduced coloring, and inverts the
operation (blow-up / substitution).  The decomposition is the structural
engine behind both the proof fixtures and the enumerator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .detect import find_rainbow_triangle
from .errors import (
    ColorCollision,
    InvalidPartition,
    NotAPartition,
    RainbowTrianglePresent,
)
from .model import (
    ColoredComplete,
    all_pairs,
    bits,
    pair_count,
    pair_index,
)


@dataclass(frozen=True)
class GPartition:
    """A Gallai partition: parts plus the color joining each pair of parts.

    ``parts`` are disjoint, nonempty, sorted internally and ordered by least
    vertex; ``pair_colors[pair_index(i, j)]`` is the single color on all edges
    between parts i and j.
    """

    parts: tuple[tuple[int, ...], ...]
    pair_colors: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.parts)

    @property
    def between_colors(self) -> frozenset[int]:
        return frozenset(self.pair_colors)

    def pair_color(self, i: int, j: int) -> int:
        return self.pair_colors[pair_index(i, j)]

    def descriptor(self) -> tuple:
        return (self.parts, self.pair_colors)


@dataclass(frozen=True)
class ReducedColoring:
    """The coloring induced on one representative vertex per part."""

    coloring: ColoredComplete
    part_map: tuple[int, ...]  # part index per reduced vertex


def _check_parts(n: int, parts: Sequence[Sequence[int]]) -> None:
    seen: set[int] = set()
    for part in parts:
        if not part:
            raise NotAPartition("empty part")
        for v in part:
            if not 0 <= v < n or v in seen:
                raise NotAPartition(f"vertex {v} missing or repeated")
            seen.add(v)
    if len(seen) != n:
        raise NotAPartition("parts do not cover the vertex set")


def validate_partition(g: ColoredComplete, p: GPartition) -> bool:
    """True iff p is a valid Gallai partition of g."""
    _check_parts(g.n, p.parts)
    if len(p.parts) < 2:
        return False
    if len(p.pair_colors) != pair_count(len(p.parts)):
        return False
    for i, j in all_pairs(len(p.parts)):
        want = p.pair_color(i, j)
        for u in p.parts[i]:
            for v in p.parts[j]:
                if g.color(u, v) != want:
                    return False
    return len(p.between_colors) <= 2


def _normalize(parts: list[int]) -> tuple[tuple[int, ...], ...]:
    """Masks to sorted vertex tuples ordered by least vertex."""
    return tuple(
        sorted((tuple(sorted(bits(mask))) for mask in parts), key=lambda t: t[0])
    )


def _merge_to_fixpoint(
    g: ColoredComplete, masks: list[int]
) -> Optional[GPartition]:
    """Merge parts with mixed pair colors until every pair is monochromatic."""
    masks = [m for m in masks if m]
    changed = True
    while changed and len(masks) >= 2:
        changed = False
        out = False
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                colors = set()
                for u in bits(masks[i]):
                    for v in bits(masks[j]):
                        colors.add(g.color(u, v))
                        if len(colors) > 1:
                            break
                    if len(colors) > 1:
                        break
                if len(colors) > 1:
                    masks[i] |= masks[j]
                    del masks[j]
                    changed = True
                    out = True
                    break
            if out:
                break
    if len(masks) < 2:
        return None
    parts = _normalize(masks)
    pair_colors = []
    for i, j in all_pairs(len(parts)):
        pair_colors.append(g.color(parts[i][0], parts[j][0]))
    p = GPartition(parts, tuple(pair_colors))
    if len(p.between_colors) > 2:
        return None
    return p


def find_gallai_partition(g: ColoredComplete) -> GPartition:
    """A valid Gallai partition with the most parts the merge process finds.

    For each candidate between-color set S of size at most two, the connected
    components of the graph of non-S edges seed the partition; parts joined by
    mixed colors are merged to a fixed point.  Existence of an accepting S is
    guaranteed for rainbow-triangle-free inputs.  Ties between accepted
    partitions break toward the lexicographically least descriptor.
    """
    if g.n < 2:
        raise ValueError("partition needs at least two vertices")
    rainbow = find_rainbow_triangle(g)
    if rainbow is not None:
        raise RainbowTrianglePresent(f"rainbow triangle at {rainbow.vertices}")
    used = sorted(g.used_colors())
    candidates: list[tuple[int, ...]] = [(c,) for c in used]
    candidates += [
        (c1, c2) for i, c1 in enumerate(used) for c2 in used[i + 1 :]
    ]
    best: Optional[GPartition] = None
    for S in candidates:
        allowed = set(S)
        rows = [0] * g.n
        for (u, v), c in zip(all_pairs(g.n), g.codes):
            if c not in allowed:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        masks = []
        todo = (1 << g.n) - 1
        while todo:
            seed = todo & -todo
            comp = seed
            frontier = seed
            while frontier:
                grow = 0
                for v in bits(frontier):
                    grow |= rows[v]
                frontier = grow & ~comp
                comp |= frontier
            masks.append(comp)
            todo &= ~comp
        p = _merge_to_fixpoint(g, masks)
        if p is None:
            continue
        if (
            best is None
            or p.size > best.size
            or (p.size == best.size and p.descriptor() < best.descriptor())
        ):
            best = p
    assert best is not None, "Gallai partition must exist for rainbow-free input"
    return best


def reduced_graph(g: ColoredComplete, p: GPartition) -> ReducedColoring:
    """The 2-colored (or 1-colored) coloring on one vertex per part."""
    if not validate_partition(g, p):
        raise InvalidPartition("partition invariants fail against the coloring")
    m = len(p.parts)
    codes = tuple(p.pair_color(i, j) for i, j in all_pairs(m))
    return ReducedColoring(ColoredComplete(m, g.k, codes), tuple(range(m)))


def substitute(
    r: ColoredComplete,
    fillings: Sequence[ColoredComplete],
    color_offsets: Optional[Sequence[int]] = None,
    k: Optional[int] = None,
) -> ColoredComplete:
    """Blow up each vertex of r into a colored complete graph.

    Edges inside blob i come from ``fillings[i]`` (shifted by
    ``color_offsets[i]`` when given); edges between blobs i and j all get
    r.color(i, j).  The host must use at most two colors, which makes the
    result rainbow-triangle-free whenever every filling is.
    """
    if len(fillings) != r.n:
        raise ValueError(f"need {r.n} fillings, got {len(fillings)}")
    if len(r.used_colors()) > 2:
        raise ValueError("host coloring must use at most two colors")
    offsets = list(color_offsets) if color_offsets is not None else [0] * r.n
    if len(offsets) != r.n:
        raise ValueError("one color offset per filling required")
    total = sum(f.n for f in fillings)
    palette = max(r.codes, default=1)
    for f, off in zip(fillings, offsets):
        for c in f.used_colors():
            mapped = c + off
            if mapped < 1 or (k is not None and mapped > k):
                raise ColorCollision(
                    f"offset {off} maps color {c} outside the palette"
                )
            palette = max(palette, mapped)
    k_out = k if k is not None else max(palette, r.k)
    if k_out < palette:
        raise ColorCollision("requested palette smaller than a mapped color")

    starts = []
    acc = 0
    for f in fillings:
        starts.append(acc)
        acc += f.n
    owner = []
    for i, f in enumerate(fillings):
        owner.extend([i] * f.n)

    codes = [0] * pair_count(total)
    for u, v in all_pairs(total):
        i, j = owner[u], owner[v]
        if i == j:
            c = fillings[i].color(u - starts[i], v - starts[i]) + offsets[i]
        else:
            c = r.color(i, j)
        codes[pair_index(u, v)] = c
    return ColoredComplete(total, k_out, tuple(codes))


def _sample_size(rng: random.Random, remaining: int, cap: int) -> int:
    size = 1
    while size < cap and size < remaining and rng.random() < 0.5:
        size += 1
    return min(size, remaining, cap)


def _random_gallai(n: int, k: int, rng: random.Random) -> ColoredComplete:
    if n == 1:
        return ColoredComplete(1, k, ())
    sizes = []
    remaining = n
    while remaining:
        cap = n - 1 if not sizes else remaining  # force at least two parts
        s = _sample_size(rng, remaining, cap)
        sizes.append(s)
        remaining -= s
    m = len(sizes)
    if k >= 2:
        c1, c2 = rng.sample(range(1, k + 1), 2)
        colors = (c1, c2)
    else:
        colors = (1, 1)
    host = ColoredComplete(
        m, k, tuple(rng.choice(colors) for _ in range(pair_count(m)))
    )
    fillings = [_random_gallai(s, k, rng) for s in sizes]
    return substitute(host, fillings, k=k)


def random_gallai(n: int, k: int, seed: int) -> ColoredComplete:
    """A rainbow-triangle-free k-coloring built by seeded recursive blow-up.

    Part sizes follow a geometric law with mean 2, matching the small-part
    regime the property tests target.  Identical seeds give identical output.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    return _random_gallai(n, k, random.Random(seed * 1_000_003 + n * 1009 + k))
