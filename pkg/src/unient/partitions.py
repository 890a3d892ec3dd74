"""Set partitions of parties, coarsening relations and the residual set Xi.

Parties are 0-based indices. Letters exist only for parsing and printing:
``"AC|B|D"`` is ``((0, 2), (1,), (3,))``.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

LETTERS = string.ascii_uppercase


class PartitionError(ValueError):
    pass


class XiUndefinedError(PartitionError):
    """The coarsening pattern lies outside the clauses that define Xi."""


@dataclass(frozen=True, order=True)
class Partition:
    """Disjoint nonempty blocks of party indices, in canonical order.

    Canonical form sorts parties inside each block and blocks by their
    smallest party. Blocks need not cover the whole universe: a partition of a
    subsystem is allowed.
    """

    blocks: tuple[tuple[int, ...], ...]
    universe: int

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(set(int(i) for i in b))) for b in self.blocks), key=lambda b: b[:1]))
        if not blocks or any(not b for b in blocks):
            raise PartitionError("partition needs at least one nonempty block")
        seen = [i for b in blocks for i in b]
        if len(seen) != len(set(seen)):
            raise PartitionError(f"blocks overlap: {blocks}")
        n = int(self.universe)
        if min(seen) < 0 or max(seen) >= n:
            raise PartitionError(f"party index outside universe of {n}: {blocks}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "universe", n)

    @classmethod
    def parse(cls, text: str, universe: int | None = None) -> "Partition":
        """Parse ``"AC|B|D"``; letters map to indices by alphabetical position."""
        parts = [p.strip() for p in text.strip().split("|")]
        if any(not p for p in parts):
            raise PartitionError(f"empty block in {text!r}")
        blocks = []
        for p in parts:
            if not all(ch in LETTERS for ch in p.upper()):
                raise PartitionError(f"bad block {p!r} in {text!r}")
            blocks.append(tuple(LETTERS.index(ch) for ch in p.upper()))
        top = max(i for b in blocks for i in b) + 1
        return cls(tuple(blocks), universe if universe is not None else top)

    @classmethod
    def finest(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)), n)

    def __str__(self):
        return "|".join("".join(LETTERS[i] for i in b) for b in self.blocks)

    @property
    def parties(self) -> frozenset[int]:
        return frozenset(i for b in self.blocks for i in b)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def covers(self, n: int | None = None) -> bool:
        n = self.universe if n is None else n
        return self.parties == frozenset(range(n))

    def canonical(self) -> "Partition":
        return Partition(self.blocks, self.universe)


def _rgs(n: int) -> Iterator[tuple[int, ...]]:
    # restricted growth strings enumerate set partitions of range(n)
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(m + 1):
            a[i] = v
            yield from rec(i + 1, max(m, v + 1))

    if n == 0:
        return
    a[0] = 0
    yield from rec(1, 1)


def set_partitions(items: Iterable[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    items = sorted(items)
    for labels in _rgs(len(items)):
        blocks: dict[int, list[int]] = {}
        for it, lab in zip(items, labels):
            blocks.setdefault(lab, []).append(it)
        yield tuple(tuple(b) for b in blocks.values())


def enumerate_partitions(n: int, k: int) -> list[Partition]:
    """All ``k``-block partitions of ``n`` parties (the set Gamma_k), canonical and sorted."""
    if not 2 <= k <= n:
        raise PartitionError(f"need 2 <= k <= n, got n={n}, k={k}")
    out = [Partition(b, n) for b in set_partitions(range(n)) if len(b) == k]
    return sorted(out)


def bipartitions(n: int) -> list[Partition]:
    """Gamma_2, with party 0 always in the first block."""
    return enumerate_partitions(n, 2)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


# --- coarsening relations -------------------------------------------------


def _same_universe(g: Partition, h: Partition):
    if g.universe != h.universe:
        raise PartitionError(f"universes differ: {g.universe} vs {h.universe}")


def coarser_a(g: Partition, h: Partition) -> bool:
    """``h`` arises from ``g`` by discarding one or more whole blocks."""
    _same_universe(g, h)
    return set(h.blocks) < set(g.blocks)


def coarser_b(g: Partition, h: Partition) -> bool:
    """``h`` arises from ``g`` by merging blocks (at least one merge)."""
    _same_universe(g, h)
    if g.parties != h.parties or h.k >= g.k:
        return False
    return all(any(set(x) <= set(y) for y in h.blocks) for x in g.blocks)


def coarser_c(g: Partition, h: Partition) -> bool:
    """``h`` arises from ``g`` by dropping parties from multi-party blocks."""
    _same_universe(g, h)
    if g.k != h.k or g.parties <= h.parties:
        return False
    used = set()
    for y in h.blocks:
        owners = [i for i, x in enumerate(g.blocks) if set(y) <= set(x)]
        if len(owners) != 1 or owners[0] in used:
            return False
        used.add(owners[0])
    return True


def _reachable(g: Partition, h: Partition) -> bool:
    # each block of h draws from its own group of g-blocks; no g-block is split
    if not h.parties <= g.parties:
        return False
    owner = {i: bi for bi, b in enumerate(g.blocks) for i in b}
    claimed: dict[int, int] = {}
    for yi, y in enumerate(h.blocks):
        for i in y:
            if claimed.setdefault(owner[i], yi) != yi:
                return False
    return True


def coarser(g: Partition, h: Partition) -> bool:
    """``g ≻ h``: ``h`` is reachable from ``g`` by a nonempty sequence of moves (a)-(c)."""
    _same_universe(g, h)
    return g != h and _reachable(g, h)


def coarser_or_equal(g: Partition, h: Partition) -> bool:
    _same_universe(g, h)
    return g == h or _reachable(g, h)


def coarsenings(g: Partition, min_blocks: int = 2) -> list[Partition]:
    """Every partition strictly coarser than ``g`` with at least ``min_blocks`` blocks."""
    out = set()
    parties = sorted(g.parties)
    for r in range(min_blocks, len(parties) + 1):
        for subset in itertools.combinations(parties, r):
            for blocks in set_partitions(subset):
                if len(blocks) < min_blocks:
                    continue
                h = Partition(blocks, g.universe)
                if coarser(g, h):
                    out.add(h)
    return sorted(out)


def _tail_merge(g: Partition, h: Partition) -> tuple[tuple[int, ...], ...] | None:
    """Blocks of ``g`` that ``h`` merges into one, if ``h`` keeps every other block intact."""
    if not coarser_b(g, h):
        return None
    kept = set(g.blocks) & set(h.blocks)
    merged = [x for x in g.blocks if x not in kept]
    new = [y for y in h.blocks if y not in kept]
    if len(new) != 1 or len(merged) < 2:
        return None
    return tuple(merged)


def xi_set(g: Partition, h: Partition) -> list[Partition]:
    """The residual set Xi(g - h) for ``g ≻ h``.

    Two coarsening patterns are covered. A tail merge (``h`` keeps some blocks
    of ``g`` and fuses the rest into one block) yields the fused blocks as a
    partition of their own plus everything coarser than it. A pure discard
    (``h`` drops whole blocks of ``g``) yields every two-or-more-block
    coarsening of ``g`` that is neither coarser than ``h`` nor able to
    recover ``h``, where the parties of ``h`` are treated as a single
    subsystem. Any other pattern raises :class:`XiUndefinedError`.
    """
    _same_universe(g, h)
    if not coarser(g, h):
        raise PartitionError(f"{h} is not coarser than {g}")

    tail = _tail_merge(g, h)
    if tail is not None:
        root = Partition(tail, g.universe)
        return sorted({root, *coarsenings(root)})

    if not coarser_a(g, h):
        raise XiUndefinedError(f"Xi({g} - {h}) is outside the defined coarsening patterns")

    h_parties = set(h.parties)
    h_fused = Partition((tuple(sorted(h_parties)),), g.universe)

    def fuse(p: Partition) -> Partition:
        # blocks meeting h's parties collapse into a single block
        touch = [b for b in p.blocks if set(b) & h_parties]
        if len(touch) <= 1:
            return p
        rest = [b for b in p.blocks if b not in touch]
        return Partition((tuple(i for b in touch for i in b), *rest), p.universe)

    out = set()
    for p in coarsenings(g):
        if p == h or coarser(h, p) or coarser(p, h):
            continue
        pf = fuse(p)
        if pf.k < 2 or coarser_or_equal(pf, h_fused):
            continue
        out.add(pf)
    return sorted(out)
