"""Level-wise frequent itemset mining over the bitmap index.

The classical algorithm: level 1 keeps every item whose count reaches
the support threshold; level k+1 candidates come from joining frequent
k-itemsets that share a (k-1)-prefix, pruned by downward closure (every
k-subset must itself be frequent); candidates are counted exactly
against the vertical bitmaps and filtered. Levels stay in lexicographic
item-id order throughout, so output order is deterministic.

Frequency comparisons happen in exactly one place, meets_threshold,
shared with the rule generator and the brute-force oracle: an itemset is
frequent iff count >= ceil(min_support * total - EPS). The subtraction
keeps exactly-representable thresholds exact when the product picks up
float noise (0.1 * 12433 = 1243.3000000000002 must still mean 1244, not
1245, and 1.0 * total must mean total).
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ConfigError, EmptyDatabaseError
from .txdb import ItemCatalog, ItemId, TransactionDatabase, popcount

EPS = 1e-9

# Below this many candidates the fork/pickle overhead dwarfs the work.
PARALLEL_MIN_CANDIDATES = 32


def meets_threshold(count: int, base: int, threshold: float) -> bool:
    """True iff count/base >= threshold, up to the shared epsilon."""
    return count >= math.ceil(threshold * base - EPS)


def min_count(min_support: float, total: int) -> int:
    """Smallest transaction count that clears min_support."""
    return math.ceil(min_support * total - EPS)


def is_frequent(count: int, total: int, min_support: float) -> bool:
    return meets_threshold(count, total, min_support)


@dataclass(frozen=True)
class MiningConfig:
    """min_support in (0, 1]; max_len caps itemset size (None = unlimited)."""

    min_support: float
    max_len: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.min_support, (int, float)) or not (
            0.0 < self.min_support <= 1.0
        ):
            raise ConfigError("min-support must lie in (0,1]")
        if self.max_len is not None and (
            not isinstance(self.max_len, int) or self.max_len < 1
        ):
            raise ConfigError("max-len must be a positive integer or omitted")


@dataclass(frozen=True)
class Itemset:
    """A sorted, duplicate-free tuple of item ids plus its exact count.

    count is None only on fresh candidates that have not been counted
    yet. The empty itemset is representable (for rule generation) but is
    never produced by mining.
    """

    items: tuple[ItemId, ...]
    count: int | None = None


@dataclass(frozen=True)
class FrequentSets:
    """All frequent itemsets, levels[k] holding the k-itemsets.

    levels[0] is always the empty tuple: the empty itemset is not mined,
    its count is the database total carried separately for rule
    generation. Each level is lexicographically sorted.
    """

    levels: tuple[tuple[Itemset, ...], ...]
    total: int

    def __iter__(self) -> Iterator[Itemset]:
        for level in self.levels[1:]:
            yield from level

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels[1:])

    @property
    def max_size(self) -> int:
        return len(self.levels) - 1

    def counts(self) -> dict[tuple[ItemId, ...], int]:
        """Lookup table from item tuple to count; includes the empty set."""
        table: dict[tuple[ItemId, ...], int] = {(): self.total}
        for itemset in self:
            table[itemset.items] = itemset.count  # type: ignore[assignment]
        return table

    def support(self, itemset: Itemset) -> float:
        if itemset.count is None:
            raise ConfigError("itemset has no count")
        return itemset.count / self.total


def candidate_gen(level_k: Sequence[Itemset]) -> list[Itemset]:
    """Join frequent k-itemsets sharing a (k-1)-prefix, then prune.

    Input must be lexicographically sorted k-itemsets; output is the
    sorted list of (k+1)-candidates whose k-subsets are all present,
    counts unset.
    """
    if not level_k:
        return []
    k = len(level_k[0].items)
    keys = [s.items for s in level_k]
    if any(len(key) != k for key in keys):
        raise ConfigError("candidate_gen requires itemsets of uniform size")
    present = set(keys)
    out: list[Itemset] = []
    n = len(keys)
    for i in range(n):
        first = keys[i]
        prefix = first[:-1]
        for j in range(i + 1, n):
            second = keys[j]
            if second[:-1] != prefix:
                break  # sorted input keeps equal prefixes contiguous
            joined = first + (second[-1],)
            if all(
                joined[:m] + joined[m + 1 :] in present for m in range(k + 1)
            ):
                out.append(Itemset(joined))
    return out


def _count_via_bitmaps(vertical: Sequence[int], items: tuple[ItemId, ...]) -> int:
    bitmap = vertical[items[0]]
    for item_id in items[1:]:
        bitmap &= vertical[item_id]
    return popcount(bitmap)


# Shared with forked workers by copy-on-write; set only around a pool's
# lifetime, in the parent, before fork.
_FORK_STATE: tuple[Sequence[int], list[tuple[ItemId, ...]]] | None = None


def _count_span(span: tuple[int, int]) -> list[int]:
    assert _FORK_STATE is not None
    vertical, keys = _FORK_STATE
    return [_count_via_bitmaps(vertical, keys[i]) for i in range(*span)]


def count_candidates(
    db: TransactionDatabase,
    candidates: Sequence[Itemset],
    workers: int = 1,
) -> list[Itemset]:
    """Annotate each candidate with its exact count, preserving order.

    With workers > 1 the candidate list is split into index spans that
    fork-based workers count independently; the merge concatenates spans
    in input order, so the result is identical to the serial one.
    """
    keys = [c.items for c in candidates]
    if any(not key for key in keys):
        raise ConfigError("cannot count the empty itemset as a candidate")
    counts: list[int]
    if workers > 1 and len(keys) >= PARALLEL_MIN_CANDIDATES:
        counts = _count_parallel(db, keys, workers)
    else:
        counts = [_count_via_bitmaps(db.vertical, key) for key in keys]
    return [Itemset(key, count) for key, count in zip(keys, counts)]


def _count_parallel(
    db: TransactionDatabase, keys: list[tuple[ItemId, ...]], workers: int
) -> list[int]:
    global _FORK_STATE
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:  # pragma: no cover - platform dependent
        return [_count_via_bitmaps(db.vertical, key) for key in keys]
    spans = _spans(len(keys), workers * 4)
    _FORK_STATE = (db.vertical, keys)
    try:
        with ctx.Pool(processes=workers) as pool:
            parts = pool.map(_count_span, spans)
    finally:
        _FORK_STATE = None
    return [count for part in parts for count in part]


def _spans(n: int, pieces: int) -> list[tuple[int, int]]:
    size = max(1, -(-n // pieces))
    return [(start, min(start + size, n)) for start in range(0, n, size)]


def mine_frequent(
    db: TransactionDatabase, config: MiningConfig, workers: int = 1
) -> FrequentSets:
    """Run the level-wise mining loop; levels end at the last non-empty one."""
    if db.total <= 0:
        raise EmptyDatabaseError("cannot mine an empty database")
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers must be a positive integer")
    threshold = min_count(config.min_support, db.total)
    level_1 = tuple(
        Itemset((item_id,), count)
        for item_id, count in enumerate(db.item_counts)
        if count >= threshold
    )
    levels: list[tuple[Itemset, ...]] = [(), level_1]
    if not level_1:
        return FrequentSets((levels[0],), db.total)
    k = 1
    while config.max_len is None or k < config.max_len:
        candidates = candidate_gen(levels[k])
        if not candidates:
            break
        counted = count_candidates(db, candidates, workers=workers)
        next_level = tuple(s for s in counted if s.count >= threshold)
        if not next_level:
            break
        levels.append(next_level)
        k += 1
    return FrequentSets(tuple(levels), db.total)


def write_itemsets(
    frequent: FrequentSets, catalog: ItemCatalog, path: str | os.PathLike
) -> None:
    """One line per frequent itemset: rendered items (space separated),
    count, support at full precision. Level order, lexicographic within."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for itemset in frequent:
            rendered = " ".join(catalog.render(i) for i in itemset.items)
            support = itemset.count / frequent.total  # type: ignore[operator]
            handle.write(f"{rendered},{itemset.count},{support!r}\n")
