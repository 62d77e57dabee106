"""Shared fixture builders for the test suite."""

from __future__ import annotations

import random

import numpy as np

from rulemine import TransactionDatabase, build_database, build_database_from_columns

REFERENCE_TOTAL = 12433
REFERENCE_MIN_COUNT = 1244  # frequency threshold at min_support 0.10


def cicy5_reference_columns() -> dict[str, np.ndarray]:
    """Six-column synthetic table with pinned contingency counts.

    Construction is analytic (no RNG): the named blocks realise
    N(item5=4)=1358, N(item1=3)=4812, N(item5=4 & item1=3)=1312,
    N(item3=0)=11899, N(item2=0)=12147, and every background item stays
    below the 0.10-support threshold of 1244 so no accidental frequent
    pairs appear. The missing-value exclusion windows of item2/item3 sit
    inside the item5=4 block, which keeps the pairs {item5=4,item2=0}
    and {item5=4,item3=0} infrequent too.
    """
    tid = np.arange(REFERENCE_TOTAL)
    item1 = np.where(
        (tid < 1312) | ((tid >= 1358) & (tid < 4858)), 3, 100 + tid % 8
    )
    item2 = np.where((tid >= 534) & (tid < 820), 1, 0)
    item3 = np.where(tid < 534, 7, 0)
    item4 = 1000 + tid % 11
    item5 = np.where(tid < 1358, 4, 100 + tid % 10)
    item6 = 2000 + tid % 11
    return {
        "item1": item1,
        "item2": item2,
        "item3": item3,
        "item4": item4,
        "item5": item5,
        "item6": item6,
    }


def cicy5_reference_db() -> TransactionDatabase:
    return build_database_from_columns(cicy5_reference_columns())


def random_database(
    rng: random.Random,
    max_items: int = 12,
    max_tx: int = 64,
    max_tx_size: int = 8,
) -> TransactionDatabase:
    """A database of random item subsets within the given bounds."""
    n_items = rng.randint(2, max_items)
    n_tx = rng.randint(1, max_tx)
    rows = []
    for tid in range(n_tx):
        size = rng.randint(1, min(max_tx_size, n_items))
        members = rng.sample(range(n_items), size)
        rows.append((tid, [(f"c{j}", 0) for j in members]))
    return build_database(rows)


def horizontal_count(db: TransactionDatabase, itemset) -> int:
    """Independent count by scanning the horizontal rows."""
    wanted = frozenset(itemset)
    return sum(1 for t in db.transactions if wanted <= frozenset(t.items))
