"""Transaction database with a vertical bitmap index.

Key ideas:

- An item is a (column, value) pair, e.g. ("item5", 4), interned into a
  dense integer id. The catalog orders ids by column of first appearance,
  then ascending value, so ids and every artifact derived from them are
  byte-deterministic for a given input.
- Each item id owns one bitmap stored as an arbitrary-precision int in
  which bit i mirrors membership in transactions[i]. Support counting is
  a chain of ANDs plus one popcount and never rescans the rows.
- Databases are frozen after construction. Mining code may share one
  instance across worker processes without copies or locks.

Bit positions are row ordinals (0..total-1). Transaction ids are labels
carried alongside; they take part in equality but not in bit layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    DuplicateTidError,
    EmptyDatabaseError,
    SchemaError,
    UnknownItemError,
)

ItemId = int

# Would collide with "label=value" tokens, comma-separated exports, or
# the brace-wrapped rule rendering.
_LABEL_FORBIDDEN = set("={},")

try:  # Python 3.11+
    popcount = int.bit_count
except AttributeError:  # pragma: no cover - interpreter dependent
    try:
        from gmpy2 import popcount
    except ImportError:

        def popcount(x: int) -> int:
            return bin(x).count("1")


def _check_label(label: object) -> str:
    if not isinstance(label, str) or not label:
        raise SchemaError(f"column label must be a non-empty string, got {label!r}")
    bad = _LABEL_FORBIDDEN.intersection(label)
    if bad or label != label.strip() or any(c.isspace() for c in label):
        raise SchemaError(
            f"column label {label!r} may not contain whitespace or any of '={{}},'"
        )
    return label


def _check_value(column: str, value: object) -> int:
    # bool is an int subclass; a True/False cell is almost certainly a bug
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(
            f"value for column {column!r} must be an int, got {value!r}"
        )
    return value


class Transaction(NamedTuple):
    """One row, as the set of item ids it contains (sorted ascending)."""

    tid: int
    items: tuple[ItemId, ...]


@dataclass(frozen=True)
class ItemCatalog:
    """Interning table between (column, value) pairs and dense item ids."""

    entries: tuple[tuple[str, int], ...]
    _index: dict[tuple[str, int], int] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        index: dict[tuple[str, int], int] = {}
        for item_id, (column, value) in enumerate(self.entries):
            _check_label(column)
            _check_value(column, value)
            if (column, value) in index:
                raise SchemaError(f"duplicate catalog entry {column}={value}")
            index[(column, value)] = item_id
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.entries)

    def column(self, item_id: ItemId) -> str:
        return self._entry(item_id)[0]

    def value(self, item_id: ItemId) -> int:
        return self._entry(item_id)[1]

    def render(self, item_id: ItemId) -> str:
        column, value = self._entry(item_id)
        return f"{column}={value}"

    def id_of(self, column: str, value: int) -> ItemId:
        try:
            return self._index[(column, value)]
        except KeyError:
            raise UnknownItemError(f"unknown item {column}={value}") from None

    def get(self, column: str, value: int) -> ItemId | None:
        return self._index.get((column, value))

    def parse(self, token: str) -> ItemId:
        """Map a "column=value" token back to its id."""
        column, eq, raw = token.rpartition("=")
        if not eq or not column:
            raise UnknownItemError(
                f"malformed item token {token!r}, expected '<column>=<int>'"
            )
        try:
            value = int(raw)
        except ValueError:
            raise UnknownItemError(
                f"malformed item token {token!r}: {raw!r} is not an integer"
            ) from None
        return self.id_of(column, value)

    @property
    def columns(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for column, _ in self.entries:
            seen.setdefault(column)
        return tuple(seen)

    def items_for_column(self, column: str) -> tuple[ItemId, ...]:
        return tuple(
            i for i, (c, _) in enumerate(self.entries) if c == column
        )

    def _entry(self, item_id: ItemId) -> tuple[str, int]:
        if not isinstance(item_id, int) or not 0 <= item_id < len(self.entries):
            raise UnknownItemError(f"unknown item id {item_id!r}")
        return self.entries[item_id]


@dataclass(frozen=True)
class TransactionDatabase:
    """Immutable horizontal rows plus one bitmap per item."""

    catalog: ItemCatalog
    transactions: tuple[Transaction, ...]
    vertical: tuple[int, ...]
    item_counts: tuple[int, ...]
    total: int

    def support_count(self, itemset: Iterable[ItemId]) -> int:
        """Exact number of transactions containing every item in itemset.

        The empty itemset is contained in every transaction, so its
        count is total.
        """
        ids = sorted(set(itemset))
        if not ids:
            return self.total
        bitmap = -1
        for item_id in ids:
            if not isinstance(item_id, int) or not 0 <= item_id < len(self.vertical):
                raise UnknownItemError(f"unknown item id {item_id!r}")
            bitmap &= self.vertical[item_id]
            if bitmap == 0:
                return 0
        return popcount(bitmap)

    def __len__(self) -> int:
        return self.total


def _pack_bitmap(flags: np.ndarray) -> int:
    # bitorder="little" puts element i at bit i of byte i//8; the final
    # byte is zero-padded, which from_bytes ignores.
    return int.from_bytes(
        np.packbits(flags, bitorder="little").tobytes(), "little"
    )


def build_database(
    rows: Iterable[tuple[int, Iterable[tuple[str, int]]]],
) -> TransactionDatabase:
    """Build a database from (tid, [(column, value), ...]) rows.

    Tids must be unique non-negative ints but are otherwise free; bit
    positions follow input order. Within a row, repeated identical pairs
    collapse (a transaction is a set). Raises DuplicateTidError,
    EmptyDatabaseError, or SchemaError on malformed input.
    """
    staged: list[tuple[int, list[tuple[str, int]]]] = []
    seen_tids: set[int] = set()
    column_values: dict[str, set[int]] = {}
    for tid, row_items in rows:
        if not isinstance(tid, int) or isinstance(tid, bool) or tid < 0:
            raise DuplicateTidError(
                f"tid must be a non-negative int, got {tid!r}"
            )
        if tid in seen_tids:
            raise DuplicateTidError(f"duplicate tid {tid}")
        seen_tids.add(tid)
        items = []
        for column, value in row_items:
            _check_value(column, value)
            if column not in column_values:
                _check_label(column)
                column_values[column] = set()
            column_values[column].add(value)
            items.append((column, value))
        staged.append((tid, items))
    if not staged:
        raise EmptyDatabaseError("cannot build a database from zero rows")

    entries: list[tuple[str, int]] = []
    for column, values in column_values.items():
        entries.extend((column, value) for value in sorted(values))
    catalog = ItemCatalog(tuple(entries))

    total = len(staged)
    positions: list[list[int]] = [[] for _ in entries]
    transactions = []
    for pos, (tid, items) in enumerate(staged):
        ids = sorted({catalog.id_of(c, v) for c, v in items})
        for item_id in ids:
            positions[item_id].append(pos)
        transactions.append(Transaction(tid, tuple(ids)))

    flags = np.zeros(total, dtype=bool)
    vertical = []
    for item_positions in positions:
        flags[item_positions] = True
        vertical.append(_pack_bitmap(flags))
        flags[item_positions] = False

    return TransactionDatabase(
        catalog=catalog,
        transactions=tuple(transactions),
        vertical=tuple(vertical),
        item_counts=tuple(len(p) for p in positions),
        total=total,
    )


def build_database_from_columns(
    columns: Mapping[str, Sequence[int]] | Iterable[tuple[str, Sequence[int]]],
    tids: Sequence[int] | None = None,
) -> TransactionDatabase:
    """Columnar fast path: equal-length integer columns, no missing cells.

    Produces exactly what build_database would for the row-wise form of
    the same table, but vectorised; intended for large synthetic or
    pre-cleaned tables.
    """
    pairs = list(columns.items()) if isinstance(columns, Mapping) else list(columns)
    if not pairs:
        raise EmptyDatabaseError("at least one column is required")
    names = [_check_label(name) for name, _ in pairs]
    if len(set(names)) != len(names):
        raise SchemaError("duplicate column names in columnar input")

    arrays = []
    total: int | None = None
    for name, values in pairs:
        arr = np.asarray(values)
        if arr.ndim != 1:
            raise SchemaError(f"column {name!r} must be one-dimensional")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            raise SchemaError(f"column {name!r} must hold integers")
        if total is None:
            total = int(arr.shape[0])
        elif arr.shape[0] != total:
            raise SchemaError(
                f"column {name!r} has {arr.shape[0]} rows, expected {total}"
            )
        arrays.append(arr)
    assert total is not None
    if total == 0:
        raise EmptyDatabaseError("cannot build a database from zero rows")

    if tids is None:
        tid_list: Sequence[int] = range(total)
    else:
        tid_list = [int(t) for t in tids]
        if len(tid_list) != total:
            raise SchemaError(f"{len(tid_list)} tids for {total} rows")
        if any(t < 0 for t in tid_list):
            raise DuplicateTidError("tids must be non-negative")
        if len(set(tid_list)) != total:
            raise DuplicateTidError("duplicate tid in columnar input")

    entries: list[tuple[str, int]] = []
    vertical: list[int] = []
    item_counts: list[int] = []
    id_columns = []
    for name, arr in zip(names, arrays):
        uniq, inverse = np.unique(arr, return_inverse=True)
        offset = len(entries)
        entries.extend((name, int(v)) for v in uniq)
        id_columns.append(inverse.astype(np.int64) + offset)
        for k in range(uniq.size):
            mask = inverse == k
            vertical.append(_pack_bitmap(mask))
            item_counts.append(int(mask.sum()))

    # Catalog ids grow with column position, so each row of the stacked
    # id matrix is already sorted ascending.
    id_matrix = np.column_stack(id_columns)
    transactions = tuple(
        Transaction(int(tid), tuple(row))
        for tid, row in zip(tid_list, id_matrix.tolist())
    )
    return TransactionDatabase(
        catalog=ItemCatalog(tuple(entries)),
        transactions=transactions,
        vertical=tuple(vertical),
        item_counts=tuple(item_counts),
        total=total,
    )
