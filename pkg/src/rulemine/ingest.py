"""Turn discrete-valued CSV tables into transaction databases.

A schema names the table columns to encode, in order, and maps each
source header to the item label used everywhere downstream (reports,
exports, queries). Two presets cover Hodge-number tables of complete
intersection Calabi-Yau five- and six-folds; "generic" maps every header
to itself; anything else is read as a JSON schema file of the form

    {
      "name": "my-table",
      "columns": [["h11", "item1"], ["h21", "item2"]],
      "missing_policy": "drop_row",
      "missing_markers": ["", "NA", "?"]
    }

Cells equal to a missing marker (after stripping surrounding whitespace,
comparison is case-sensitive) are missing. Under drop_row a row with any
missing mapped cell is discarded; under partial_row the transaction
keeps the items that are present. Fully missing rows are always dropped.
Transaction ids are the 0-based ordinals of surviving rows.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import Sequence

from .errors import IngestError, SchemaError
from .txdb import (
    TransactionDatabase,
    _check_label,
    build_database,
)

DEFAULT_MISSING_MARKERS = frozenset({"", "NA", "?"})
MISSING_POLICIES = ("drop_row", "partial_row")


@dataclass(frozen=True)
class SchemaConfig:
    """Column mapping plus missing-value handling for one table shape."""

    name: str
    columns: tuple[tuple[str, str], ...]  # (source_header, item_label)
    missing_policy: str = "drop_row"
    missing_markers: frozenset[str] = DEFAULT_MISSING_MARKERS

    def __post_init__(self) -> None:
        if not self.columns:
            raise SchemaError(f"schema {self.name!r} maps no columns")
        sources = [source for source, _ in self.columns]
        labels = [_check_label(label) for _, label in self.columns]
        if len(set(sources)) != len(sources):
            raise SchemaError(f"schema {self.name!r} repeats a source header")
        if len(set(labels)) != len(labels):
            raise SchemaError(f"schema {self.name!r} repeats an item label")
        for source in sources:
            if not isinstance(source, str) or not source:
                raise SchemaError(
                    f"schema {self.name!r}: source header must be a non-empty "
                    f"string, got {source!r}"
                )
        if self.missing_policy not in MISSING_POLICIES:
            raise SchemaError(
                f"missing_policy must be one of {MISSING_POLICIES}, "
                f"got {self.missing_policy!r}"
            )
        object.__setattr__(
            self, "missing_markers", frozenset(self.missing_markers)
        )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for _, label in self.columns)

    def source_of(self, label: str) -> str | None:
        for source, candidate in self.columns:
            if candidate == label:
                return source
        return None


# Hodge-number table presets. Column order matters: it fixes item ids.
CICY5_SCHEMA = SchemaConfig(
    name="cicy5",
    columns=(
        ("h11", "item1"),
        ("h21", "item2"),
        ("h13", "item3"),
        ("h14", "item4"),
        ("h22", "item5"),
        ("h23", "item6"),
    ),
)

CICY6_SCHEMA = SchemaConfig(
    name="cicy6",
    columns=(
        ("h11", "item1"),
        ("h12", "item2"),
        ("h13", "item3"),
        ("h14", "item4"),
        ("h15", "item5"),
        ("h22", "item6"),
        ("h23", "item7"),
        ("h24", "item8"),
        ("h33", "item9"),
    ),
)

SCHEMA_PRESETS = {"cicy5": CICY5_SCHEMA, "cicy6": CICY6_SCHEMA}


def load_schema_file(path: str | os.PathLike) -> SchemaConfig:
    """Read a JSON schema document; content errors raise SchemaError."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(document, dict) or "columns" not in document:
        raise SchemaError(f"{path}: schema document must map 'columns'")
    raw_columns = document["columns"]
    if not isinstance(raw_columns, list):
        raise SchemaError(f"{path}: 'columns' must be a list of pairs")
    columns = []
    for entry in raw_columns:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise SchemaError(
                f"{path}: each column entry must be a [source, label] pair, "
                f"got {entry!r}"
            )
        columns.append((entry[0], entry[1]))
    name = document.get("name") or os.path.splitext(os.path.basename(path))[0]
    markers = document.get("missing_markers")
    policy = document.get("missing_policy", "drop_row")
    return SchemaConfig(
        name=name,
        columns=tuple(columns),
        missing_policy=policy,
        missing_markers=(
            DEFAULT_MISSING_MARKERS if markers is None else frozenset(markers)
        ),
    )


def resolve_schema(identifier: str, header: Sequence[str] | None = None):
    """Preset name, "generic", or a path to a schema file.

    "generic" needs the CSV header and maps every column to itself.
    """
    if identifier in SCHEMA_PRESETS:
        return SCHEMA_PRESETS[identifier]
    if identifier == "generic":
        if header is None:
            return None  # resolved against the header at load time
        return generic_schema(header)
    return load_schema_file(identifier)


def generic_schema(header: Sequence[str]) -> SchemaConfig:
    return SchemaConfig(
        name="generic", columns=tuple((h, h) for h in header)
    )


def load_csv(
    path: str | os.PathLike,
    schema: SchemaConfig | None = None,
    *,
    separator: str = ",",
    stats: dict | None = None,
) -> TransactionDatabase:
    """Encode a header-bearing CSV into a transaction database.

    schema=None derives a generic schema from the header. Unparseable
    non-missing cells raise IngestError with file, line, and column; a
    table with no surviving rows raises IngestError. When given, stats
    is filled with rows_read / rows_dropped / rows_kept.
    """
    try:
        handle = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from None
    with handle:
        reader = csv.reader(handle, delimiter=separator)
        header = next(reader, None)
        if header is None:
            raise IngestError(f"{path}: empty file, expected a header row")
        header = [cell.strip() for cell in header]
        if schema is None:
            schema = generic_schema(header)

        indices = []
        for source, _ in schema.columns:
            hits = [i for i, cell in enumerate(header) if cell == source]
            if not hits:
                raise SchemaError(
                    f"{path}: schema {schema.name!r} references header "
                    f"{source!r} which is not in the file header"
                )
            if len(hits) > 1:
                raise SchemaError(
                    f"{path}: header {source!r} appears {len(hits)} times"
                )
            indices.append(hits[0])

        drop_row = schema.missing_policy == "drop_row"
        markers = schema.missing_markers
        rows: list[tuple[int, list[tuple[str, int]]]] = []
        rows_read = 0
        dropped = 0
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue  # blank line
            rows_read += 1
            cells = []
            any_missing = False
            for index, (source, label) in zip(indices, schema.columns):
                cell = record[index].strip() if index < len(record) else ""
                if cell in markers:
                    any_missing = True
                    cells.append((source, label, None))
                else:
                    cells.append((source, label, cell))
            if any_missing and drop_row:
                dropped += 1
                continue
            items = []
            for source, label, cell in cells:
                if cell is None:
                    continue
                try:
                    value = int(cell)
                except ValueError:
                    raise IngestError(
                        f"{path}:{lineno}: column {source!r}: cannot parse "
                        f"{cell!r} as an integer"
                    ) from None
                items.append((label, value))
            if not items:
                dropped += 1  # fully missing row under partial_row
                continue
            rows.append((len(rows), items))
        if stats is not None:
            stats.update(
                rows_read=rows_read,
                rows_dropped=dropped,
                rows_kept=len(rows),
            )
        if not rows:
            raise IngestError(
                f"{path}: no rows survived the {schema.missing_policy!r} policy"
            )
    return build_database(rows)


def export_transactions(
    db: TransactionDatabase, path: str | os.PathLike
) -> None:
    """One line per transaction: tid, then rendered items in id order."""
    catalog = db.catalog
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for transaction in db.transactions:
            rendered = ",".join(catalog.render(i) for i in transaction.items)
            if rendered:
                handle.write(f"{transaction.tid},{rendered}\n")
            else:
                handle.write(f"{transaction.tid}\n")


def load_transactions(path: str | os.PathLike) -> TransactionDatabase:
    """Re-ingest an export_transactions file.

    Round-trip law: for any database, export followed by load yields an
    identical database (catalog, transactions, bitmaps, total). Item
    order inside each exported line is catalog order, so columns
    reappear in their original first-appearance order.
    """
    rows: list[tuple[int, list[tuple[str, int]]]] = []
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from None
    with handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            first, *tokens = line.split(",")
            try:
                tid = int(first)
            except ValueError:
                raise IngestError(
                    f"{path}:{lineno}: expected a transaction id, got {first!r}"
                ) from None
            items = []
            for token in tokens:
                column, eq, raw = token.rpartition("=")
                if not eq or not column:
                    raise IngestError(
                        f"{path}:{lineno}: malformed item token {token!r}"
                    )
                try:
                    value = int(raw)
                except ValueError:
                    raise IngestError(
                        f"{path}:{lineno}: item token {token!r} has a "
                        f"non-integer value"
                    ) from None
                items.append((column, value))
            rows.append((tid, items))
    if not rows:
        raise IngestError(f"{path}: no transactions in file")
    return build_database(rows)
