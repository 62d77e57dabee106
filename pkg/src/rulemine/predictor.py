"""Predict one unknown column of a partially observed row from mined rules.

A rule votes for a candidate value v of the target column when its RHS
is exactly {target=v} and its whole LHS is contained in the known items.
Each candidate keeps its single best witnessing rule (highest
confidence, then highest support, then shortest and lexicographically
smallest LHS); candidates rank by confidence descending, ties by support
descending, then ascending value. No matching rule means no prediction,
which is a valid empty answer, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PredictionError, UnknownItemError
from .rules import AssociationRule
from .txdb import ItemCatalog, ItemId


@dataclass(frozen=True)
class Prediction:
    """One candidate value for the target column with its witness."""

    item: ItemId
    value: int
    confidence: float
    support: float
    rule: AssociationRule


def _witness_rank(rule: AssociationRule):
    return (
        -rule.confidence,
        -rule.support,
        len(rule.lhs.items),
        rule.lhs.items,
    )


def predict(
    known_items: Iterable[ItemId],
    rules: Sequence[AssociationRule],
    target_column: str,
    catalog: ItemCatalog,
) -> list[Prediction]:
    """Rank candidate values of target_column given known items.

    known_items must be ids of the ruleset's catalog; the target column
    must not already be among them.
    """
    known = frozenset(known_items)
    for item_id in known:
        if not isinstance(item_id, int) or not 0 <= item_id < len(catalog):
            raise UnknownItemError(f"unknown item id {item_id!r}")
        if catalog.column(item_id) == target_column:
            raise PredictionError(
                f"target column {target_column!r} is already present among "
                f"the known items ({catalog.render(item_id)})"
            )

    best: dict[ItemId, AssociationRule] = {}
    for rule in rules:
        if len(rule.rhs.items) != 1:
            continue
        candidate = rule.rhs.items[0]
        if catalog.column(candidate) != target_column:
            continue
        if not frozenset(rule.lhs.items) <= known:
            continue
        current = best.get(candidate)
        if current is None or _witness_rank(rule) < _witness_rank(current):
            best[candidate] = rule

    predictions = [
        Prediction(
            item=item_id,
            value=catalog.value(item_id),
            confidence=rule.confidence,
            support=rule.support,
            rule=rule,
        )
        for item_id, rule in best.items()
    ]
    predictions.sort(key=lambda p: (-p.confidence, -p.support, p.value))
    return predictions
