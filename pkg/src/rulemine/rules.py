"""Association rule generation, metrics, and serialization.

Metrics are always computed from the four integer counts (lhs, rhs,
joint, total), never from previously rounded metrics, and each one uses
a single float division over exact integer products:

    support    = joint / total
    coverage   = lhs / total
    confidence = joint / lhs
    lift       = joint * total / (lhs * rhs)
    conviction = (total - rhs) * lhs / ((lhs - joint) * total)
    leverage   = (joint * total - lhs * rhs) / total**2

Conviction at confidence 1 is +inf when the consequent is non-universal
and 1 when it is (0/0 read as "independent"). Infinity serializes as the
token "inf" in both CSV and JSON.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .errors import ConfigError, FrequentSetError, MetricError
from .miner import FrequentSets, Itemset, meets_threshold
from .txdb import ItemCatalog, ItemId


class Metrics(NamedTuple):
    support: float
    confidence: float
    coverage: float
    lift: float
    conviction: float
    leverage: float


def compute_metrics(
    lhs_count: int, rhs_count: int, joint_count: int, total: int
) -> Metrics:
    """Full metric block from exact counts; rejects impossible counts."""
    for name, value in (
        ("lhs_count", lhs_count),
        ("rhs_count", rhs_count),
        ("joint_count", joint_count),
        ("total", total),
    ):
        if not isinstance(value, int) or isinstance(value, bool):
            raise MetricError(f"{name} must be an int, got {value!r}")
    if total <= 0:
        raise MetricError("total must satisfy total >= 1")
    if lhs_count < 1:
        raise MetricError("lhs_count must satisfy lhs_count >= 1")
    if rhs_count < 1:
        raise MetricError("rhs_count must satisfy rhs_count >= 1")
    if joint_count < 0:
        raise MetricError("joint_count must satisfy joint_count >= 0")
    if joint_count > lhs_count:
        raise MetricError("counts must satisfy joint_count <= lhs_count")
    if joint_count > rhs_count:
        raise MetricError("counts must satisfy joint_count <= rhs_count")
    if lhs_count > total or rhs_count > total:
        raise MetricError("counts must satisfy lhs_count, rhs_count <= total")

    support = joint_count / total
    coverage = lhs_count / total
    confidence = joint_count / lhs_count
    lift = joint_count * total / (lhs_count * rhs_count)
    if joint_count == lhs_count:  # confidence is exactly 1
        conviction = 1.0 if rhs_count == total else math.inf
    else:
        conviction = (
            (total - rhs_count) * lhs_count / ((lhs_count - joint_count) * total)
        )
    leverage = (joint_count * total - lhs_count * rhs_count) / (total * total)
    return Metrics(support, confidence, coverage, lift, conviction, leverage)


@dataclass(frozen=True)
class AssociationRule:
    """lhs => rhs with its joint count and full metric block.

    lhs and rhs are Itemsets carrying their own counts, so every metric
    can be re-derived exactly; lhs may be empty (count = total), rhs
    never is, and the two sides are disjoint.
    """

    lhs: Itemset
    rhs: Itemset
    count: int
    support: float
    confidence: float
    coverage: float
    lift: float
    conviction: float
    leverage: float


def render_side(items: Sequence[ItemId], catalog: ItemCatalog) -> str:
    return "{" + ",".join(catalog.render(i) for i in items) + "}"


def render_rule(rule: AssociationRule, catalog: ItemCatalog) -> str:
    return (
        f"{render_side(rule.lhs.items, catalog)} => "
        f"{render_side(rule.rhs.items, catalog)}"
    )


def _key_default(rule: AssociationRule):
    # ascending LHS size, descending support, lexicographic items
    return (len(rule.lhs.items), -rule.count, rule.lhs.items, rule.rhs.items)


def _key_confidence(rule: AssociationRule):
    return (
        -rule.confidence,
        -rule.count,
        len(rule.lhs.items),
        rule.lhs.items,
        rule.rhs.items,
    )


def _key_support(rule: AssociationRule):
    return (-rule.count, len(rule.lhs.items), rule.lhs.items, rule.rhs.items)


ORDERINGS: dict[str, Callable[[AssociationRule], tuple]] = {
    "default": _key_default,
    "confidence": _key_confidence,
    "support": _key_support,
}


@dataclass(frozen=True)
class RuleConfig:
    min_confidence: float
    include_empty_lhs: bool = True
    singleton_rhs: bool = False
    ordering: str = "default"

    def __post_init__(self) -> None:
        if not isinstance(self.min_confidence, (int, float)) or not (
            0.0 < self.min_confidence <= 1.0
        ):
            raise ConfigError("min-confidence must lie in (0,1]")
        if self.ordering not in ORDERINGS:
            known = ", ".join(sorted(ORDERINGS))
            raise ConfigError(
                f"unknown ordering {self.ordering!r} (expected one of: {known})"
            )


def generate_rules(
    frequent: FrequentSets, config: RuleConfig
) -> list[AssociationRule]:
    """Emit every strong bipartition of every frequent itemset.

    For each frequent Z and each split Z = X | Y with Y non-empty (and
    X = {} only when include_empty_lhs), the rule X => Y is kept iff its
    confidence N(Z)/N(X) clears min_confidence under the shared epsilon
    rule. All counts come from the frequent sets themselves; downward
    closure guarantees X and Y are present.
    """
    total = frequent.total
    if not isinstance(total, int) or total <= 0:
        raise FrequentSetError(f"total must be a positive int, got {total!r}")
    counts: dict[tuple[ItemId, ...], int] = {(): total}
    for itemset in frequent:
        if itemset.count is None:
            raise FrequentSetError(f"itemset {itemset.items} has no count")
        if not 0 <= itemset.count <= total:
            raise FrequentSetError(
                f"count {itemset.count} of itemset {itemset.items} is outside "
                f"[0, total={total}]"
            )
        counts[itemset.items] = itemset.count

    out: list[AssociationRule] = []
    for itemset in frequent:
        items = itemset.items
        joint = itemset.count
        size = len(items)
        for mask in range(1, 1 << size):
            rhs = tuple(items[b] for b in range(size) if mask >> b & 1)
            if config.singleton_rhs and len(rhs) != 1:
                continue
            lhs = tuple(items[b] for b in range(size) if not mask >> b & 1)
            if not lhs and not config.include_empty_lhs:
                continue
            try:
                lhs_count = counts[lhs]
                rhs_count = counts[rhs]
            except KeyError as missing:
                raise FrequentSetError(
                    f"frequent sets are not downward closed: missing subset "
                    f"{missing.args[0]}"
                ) from None
            if not meets_threshold(joint, lhs_count, config.min_confidence):
                continue
            metrics = compute_metrics(lhs_count, rhs_count, joint, total)
            out.append(
                AssociationRule(
                    lhs=Itemset(lhs, lhs_count),
                    rhs=Itemset(rhs, rhs_count),
                    count=joint,
                    **metrics._asdict(),
                )
            )
    out.sort(key=ORDERINGS[config.ordering])
    return out


CSV_COLUMNS = (
    "rule",
    "LHS",
    "RHS",
    "support",
    "confidence",
    "coverage",
    "lift",
    "count",
)
CSV_COLUMNS_EXTENDED = CSV_COLUMNS + ("conviction", "leverage")


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"  # math.inf renders as the token "inf"


def write_rules_csv(
    rules: Sequence[AssociationRule],
    catalog: ItemCatalog,
    path: str | os.PathLike,
    precision: int = 4,
    extended: bool = False,
) -> None:
    """Rule table in the reference column layout, one rule per line.

    The first eight columns are always rule,LHS,RHS,support,confidence,
    coverage,lift,count; extended appends conviction,leverage.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS_EXTENDED if extended else CSV_COLUMNS)
        for position, rule in enumerate(rules, start=1):
            row = [
                str(position),
                render_side(rule.lhs.items, catalog),
                render_side(rule.rhs.items, catalog),
                _fmt(rule.support, precision),
                _fmt(rule.confidence, precision),
                _fmt(rule.coverage, precision),
                _fmt(rule.lift, precision),
                str(rule.count),
            ]
            if extended:
                row.append(_fmt(rule.conviction, precision))
                row.append(_fmt(rule.leverage, precision))
            writer.writerow(row)


def _conviction_to_json(value: float) -> float | str:
    return "inf" if math.isinf(value) else value


def _conviction_from_json(value: float | str) -> float:
    return math.inf if value == "inf" else float(value)


@dataclass(frozen=True)
class RuleSetDocument:
    """Everything a rules JSON file carries, reconstructed on load."""

    catalog: ItemCatalog
    total: int
    rules: tuple[AssociationRule, ...]
    column_sources: dict[str, str]
    mining: dict
    rule_config: dict


def write_rules_json(
    rules: Sequence[AssociationRule],
    catalog: ItemCatalog,
    total: int,
    path: str | os.PathLike,
    column_sources: dict[str, str] | None = None,
    mining: dict | None = None,
    rule_config: dict | None = None,
) -> None:
    """Full-fidelity export: exact counts, full-precision metrics, and
    the catalog itself, so the file stands alone for prediction."""
    document = {
        "total": total,
        "catalog": [catalog.render(i) for i in range(len(catalog))],
        "column_sources": column_sources or {},
        "mining": mining or {},
        "rule_config": rule_config or {},
        "rules": [
            {
                "lhs": list(rule.lhs.items),
                "rhs": list(rule.rhs.items),
                "lhs_count": rule.lhs.count,
                "rhs_count": rule.rhs.count,
                "count": rule.count,
                "support": rule.support,
                "confidence": rule.confidence,
                "coverage": rule.coverage,
                "lift": rule.lift,
                "conviction": _conviction_to_json(rule.conviction),
                "leverage": rule.leverage,
            }
            for rule in rules
        ],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, indent=2, allow_nan=False)
        handle.write("\n")


def read_rules_json(path: str | os.PathLike) -> RuleSetDocument:
    with open(path, "r", encoding="utf-8") as handle:
        document = json.load(handle)
    entries = []
    for token in document["catalog"]:
        column, _, raw = token.rpartition("=")
        entries.append((column, int(raw)))
    catalog = ItemCatalog(tuple(entries))
    rules = tuple(
        AssociationRule(
            lhs=Itemset(tuple(r["lhs"]), r["lhs_count"]),
            rhs=Itemset(tuple(r["rhs"]), r["rhs_count"]),
            count=r["count"],
            support=r["support"],
            confidence=r["confidence"],
            coverage=r["coverage"],
            lift=r["lift"],
            conviction=_conviction_from_json(r["conviction"]),
            leverage=r["leverage"],
        )
        for r in document["rules"]
    )
    return RuleSetDocument(
        catalog=catalog,
        total=document["total"],
        rules=rules,
        column_sources=dict(document.get("column_sources") or {}),
        mining=dict(document.get("mining") or {}),
        rule_config=dict(document.get("rule_config") or {}),
    )
