from __future__ import annotations

import pytest

import helpers
from rulemine import build_database


@pytest.fixture(scope="session")
def cicy5_db():
    return helpers.cicy5_reference_db()


@pytest.fixture()
def uniform_ab_db():
    """Four identical transactions {a=1, b=1}."""
    return build_database(
        (tid, [("a", 1), ("b", 1)]) for tid in range(4)
    )
