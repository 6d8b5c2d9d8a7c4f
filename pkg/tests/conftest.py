from __future__ import annotations

import pytest

from gpfree.apfree import rk_table


@pytest.fixture(scope="session")
def table_k3_41():
    """Deep k=3 table shared by structure, constant, and acceptance tests."""
    return rk_table(3, 41)


@pytest.fixture(scope="session")
def table_k4_24():
    return rk_table(4, 24)
