import pytest

from ddks.catalog import load_group


@pytest.fixture(scope="session")
def grp():
    """Catalog loader shared across the session (``load_group`` is memoized)."""
    return load_group
