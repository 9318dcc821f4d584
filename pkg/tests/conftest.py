import pytest
from gmpy2 import mpq


@pytest.fixture
def q():
    """Shorthand for exact rationals: q(1, 12)."""
    return mpq
