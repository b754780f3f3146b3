import pytest

from exact_oracles import stirling_triangle

TRIANGLE_N_MAX = 200


@pytest.fixture(scope="session")
def triangle():
    """Rows 0..200 of the exact Stirling triangle, shared by every test module."""
    return stirling_triangle(TRIANGLE_N_MAX)
