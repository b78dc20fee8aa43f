import pytest

from quiverdet.cli import parse_preset


@pytest.fixture(scope="session")
def double_instance():
    """Two parallel arrows 2->1, m=(3,2), ranks (1,1): the small worked example."""
    return parse_preset("double:2,3,2,1,1")


@pytest.fixture(scope="session")
def star_instance():
    """Three sources into one target, m=(3,2,2,2), ranks (2,1,1,1)."""
    return parse_preset("star-example")


@pytest.fixture(scope="session")
def det33():
    """Classical determinantal specialization: one 3x3 page, rank 2."""
    return parse_preset("det:3,3,2")


@pytest.fixture(scope="session")
def single_cell():
    """One arrow, m=(1,1), rank (1,1): a one-cell lattice."""
    return parse_preset("det:1,1,1")
