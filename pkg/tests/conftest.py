import pytest

from vfdielectric import load_constants


@pytest.fixture(scope="session")
def constants():
    return load_constants()
