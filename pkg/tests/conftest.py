import pytest

from pigp import catalog


@pytest.fixture(scope="session")
def entries():
    return catalog.load_bundled()


@pytest.fixture(scope="session")
def group(entries):
    """Look up a bundled catalog group by name."""

    def get(name):
        e = catalog.find_entry(entries, name)
        assert e is not None, name
        return e.group

    return get
