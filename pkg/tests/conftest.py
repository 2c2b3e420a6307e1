import functools

import pytest

from su4atlas import atlas
from su4atlas.classify import pauli_group
from su4atlas.gates import parse_generators
from su4atlas.group import closure


@pytest.fixture(scope="session")
def build():
    """Memoized atlas-group builder shared by the whole session."""

    @functools.lru_cache(maxsize=None)
    def _build(name):
        return atlas.build_group(atlas.entry(name))

    return _build


@pytest.fixture(scope="session")
def c2(build):
    return build("C2")


@pytest.fixture(scope="session")
def p2():
    return pauli_group(4)


@pytest.fixture(scope="session")
def close():
    @functools.lru_cache(maxsize=None)
    def _close(gens_text):
        return closure(parse_generators(gens_text))

    return _close
