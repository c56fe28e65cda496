import json
import os

import pytest

from mustaralba.algebra import algebra_path, battery, load_algebra


@pytest.fixture(scope='session')
def algebras():
    yield battery()


@pytest.fixture(scope='session')
def small_algebras():
    yield battery(max_size=4, size=6)


@pytest.fixture
def diamond():
    yield load_algebra(os.path.join(algebra_path, 'diamond.json'))


@pytest.fixture
def chain2():
    yield load_algebra(os.path.join(algebra_path, 'chain2.json'))


@pytest.fixture
def chain3():
    yield load_algebra(os.path.join(algebra_path, 'chain3.json'))


@pytest.fixture
def chain4():
    yield load_algebra(os.path.join(algebra_path, 'chain4.json'))


@pytest.fixture
def algebra_file(tmp_path):
    """Write an algebra description to a temporary JSON file."""

    def write(data, name='algebra.json'):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    yield write
