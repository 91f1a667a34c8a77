import pytest
from typer.testing import CliRunner

from gradedproj.cache import configure_cache
from gradedproj.rootdata import build_root_system, parse_lie_type


def root_system(text):
    return build_root_system(parse_lie_type(text))


@pytest.fixture(autouse=True)
def no_persistent_cache():
    configure_cache(enabled=False)
    yield
    configure_cache(enabled=False)


@pytest.fixture
def cache_dir(tmp_path):
    return str(tmp_path / "cache")


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def b2():
    return root_system("B2")


@pytest.fixture
def b3():
    return root_system("B3")


@pytest.fixture
def b4():
    return root_system("B4")


@pytest.fixture
def b5():
    return root_system("B5")


@pytest.fixture
def c3():
    return root_system("C3")


@pytest.fixture
def c4():
    return root_system("C4")


@pytest.fixture
def d4():
    return root_system("D4")


@pytest.fixture
def d5():
    return root_system("D5")


@pytest.fixture
def c2():
    return root_system("C2")


@pytest.fixture
def d6():
    return root_system("D6")
