"""Pytest configuration and fixtures."""

import pytest

from src.subdd.cone import build_reduced_matrix
from src.subdd.dd import run_dd
from src.subdd.orders import topt_order
from src.subdd.symmetry import SymmetryGroup


@pytest.fixture(scope="session")
def spec3():
    return build_reduced_matrix(3)


@pytest.fixture(scope="session")
def spec4():
    return build_reduced_matrix(4)


@pytest.fixture(scope="session")
def spec5():
    return build_reduced_matrix(5)


@pytest.fixture(scope="session")
def rays3(spec3):
    """The 5 extremal rays of the n=3 cone."""
    return run_dd(spec3, topt_order(spec3)).rays


@pytest.fixture(scope="session")
def rays4(spec4):
    """The 37 extremal rays of the n=4 cone."""
    return run_dd(spec4, topt_order(spec4)).rays


@pytest.fixture(scope="session")
def group3(spec3):
    return SymmetryGroup(spec3)


@pytest.fixture(scope="session")
def group4(spec4):
    return SymmetryGroup(spec4)


@pytest.fixture(scope="session")
def rays5(spec5):
    """The 117978 extremal rays of the n=5 cone (slow tests only)."""
    return run_dd(spec5, topt_order(spec5)).rays


@pytest.fixture(scope="session")
def group5(spec5):
    return SymmetryGroup(spec5)


@pytest.fixture(autouse=True)
def isolated_home(tmp_path, monkeypatch):
    """Keep config files and run manifests out of the real home directory."""
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "home" / ".config"))
    for var in ("SUBDD_MAX_RAYS", "SUBDD_MAX_PROBES", "SUBDD_MAX_WEIGHT", "SUBDD_THREADS"):
        monkeypatch.delenv(var, raising=False)
