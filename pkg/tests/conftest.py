"""Shared fixtures."""

import os

import pytest

from core.solver import BoundedDomain, BoundedSolver, Z3Solver
from framework import load_corpus


@pytest.fixture
def solver():
    """In-process z3; solver-backed tests use it unless they say otherwise."""
    with Z3Solver(timeout_s=10.0) as backend:
        yield backend


@pytest.fixture
def bounded_solver():
    return BoundedSolver(BoundedDomain())


@pytest.fixture
def lin_srch():
    return load_corpus("lin_srch")


@pytest.fixture
def count_if():
    return load_corpus("count_if")


@pytest.fixture
def lin_srch_rec():
    return load_corpus("lin_srch_rec")


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    """Keep CSE_* variables from the developer's shell out of the tests."""
    for key in list(os.environ):
        if key.startswith("CSE_"):
            monkeypatch.delenv(key, raising=False)
