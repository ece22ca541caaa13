from __future__ import annotations

from pathlib import Path

import pytest

from ftdet import grammar_to_pda
from ftdet.formats import load

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


@pytest.fixture
def fig1():
    return load(FIXTURES / "fig1.pda.json")


@pytest.fixture
def anbn_grammar():
    return load(FIXTURES / "anbn.grammar.json")


@pytest.fixture
def grammar_pda(anbn_grammar):
    return grammar_to_pda(anbn_grammar)


@pytest.fixture
def pa():
    return load(FIXTURES / "pa.json")


@pytest.fixture
def lts():
    return load(FIXTURES / "lts.json")


@pytest.fixture
def branching():
    return load(FIXTURES / "branching.nda.json")


@pytest.fixture
def rabin():
    return load(FIXTURES / "rabin.prob.json")
