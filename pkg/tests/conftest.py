from __future__ import annotations

from pathlib import Path

import pytest

from simbias import EmbeddingTable, parse_embedding_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def en_table() -> EmbeddingTable:
    return parse_embedding_file((FIXTURES / "en.vec").read_bytes(), "en")


@pytest.fixture(scope="session")
def it_table() -> EmbeddingTable:
    return parse_embedding_file((FIXTURES / "it.vec").read_bytes(), "it")


@pytest.fixture
def tiny_table() -> EmbeddingTable:
    data = b"2 3\ncat 1 0 0\ndog 0 1 0\n"
    return parse_embedding_file(data, "en")
