"""Fixture path resolution importable from test modules (conftest fixtures
cover the common cases; CLI tests need raw paths)."""

from conftest import fixture_path


def data_path(stem: str) -> str:
    return fixture_path(stem)[0]
