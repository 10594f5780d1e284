import os

import pytest

from glc.data import BinarizationSpec, binarize, load_csv, normalize_minmax

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
REAL_DIR = os.path.join(DATA_DIR, "real")


def fixture_path(stem):
    """Prefer a real UCI file dropped under tests/data/real/, else the
    bundled surrogate (or canonical copy for iris)."""
    real = os.path.join(REAL_DIR, f"{stem}.csv")
    if os.path.exists(real):
        return real, "real"
    bundled = os.path.join(DATA_DIR, f"{stem}.csv")
    if os.path.exists(bundled):
        return bundled, "bundled"
    like = os.path.join(DATA_DIR, f"{stem}_like.csv")
    if os.path.exists(like):
        return like, "surrogate"
    raise FileNotFoundError(stem)


@pytest.fixture(scope="session")
def iris():
    path, _ = fixture_path("iris")
    return load_csv(path, "class")


@pytest.fixture(scope="session")
def iris_binary(iris):
    """versicolor vs the combined setosa+virginica super class, normalized."""
    return normalize_minmax(binarize(iris, BinarizationSpec("versicolor", "combined")))


@pytest.fixture(scope="session")
def wbc():
    path, kind = fixture_path("wbc")
    d = load_csv(path, "class")
    d.fixture_kind = kind
    return d


@pytest.fixture(scope="session")
def wbc_norm(wbc):
    d = normalize_minmax(wbc)
    d.fixture_kind = wbc.fixture_kind
    return d


@pytest.fixture(scope="session")
def ionosphere():
    path, kind = fixture_path("ionosphere")
    d = load_csv(path, "class")
    d.fixture_kind = kind
    return d


@pytest.fixture(scope="session")
def ionosphere_norm(ionosphere):
    d = normalize_minmax(ionosphere)
    d.fixture_kind = ionosphere.fixture_kind
    return d


@pytest.fixture(scope="session")
def seeds():
    path, kind = fixture_path("seeds")
    d = load_csv(path, "class")
    d.fixture_kind = kind
    return d
