"""Shared fixtures: a session cache directory so prime-sum scans run once."""

import pytest

from eksigma.config import RunConfig


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run the long optional checks as well",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("primesum-cache"))


@pytest.fixture(scope="session")
def cfg_fast(cache_dir):
    """Quick config: prime sums to 1e6, shared on-disk cache."""
    return RunConfig(prime_limit=10**6, cache_dir=cache_dir)


@pytest.fixture(scope="session")
def cfg_full(cache_dir):
    """Full-accuracy config: prime sums to 1e7, shared on-disk cache."""
    return RunConfig(prime_limit=10**7, cache_dir=cache_dir)


@pytest.fixture(scope="session")
def table_rows_full(cfg_full):
    """First-order sweep over odd primes q <= 600 at full accuracy."""
    from eksigma.ekcore import sweep_table

    return sweep_table(1, 600, cfg_full)
