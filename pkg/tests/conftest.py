import pytest

from discperc import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile (or load cached) numba kernels before any timed work
    _kernels.warmup()
