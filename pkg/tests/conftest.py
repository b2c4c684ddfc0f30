import numpy as np
import pytest

from pkpkit import _core_py, backend


def available_impls():
    impls = [("python", _core_py)]
    try:
        from pkpkit import _core

        impls.append(("compiled", _core))
    except ImportError:
        pass
    return impls


@pytest.fixture(params=available_impls(), ids=lambda p: p[0])
def kernel_impl(request, monkeypatch):
    """Run the test once per kernel implementation."""
    name, impl = request.param
    monkeypatch.setattr(backend, "impl", impl)
    return name


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
