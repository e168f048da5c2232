import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lqnet import NotConverged, spectral_norm


@pytest.mark.parametrize("M, want", [
    (np.eye(4), 1.0),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), 1.0),
    (np.diag([3.0, -7.0]), 7.0),
    (np.zeros((3, 3)), 0.0),
])
def test_known_norms(M, want):
    assert spectral_norm(M) == pytest.approx(want, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30), st.integers(1, 30))
def test_matches_svd(seed, r, c):
    M = np.random.default_rng(seed).uniform(-1, 1, size=(r, c))
    assert spectral_norm(M) == pytest.approx(np.linalg.svd(M, compute_uv=False)[0], rel=1e-9)


def test_deterministic():
    M = np.random.default_rng(3).uniform(size=(20, 20))
    assert spectral_norm(M) == spectral_norm(M)


def test_reports_non_convergence():
    # two nearly tied singular values converge very slowly
    M = np.diag([1.0, 1.0 - 1e-9, 0.5])
    with pytest.raises(NotConverged):
        spectral_norm(M, tol=1e-15, max_iter=5)
