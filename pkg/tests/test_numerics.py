import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from artifact.numerics import ConvergenceError, fft, jacobi_eigh, next_pow2, rfft_magnitude

from oracles import charpoly_eigenvalues, naive_dft, naive_dft_fast


@pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 12, 31, 64, 100, 256])
def test_fft_matches_naive_dft(n, rng):
    x = rng.normal(size=n)
    np.testing.assert_allclose(fft(x), naive_dft(x), atol=1e-9)


def test_fft_handles_complex_and_batches(rng):
    x = rng.normal(size=(3, 5, 48)) + 1j * rng.normal(size=(3, 5, 48))
    expect = np.stack([[naive_dft_fast(row) for row in block] for block in x])
    np.testing.assert_allclose(fft(x), expect, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.integers(1, 300), elements=st.floats(-1e3, 1e3)))
def test_fft_property(x):
    np.testing.assert_allclose(np.abs(fft(x)), np.abs(naive_dft_fast(x)), atol=1e-9 * max(1.0, np.abs(x).sum()))


def test_rfft_magnitude_zero_pads():
    x = np.ones(5)
    mag = rfft_magnitude(x, 8)
    np.testing.assert_allclose(mag, np.abs(naive_dft_fast(np.r_[x, np.zeros(3)]))[:5], atol=1e-12)
    with pytest.raises(ValueError):
        rfft_magnitude(x, 4)


def test_next_pow2():
    assert [next_pow2(n) for n in (1, 2, 3, 200, 256, 257)] == [1, 2, 4, 256, 256, 512]


def test_jacobi_residuals_random_22(rng):
    a = rng.normal(size=(20, 22, 22))
    a = a + np.swapaxes(a, 1, 2)
    w, v = jacobi_eigh(a)
    resid = np.einsum("bij,bjk->bik", a, v) - v * w[:, None, :]
    assert np.abs(resid).max() < 1e-8
    np.testing.assert_allclose(np.einsum("bji,bjk->bik", v, v), np.broadcast_to(np.eye(22), a.shape), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jacobi_matches_charpoly(n, rng):
    for _ in range(10):
        a = rng.normal(size=(n, n))
        a = a + a.T
        w, _ = jacobi_eigh(a)
        np.testing.assert_allclose(np.sort(w), charpoly_eigenvalues(a), atol=1e-9)


def test_jacobi_two_by_two_block():
    a = np.eye(22)
    a[0, 1] = a[1, 0] = 0.5
    w, _ = jacobi_eigh(a)
    expect = np.sort(np.r_[charpoly_eigenvalues([[1, 0.5], [0.5, 1]]), np.ones(20)])
    np.testing.assert_allclose(np.sort(w), expect, atol=1e-12)
    np.testing.assert_allclose(charpoly_eigenvalues([[1, 0.5], [0.5, 1]]), [0.5, 1.5], atol=1e-12)


def test_jacobi_batch_independent(rng):
    a = rng.normal(size=(6, 9, 9))
    a = a + np.swapaxes(a, 1, 2)
    w_all, _ = jacobi_eigh(a)
    for i in range(6):
        w_one, _ = jacobi_eigh(a[i])
        assert np.array_equal(w_all[i], w_one)


def test_jacobi_trace_preserved(rng):
    a = rng.normal(size=(22, 22))
    a = a + a.T
    w, _ = jacobi_eigh(a)
    assert abs(w.sum() - np.trace(a)) < 1e-10


def test_jacobi_rejects_nonfinite():
    with pytest.raises(ConvergenceError):
        jacobi_eigh(np.array([[1.0, np.nan], [np.nan, 1.0]]))


def test_jacobi_iteration_cap(rng):
    a = rng.normal(size=(8, 8))
    with pytest.raises(ConvergenceError):
        jacobi_eigh(a + a.T, max_sweeps=1)
