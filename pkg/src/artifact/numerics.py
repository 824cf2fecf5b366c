"""FFT and symmetric eigensolver kernels.

Both operate on the last axes and broadcast over any leading batch axes; the
arithmetic applied to one signal or matrix never depends on the rest of the
batch, so results are identical however inputs are chunked.
"""

from __future__ import annotations

import numpy as np


class ConvergenceError(RuntimeError):
    pass


def next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    base = min(n, 16)
    # small dense DFT on the decimated subsequences, then radix-2 combination
    k = np.arange(base)
    dft = np.exp(-2j * np.pi * np.outer(k, k) / base)
    X = dft @ x.reshape(x.shape[:-1] + (base, n // base))
    while X.shape[-2] < n:
        half = X.shape[-1] // 2
        even, odd = X[..., :half], X[..., half:]
        m = X.shape[-2]
        twiddle = np.exp(-1j * np.pi * np.arange(m) / m)[:, None]
        X = np.concatenate([even + twiddle * odd, even - twiddle * odd], axis=-2)
    return X.reshape(x.shape)


def _bluestein(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    m = next_pow2(2 * n - 1)
    k = np.arange(n)
    chirp = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    a = np.zeros(x.shape[:-1] + (m,), dtype=complex)
    a[..., :n] = x * chirp
    b = np.zeros(m, dtype=complex)
    b[:n] = chirp.conj()
    b[m - n + 1:] = chirp[1:][::-1].conj()
    conv = np.conj(_fft_pow2(np.conj(_fft_pow2(a) * _fft_pow2(b)))) / m
    return conv[..., :n] * chirp


def fft(x) -> np.ndarray:
    """Discrete Fourier transform along the last axis, any length."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n == 0:
        raise ValueError("empty signal")
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    return _bluestein(x)


def rfft_magnitude(x, n_fft: int | None = None) -> np.ndarray:
    """|DFT| bins 0..n_fft//2 of a real signal, zero-padded to ``n_fft``."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    n_fft = n if n_fft is None else n_fft
    if n_fft < n:
        raise ValueError("n_fft shorter than the signal")
    if n_fft > n:
        pad = [(0, 0)] * (x.ndim - 1) + [(0, n_fft - n)]
        x = np.pad(x, pad)
    return np.abs(fft(x)[..., : n_fft // 2 + 1])


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Parallel Jacobi ordering: n-1 steps of disjoint (p, q) pairs, p < q."""
    m = n + (n % 2)
    players = list(range(m))
    steps = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        steps.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return steps


def jacobi_eigh(a, tol: float = 1e-15, max_sweeps: int = 60, vectors: bool = True):
    """Eigenvalues and eigenvectors of symmetric matrices by cyclic Jacobi.

    ``a`` has shape (..., n, n). Returns ``(w, v)`` with ``a @ v[..., :, j] =
    w[..., j] * v[..., :, j]``; eigenvalues are in the order the rotations
    leave them (unsorted). With ``vectors=False`` the returned ``v`` is the
    identity and the rotations are not accumulated. A matrix stops rotating once its largest
    off-diagonal entry is at most ``tol`` times its largest initial entry.
    """
    A = np.array(a, dtype=np.float64)
    if A.shape[-1] != A.shape[-2]:
        raise ValueError("square matrices required")
    if not np.all(np.isfinite(A)):
        raise ConvergenceError("non-finite matrix entries")
    n = A.shape[-1]
    batch = A.shape[:-2]
    A = A.reshape((-1, n, n))
    A = 0.5 * (A + np.swapaxes(A, -1, -2))
    V = np.broadcast_to(np.eye(n), A.shape).copy()
    if n == 1:
        return A[:, 0, 0].reshape(batch + (1,)), V.reshape(batch + (1, 1))

    scale = np.abs(A).max(axis=(1, 2))
    thresh = tol * np.where(scale > 0, scale, 1.0)
    off = ~np.eye(n, dtype=bool)
    steps = _round_robin(n)
    for _ in range(max_sweeps):
        active = np.abs(A[:, off]).max(axis=1) > thresh
        if not active.any():
            break
        for p, q in steps:
            app = A[:, p, p]
            aqq = A[:, q, q]
            apq = A[:, p, q]
            rotate = (apq != 0) & active[:, None]
            safe = np.where(rotate, apq, 1.0)
            tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = np.where(rotate, 1.0 / np.sqrt(1.0 + t * t), 1.0)
            s = np.where(rotate, t * c, 0.0)
            cc, ss = c[:, :, None], s[:, :, None]
            Ap, Aq = A[:, p, :], A[:, q, :]
            A[:, p, :] = cc * Ap - ss * Aq
            A[:, q, :] = ss * Ap + cc * Aq
            cc, ss = c[:, None, :], s[:, None, :]
            Ap, Aq = A[:, :, p], A[:, :, q]
            A[:, :, p] = cc * Ap - ss * Aq
            A[:, :, q] = ss * Ap + cc * Aq
            if vectors:
                Vp, Vq = V[:, :, p], V[:, :, q]
                V[:, :, p] = cc * Vp - ss * Vq
                V[:, :, q] = ss * Vp + cc * Vq
            A[:, p, q] = np.where(rotate, 0.0, A[:, p, q])
            A[:, q, p] = A[:, p, q]
    else:
        if (np.abs(A[:, off]).max(axis=1) > thresh).any():
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diagonal(A, axis1=1, axis2=2).copy()
    return w.reshape(batch + (n,)), V.reshape(batch + (n, n))


def eigvalsh_sorted(a) -> np.ndarray:
    """Eigenvalues in descending order."""
    w, _ = jacobi_eigh(a, vectors=False)
    return -np.sort(-w, axis=-1)
