"""Independent reference computations used by the tests."""

import itertools

import numpy as np


def naive_dft(x):
    x = np.asarray(x, dtype=complex)
    n = len(x)
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        out[k] = sum(x[j] * np.exp(-2j * np.pi * ((j * k) % n) / n) for j in range(n))
    return out


def naive_dft_fast(x):
    """Same O(n^2) sum as naive_dft, written as one matrix product."""
    x = np.asarray(x, dtype=complex)
    n = len(x)
    k = np.arange(n)
    return np.exp(-2j * np.pi * (np.outer(k, k) % n) / n) @ x


def charpoly(a):
    """Characteristic polynomial coefficients (highest power first) by Faddeev-LeVerrier."""
    a = np.asarray(a, dtype=float)
    n = len(a)
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def charpoly_eigenvalues(a):
    """Real roots of the characteristic polynomial, Newton-polished, ascending."""
    c = charpoly(a)
    dc = np.polyder(c)
    roots = np.sort(np.real(np.roots(c)))
    for _ in range(50):
        p, dp = np.polyval(c, roots), np.polyval(dc, roots)
        step = np.where(np.abs(dp) > 1e-300, p / np.where(dp == 0, 1, dp), 0.0)
        roots = roots - step
    return np.sort(roots)


def brute_force_metrics(truth, pred, n_classes=6):
    """(weighted F1, accuracy, sensitivities) straight from the label pairs."""
    truth, pred = list(truth), list(pred)
    total = len(truth)
    f1s, support, sens = {}, {}, {}
    for c in range(n_classes):
        tp = sum(1 for t, p in zip(truth, pred) if t == c and p == c)
        fp = sum(1 for t, p in zip(truth, pred) if t != c and p == c)
        fn = sum(1 for t, p in zip(truth, pred) if t == c and p != c)
        support[c] = tp + fn
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1s[c] = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        if support[c]:
            sens[c] = rec
    weighted = sum(support[c] / total * f1s[c] for c in range(n_classes))
    accuracy = sum(1 for t, p in zip(truth, pred) if t == p) / total
    return weighted, accuracy, sens


def all_overlaps(start, stop, events):
    """Per-class covered length of [start, stop), by clipping and sweeping.

    Events are anything with ``start_s``, ``stop_s`` and ``label``; overlapping
    events of the same class count once.
    """
    out = {}
    for cls in {e.label for e in events}:
        pieces = sorted((max(e.start_s, start), min(e.stop_s, stop)) for e in events if e.label == cls)
        covered, reach = 0.0, start
        for a, b in pieces:
            a = max(a, reach)
            if b > a:
                covered += b - a
                reach = b
        if covered > 0:
            out[cls] = covered
    return out


def permutations_of(n):
    return list(itertools.permutations(range(n)))
