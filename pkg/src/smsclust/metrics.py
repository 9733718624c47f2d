"""Clustering agreement and Monte Carlo tabulation."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from .errors import ParameterError


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray  # (rows = labels of a, cols = labels of b)
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int


def contingency(labels_a, labels_b) -> ContingencyTable:
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError("label vectors must have equal length")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    counts = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
    np.add.at(counts, (ia, ib), 1)
    return ContingencyTable(counts, counts.sum(axis=1), counts.sum(axis=0), int(a.size))


def _comb2(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def ari(labels_a, labels_b) -> float:
    """Adjusted Rand index.

    When the chance-corrected denominator vanishes (both partitions trivial)
    the result is 1.0 for equal partitions and 0.0 otherwise.
    """
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape:
        raise ParameterError(f"label vectors differ in length: {a.shape} vs {b.shape}")
    if a.ndim != 1 or a.size < 2:
        raise ParameterError("need at least two labelled items")
    t = contingency(a, b)
    index = int(_comb2(t.counts).sum())
    sa = int(_comb2(t.row_sums).sum())
    sb = int(_comb2(t.col_sums).sum())
    total = t.n * (t.n - 1) // 2
    expected = sa * sb / total
    max_index = 0.5 * (sa + sb)
    if max_index == expected:
        same = t.counts.shape[0] == t.counts.shape[1] and np.count_nonzero(t.counts) == t.counts.shape[0]
        return 1.0 if same else 0.0
    return float((index - expected) / (max_index - expected))


@dataclass(frozen=True)
class SelectionTable:
    counts: dict          # (d_hat, K_hat) -> count
    total: int
    correct_K_rate: float
    correct_d_rate: float
    correct_rate: float   # both right

    def rows(self):
        """``(d_hat, K_hat, count)`` sorted by ``d_hat`` then ``K_hat``."""
        return [(d, K, c) for (d, K), c in sorted(self.counts.items())]


def selection_table(results, truth: tuple[int, int]) -> SelectionTable:
    """Frequency of each selected ``(d_hat, K_hat)`` plus correct-selection rates.

    ``results`` may hold :class:`~smsclust.selection.SelectionResult` objects
    or plain ``(d_hat, K_hat)`` pairs.
    """
    pairs = [(r.d_hat, r.K_hat) if hasattr(r, "d_hat") else tuple(r) for r in results]
    if not pairs:
        raise ParameterError("no results to tabulate")
    d0, K0 = truth
    counts = Counter(pairs)
    n = len(pairs)
    return SelectionTable(
        counts=dict(counts),
        total=n,
        correct_K_rate=sum(c for (d, K), c in counts.items() if K == K0) / n,
        correct_d_rate=sum(c for (d, K), c in counts.items() if d == d0) / n,
        correct_rate=counts.get((d0, K0), 0) / n,
    )


@dataclass(frozen=True)
class SignTest:
    wins: int
    losses: int
    ties: int
    pvalue: float


def sign_test(differences) -> SignTest:
    """One-sided sign test of ``P(difference > 0) > 1/2``; zero differences are dropped."""
    diff = np.asarray(differences, dtype=float)
    wins = int(np.count_nonzero(diff > 0))
    losses = int(np.count_nonzero(diff < 0))
    ties = diff.size - wins - losses
    if wins + losses == 0:
        return SignTest(wins, losses, ties, 1.0)
    p = binomtest(wins, wins + losses, 0.5, alternative="greater").pvalue
    return SignTest(wins, losses, ties, float(p))
