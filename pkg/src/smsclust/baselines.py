"""Sequential baseline: scree-plot elbow for the dimension, then GMM+BIC for K.

The elbow finder is the Zhu--Ghodsi profile likelihood: for each split ``q``
the leading ``q`` values and the trailing ``m - q`` values are modelled as two
normal samples with their own means and a common variance, and the split
with the largest profile log-likelihood wins. Later elbows repeat the search
on the values that follow the previous elbow.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .gmm import gmm_bic
from .selection import SelectionOptions, SelectionResult
from .spectral import ExtendedEmbedding, extended_ase


@dataclass(frozen=True)
class ElbowResult:
    elbows: tuple[int, ...]   # 1-based positions in the input vector
    profiles: tuple           # profile log-likelihood per split, one array per elbow search


def profile_loglik(values) -> np.ndarray:
    """Profile log-likelihood of every split ``q = 1..m-1`` (entry ``q - 1``).

    A split with zero pooled variance scores ``+inf``.
    """
    v = np.asarray(values, dtype=float)
    m = v.size
    out = np.empty(m - 1)
    for q in range(1, m):
        head, tail = v[:q], v[q:]
        ss = ((head - head.mean()) ** 2).sum() + ((tail - tail.mean()) ** 2).sum()
        var = ss / m  # biased pooled MLE
        out[q - 1] = math.inf if var == 0 else -0.5 * m * (math.log(2 * math.pi * var) + 1.0)
    return out


def zg_elbow(values, ell: int = 1) -> ElbowResult:
    """Locate the first ``ell`` elbows of a nonincreasing sequence."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ParameterError("need at least two values")
    if np.any(np.diff(v) > 0):
        raise ParameterError("values must be nonincreasing")
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    elbows = []
    profiles = []
    offset = 0
    for _ in range(ell):
        tail = v[offset:]
        if tail.size < 2:
            raise ParameterError(f"only {len(elbows)} elbow(s) available from {v.size} values; "
                                 f"requested {ell}")
        prof = profile_loglik(tail)
        q = int(np.argmax(prof)) + 1  # first maximum on ties
        offset += q
        elbows.append(offset)
        profiles.append(prof)
    return ElbowResult(elbows=tuple(elbows), profiles=tuple(profiles))


def seq_bic_zg_embedded(embedding: ExtendedEmbedding, ell: int, K_max: int,
                        opts: SelectionOptions | None = None, seed=0) -> SelectionResult:
    t0 = time.perf_counter()
    opts = opts or SelectionOptions()
    elbow = zg_elbow(embedding.eigenvalues, ell)
    d_hat = elbow.elbows[-1]
    second = gmm_bic(embedding.Z[:, :d_hat], K_max, opts.em, seed)
    return SelectionResult(f"bic-zg-{ell}", d_hat, second.K_hat, second.labels, None,
                           (time.perf_counter() - t0) * 1e3,
                           extra={"elbows": elbow.elbows, "second_stage": second})


def seq_bic_zg(A, D: int, ell: int, K_max: int, opts: SelectionOptions | None = None,
               seed=0) -> SelectionResult:
    """``d_hat`` = ``ell``-th elbow of the top-``D`` eigenvalues; then GMM+BIC on ``Z[:, :d_hat]``."""
    t0 = time.perf_counter()
    res = seq_bic_zg_embedded(extended_ase(A, D), ell, K_max, opts, seed)
    return SelectionResult(res.method, res.d_hat, res.K_hat, res.labels, None,
                           (time.perf_counter() - t0) * 1e3, res.extra)
