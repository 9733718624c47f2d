"""Simultaneous selection of embedding dimension and cluster count.

Three variants share the same constrained-mixture BIC grid over ``(d, K)``:

* :func:`sms` labels vertices with the winning full-dimensional model;
* :func:`sms_reduced` keeps only ``d_hat`` and reclusters the truncated
  embedding with full-covariance GMMs, choosing ``K`` by BIC;
* :func:`sms_two_step` replaces the grid with, for each ``d``, a sequential
  ``K`` search on the truncated embedding lifted to the constrained model.

All fits draw seeds from ``derive_seed(seed, ...)`` keyed on the cell, never on
the method, so methods that reach the same ``d_hat`` share their final
clustering exactly.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError, SelectionError
from .gmm import (EmOptions, FitResult, em_fit, extend_to_redundant, gmm_bic,
                  map_labels, unconstrained_seed)
from .seeding import derive_seed
from .spectral import ExtendedEmbedding, extended_ase


@dataclass(frozen=True)
class SelectionOptions:
    em: EmOptions = field(default_factory=EmOptions)
    workers: int = 1  # process-level parallelism over grid cells


@dataclass(frozen=True)
class BicGrid:
    """BIC values indexed ``[d - 1, K - 1]``.

    ``-inf`` marks a degenerate fit and ``nan`` a cell the method never
    evaluated.
    """

    values: np.ndarray
    fits: dict  # (d, K) -> FitResult

    @property
    def D(self) -> int:
        return self.values.shape[0]

    @property
    def K_max(self) -> int:
        return self.values.shape[1]

    def argmax(self) -> tuple[int, int]:
        """Best ``(d, K)``; ties go to smaller ``d``, then smaller ``K``."""
        best = None
        for d in range(1, self.D + 1):
            for K in range(1, self.K_max + 1):
                v = self.values[d - 1, K - 1]
                if math.isnan(v) or v == -math.inf:
                    continue
                if best is None or v > self.values[best[0] - 1, best[1] - 1]:
                    best = (d, K)
        if best is None:
            raise SelectionError("every cell of the BIC grid is degenerate")
        return best


@dataclass(frozen=True)
class SelectionResult:
    method: str
    d_hat: int
    K_hat: int
    labels: np.ndarray
    grid: BicGrid | None
    runtime_ms: float = 0.0
    extra: dict = field(default_factory=dict, repr=False)


def constrained_seed(seed, d: int, K: int) -> int:
    return derive_seed(seed, "sms", d, K)


def _fit_cell(args):
    Z, d, K, em, seed = args
    return em_fit(Z, d, K, em, seed)


def fit_grid(Z, K_max: int, opts: SelectionOptions | None = None, seed=0) -> BicGrid:
    """Fit the constrained mixture at every ``(d, K)`` with ``d <= D``, ``K <= K_max``."""
    opts = opts or SelectionOptions()
    Z = np.asarray(Z, dtype=float)
    D = Z.shape[1]
    if K_max < 1:
        raise ParameterError("K_max must be at least 1")
    cells = [(d, K) for d in range(1, D + 1) for K in range(1, K_max + 1)]
    tasks = [(Z, d, K, opts.em, constrained_seed(seed, d, K)) for d, K in cells]
    if opts.workers > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as ex:
            results = list(ex.map(_fit_cell, tasks))
    else:
        results = [_fit_cell(t) for t in tasks]
    values = np.empty((D, K_max))
    fits = {}
    for (d, K), fit in zip(cells, results):
        values[d - 1, K - 1] = fit.bic
        fits[(d, K)] = fit
    return BicGrid(values=values, fits=fits)


def _embed(A_or_embedding, D):
    if isinstance(A_or_embedding, ExtendedEmbedding):
        if A_or_embedding.D != D:
            raise ParameterError(f"embedding has D={A_or_embedding.D}, expected {D}")
        return A_or_embedding.Z
    return extended_ase(A_or_embedding, D).Z


def sms_embedded(Z, K_max: int, opts: SelectionOptions | None = None, seed=0,
                 grid: BicGrid | None = None) -> SelectionResult:
    """Simultaneous selection on a precomputed ``n x D`` embedding."""
    t0 = time.perf_counter()
    Z = np.asarray(Z, dtype=float)
    grid = grid or fit_grid(Z, K_max, opts, seed)
    d_hat, K_hat = grid.argmax()
    labels = map_labels(Z, grid.fits[(d_hat, K_hat)].params)
    return SelectionResult("sms", d_hat, K_hat, labels, grid, _ms(t0))


def sms(A, D: int, K_max: int, opts: SelectionOptions | None = None, seed=0) -> SelectionResult:
    """Embed once, fit the constrained mixture on the whole ``(d, K)`` grid, label by MAP."""
    t0 = time.perf_counter()
    res = sms_embedded(_embed(A, D), K_max, opts, seed)
    return _with_runtime(res, t0)


def sms_reduced_embedded(Z, K_max: int, opts: SelectionOptions | None = None, seed=0,
                         grid: BicGrid | None = None) -> SelectionResult:
    t0 = time.perf_counter()
    opts = opts or SelectionOptions()
    Z = np.asarray(Z, dtype=float)
    grid = grid or fit_grid(Z, K_max, opts, seed)
    d_hat, K_grid = grid.argmax()
    second = gmm_bic(Z[:, :d_hat], K_max, opts.em, seed)
    return SelectionResult("sms-reduced", d_hat, second.K_hat, second.labels, grid, _ms(t0),
                           extra={"grid_K": K_grid, "second_stage": second})


def sms_reduced(A, D: int, K_max: int, opts: SelectionOptions | None = None, seed=0) -> SelectionResult:
    """Grid ``d_hat`` as in :func:`sms`, then GMM+BIC on the first ``d_hat`` columns.

    The reported ``K_hat`` is the cluster count chosen in the second stage.
    """
    t0 = time.perf_counter()
    res = sms_reduced_embedded(_embed(A, D), K_max, opts, seed)
    return _with_runtime(res, t0)


def sms_two_step_embedded(Z, K_max: int, opts: SelectionOptions | None = None, seed=0) -> SelectionResult:
    t0 = time.perf_counter()
    opts = opts or SelectionOptions()
    Z = np.asarray(Z, dtype=float)
    n, D = Z.shape
    values = np.full((D, K_max), np.nan)
    fits = {}
    step1 = {}
    for d in range(1, D + 1):
        X = Z[:, :d]
        cache = {}
        best: FitResult | None = None
        for K in range(1, K_max + 1):
            fit = em_fit(X, d, K, opts.em, unconstrained_seed(seed, d, K))
            cache[K] = fit
            if best is not None and fit.bic < best.bic:
                break
            if best is None or fit.bic > best.bic:
                best = fit
        step1[d] = cache
        if best is None or not best.ok:
            continue
        full = extend_to_redundant(Z, best, opts.em)
        values[d - 1, best.K - 1] = full.bic
        fits[(d, best.K)] = full
    grid = BicGrid(values=values, fits=fits)
    d_hat, K_grid = grid.argmax()
    second = gmm_bic(Z[:, :d_hat], K_max, opts.em, seed, cache=step1[d_hat])
    return SelectionResult("two-step", d_hat, second.K_hat, second.labels, grid, _ms(t0),
                           extra={"grid_K": K_grid, "second_stage": second})


def sms_two_step(A, D: int, K_max: int, opts: SelectionOptions | None = None, seed=0) -> SelectionResult:
    """For each ``d``: sequential-K GMM on ``Z[:, :d]`` (stop at the first BIC drop),
    lift the best fit to the constrained model via redundant variances, score
    by constrained BIC. ``d_hat`` maximizes that score; labels come from
    GMM+BIC on ``Z[:, :d_hat]``.
    """
    t0 = time.perf_counter()
    res = sms_two_step_embedded(_embed(A, D), K_max, opts, seed)
    return _with_runtime(res, t0)


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1e3


def _with_runtime(res: SelectionResult, t0: float) -> SelectionResult:
    return replace(res, runtime_ms=_ms(t0))


METHODS = {
    "sms": sms_embedded,
    "sms-reduced": sms_reduced_embedded,
    "two-step": sms_two_step_embedded,
}
