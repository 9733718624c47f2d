"""Gaussian mixture for extended embeddings with a constrained redundant block.

A point ``z in R^D`` is split as ``z = [x | y]`` with ``x`` the first ``d``
coordinates. Component ``k`` has density

    N(x; mu_k, Sigma_k) * N(y; 0, sigma2_k I_{D-d})

i.e. a free mean and covariance on the informative block and a zero-mean
spherical covariance on the redundant block, with no cross-covariance. With
``d == D`` the model is an ordinary full-covariance Gaussian mixture, which is
how the unconstrained fits used for cluster-count selection are computed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericError, ParameterError, SelectionError
from . import _em_kernels
from .seeding import derive_seed

LOG_2PI = math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ConstrainedGmmParams:
    """Parameters of the constrained mixture.

    Attributes
    ----------
    weights : (K,) mixing proportions, strictly positive, summing to one.
    means : (K, d) informative-block means; the redundant-block mean is zero.
    covariances : (K, d, d) informative-block covariances.
    redundant_var : (K,) spherical redundant-block variances; empty when ``d == D``.
    D : total dimension.
    """

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    redundant_var: np.ndarray
    D: int

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, ndmin=1)
        mu = np.array(self.means, dtype=float, ndmin=2)
        cov = np.array(self.covariances, dtype=float)
        s2 = np.array(self.redundant_var, dtype=float, ndmin=1)
        K, d = mu.shape
        D = int(self.D)
        if w.shape != (K,):
            raise ParameterError("weights and means disagree on K")
        if cov.shape != (K, d, d):
            raise ParameterError(f"covariances must have shape {(K, d, d)}, got {cov.shape}")
        if not 1 <= d <= D:
            raise ParameterError(f"need 1 <= d <= D, got d={d}, D={D}")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ParameterError("weights must be positive and sum to 1")
        if not np.allclose(cov, cov.transpose(0, 2, 1), rtol=1e-12, atol=0.0):
            raise ParameterError("covariances must be symmetric")
        scale = np.maximum(np.abs(cov).max(axis=(1, 2)), 1.0)
        if np.any(np.linalg.eigvalsh(cov).min(axis=1) < -1e-10 * scale):
            raise ParameterError("covariances must be positive semidefinite")
        if d == D:
            if s2.size:
                raise ParameterError("redundant_var must be empty when d == D")
            s2 = np.empty(0)
        elif s2.shape != (K,) or np.any(s2 <= 0) or not np.all(np.isfinite(s2)):
            raise ParameterError("redundant_var must hold K positive values")
        for name, arr in (("weights", w), ("means", mu), ("covariances", cov), ("redundant_var", s2)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "D", D)

    @property
    def K(self) -> int:
        return self.weights.shape[0]

    @property
    def d(self) -> int:
        return self.means.shape[1]

    def full_mean(self, k: int) -> np.ndarray:
        out = np.zeros(self.D)
        out[: self.d] = self.means[k]
        return out

    def full_covariance(self, k: int) -> np.ndarray:
        """Block-diagonal ``D x D`` covariance of component ``k``."""
        d = self.d
        out = np.zeros((self.D, self.D))
        out[:d, :d] = self.covariances[k]
        if d < self.D:
            idx = np.arange(d, self.D)
            out[idx, idx] = self.redundant_var[k]
        return out


@dataclass(frozen=True)
class EmOptions:
    tol: float = 1e-8
    max_iter: int = 500
    restarts: int = 5
    sigma2_floor: float = 1e-12
    ridge: float = 1e-9  # relative: ridge * trace(Sigma_k) / d is added to each Sigma_k
    kmeans_iter: int = 25


@dataclass(frozen=True)
class FitResult:
    params: ConstrainedGmmParams | None
    loglik: float
    bic: float
    n_iter: int
    converged: bool
    status: str  # "ok" | "degenerate"
    d: int
    K: int
    n: int
    history: tuple = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def param_count(d: int, K: int, D: int) -> int:
    """Number of free parameters of the constrained mixture at ``(d, K)``."""
    if not 1 <= d <= D or K < 1:
        raise ParameterError(f"invalid (d, K, D) = {(d, K, D)}")
    eta = (K - 1) + K * d + K * d * (d + 1) // 2
    if d < D:
        eta += K
    return eta


# -- density evaluation ---------------------------------------------------------------


def _split(Z: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    X = np.ascontiguousarray(Z[:, :d])
    Y = Z[:, d:]
    return X, np.einsum("ij,ij->i", Y, Y)


def _component_logpdf(X: np.ndarray, sqY: np.ndarray, m: int, params: ConstrainedGmmParams) -> np.ndarray:
    """(n, K) log-density of each row under each component (weights excluded)."""
    d = X.shape[1]
    try:
        L = np.linalg.cholesky(params.covariances)
    except np.linalg.LinAlgError as exc:
        raise NumericError("singular informative covariance") from exc
    diag = np.diagonal(L, axis1=1, axis2=2)
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        raise NumericError("singular informative covariance")
    Linv = np.linalg.inv(L)
    diff = X[None, :, :] - params.means[:, None, :]
    white = diff @ Linv.transpose(0, 2, 1)
    maha = np.einsum("kni,kni->kn", white, white)
    logdet = 2.0 * np.log(diag).sum(axis=1)
    out = -0.5 * (d * LOG_2PI + logdet[:, None] + maha)
    if m:
        s2 = params.redundant_var
        out -= 0.5 * (m * np.log(2.0 * np.pi * s2)[:, None] + sqY[None, :] / s2[:, None])
    return out.T


def _weighted_logpdf(X, sqY, m, params) -> np.ndarray:
    return _component_logpdf(X, sqY, m, params) + np.log(params.weights)[None, :]


def _logsumexp_rows(a: np.ndarray) -> np.ndarray:
    amax = a.max(axis=1)
    return amax + np.log(np.exp(a - amax[:, None]).sum(axis=1))


def _check_dims(Z: np.ndarray, params: ConstrainedGmmParams) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != params.D:
        raise ParameterError(f"data must have {params.D} columns")
    return Z


def score_samples(Z, params: ConstrainedGmmParams) -> np.ndarray:
    """Per-row log-density ``log f(z_i; theta)``."""
    Z = _check_dims(Z, params)
    X, sqY = _split(Z, params.d)
    return _logsumexp_rows(_weighted_logpdf(X, sqY, params.D - params.d, params))


def log_density(z, params: ConstrainedGmmParams) -> float:
    z = np.asarray(z, dtype=float).reshape(1, -1)
    return float(score_samples(z, params)[0])


def responsibilities(Z, params: ConstrainedGmmParams) -> np.ndarray:
    Z = _check_dims(Z, params)
    X, sqY = _split(Z, params.d)
    a = _weighted_logpdf(X, sqY, params.D - params.d, params)
    return np.exp(a - _logsumexp_rows(a)[:, None])


def map_labels(Z, params: ConstrainedGmmParams) -> np.ndarray:
    """Maximum a posteriori component (1-based); ties go to the smaller index."""
    Z = _check_dims(Z, params)
    X, sqY = _split(Z, params.d)
    return np.argmax(_weighted_logpdf(X, sqY, params.D - params.d, params), axis=1) + 1


def total_loglik(Z, params: ConstrainedGmmParams) -> float:
    return float(score_samples(Z, params).sum())


def bic(Z, fit: FitResult) -> float:
    """``2 * loglik - param_count * log(n)``; ``-inf`` for a degenerate fit."""
    if not fit.ok:
        return -math.inf
    Z = np.asarray(Z, dtype=float)
    ll = total_loglik(Z, fit.params)
    return _bic_value(ll, fit.d, fit.K, fit.params.D, Z.shape[0])


def _bic_value(ll: float, d: int, K: int, D: int, n: int) -> float:
    return 2.0 * ll - param_count(d, K, D) * math.log(n)


# -- sampling ------------------------------------------------------------------------


def sample_model(params: ConstrainedGmmParams, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` i.i.d. rows; returns (1-based labels, ``n x D`` matrix)."""
    if n < 1:
        raise ParameterError("n must be at least 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(params.weights)
    cdf[-1] = 1.0
    labels = np.searchsorted(cdf, rng.random(n), side="right")
    d, D = params.d, params.D
    Z = np.empty((n, D))
    eps = rng.standard_normal((n, D))
    # Cholesky fails on singular PSD covariances; eigen square root handles them.
    w, V = np.linalg.eigh(params.covariances)
    roots = V * np.sqrt(np.clip(w, 0.0, None))[:, None, :]
    Z[:, :d] = params.means[labels] + np.einsum("nij,nj->ni", roots[labels], eps[:, :d])
    if d < D:
        Z[:, d:] = eps[:, d:] * np.sqrt(params.redundant_var[labels])[:, None]
    return labels + 1, Z


# -- EM ------------------------------------------------------------------------------


class _Degenerate(Exception):
    pass


def _m_step(XT, sqY, m, R, opts: EmOptions, out):
    """Closed-form maximizer of the expected complete-data log-likelihood.

    Writes weights, means, ridged covariances and floored redundant variances
    into the arrays of ``out``.
    """
    d, n = XT.shape
    weights, means, covs, s2 = out
    Nk = _em_kernels.m_step(XT, sqY, R, means, covs, s2)
    if np.any(Nk < 10.0 * _EPS * n):
        raise _Degenerate("empty component")
    weights[:] = Nk / n
    ridge = opts.ridge * np.trace(covs, axis1=1, axis2=2) / d
    idx = np.arange(d)
    covs[:, idx, idx] += ridge[:, None]
    if m:
        np.maximum(s2 / (m * Nk), opts.sigma2_floor, out=s2)
    else:
        s2[:] = 1.0


def run_em(X, sqY, m, resp, D, opts: EmOptions):
    """EM from initial ``(n, K)`` responsibilities.

    Returns ``(params, n_iter, converged, history)``; raises ``_Degenerate``
    when a component empties or a covariance turns singular.
    """
    n, d = X.shape
    K = resp.shape[1]
    XT = np.ascontiguousarray(X.T)
    sqY = np.ascontiguousarray(sqY, dtype=float)
    R = np.ascontiguousarray(np.asarray(resp, dtype=float).T)
    out = (np.empty(K), np.empty((K, d)), np.empty((K, d, d)), np.empty(K))
    history = []
    ll_prev = None
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        _m_step(XT, sqY, m, R, opts, out)
        ll, ok = _em_kernels.e_step(XT, sqY, m, out[0], out[1], out[2], out[3], R)
        if not ok:
            raise _Degenerate("singular covariance or non-finite likelihood")
        history.append(ll)
        if ll_prev is not None and abs(ll - ll_prev) <= opts.tol * abs(ll):
            converged = True
            break
        ll_prev = ll
    weights, means, covs, s2 = out
    try:
        params = ConstrainedGmmParams(weights / weights.sum(), means, covs,
                                      s2 if m else np.empty(0), D)
    except ParameterError as exc:
        raise _Degenerate(str(exc)) from exc
    return params, it, converged, history


def kmeans_labels(X: np.ndarray, K: int, rng: np.random.Generator, n_iter: int = 25) -> np.ndarray:
    """k-means++ seeding followed by ``n_iter`` Lloyd iterations; 0-based labels."""
    n = X.shape[0]
    centers = np.empty((K, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, K):
        total = d2.sum()
        if total > 0:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    labels = None
    for _ in range(n_iter):
        dist = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = np.argmin(dist, axis=1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(K):
            members = labels == j
            if members.any():
                centers[j] = X[members].mean(axis=0)
    return labels


def _initial_responsibilities(X, K, restart, rng, opts):
    n = X.shape[0]
    if restart == 0:
        resp = np.zeros((n, K))
        resp[np.arange(n), kmeans_labels(X, K, rng, opts.kmeans_iter)] = 1.0
        return resp
    resp = rng.random((n, K))
    return resp / resp.sum(axis=1, keepdims=True)


def em_fit(Z, d: int, K: int, opts: EmOptions | None = None, seed=0,
           init_resp: np.ndarray | None = None) -> FitResult:
    """Best-of-restarts maximum-likelihood fit of the constrained mixture at ``(d, K)``.

    Restart 0 starts from a k-means partition of the informative columns; the
    others from random responsibilities. ``init_resp`` replaces all restarts
    with a single run from the given responsibilities. Degenerate fits come
    back with ``status="degenerate"`` and ``bic=-inf``.
    """
    opts = opts or EmOptions()
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2:
        raise ParameterError("Z must be a matrix")
    n, D = Z.shape
    if not 1 <= d <= D:
        raise ParameterError(f"d must lie in 1..{D}, got {d}")
    if K < 1 or n <= K:
        raise ParameterError(f"need 1 <= K < n, got K={K}, n={n}")
    X, sqY = _split(Z, d)
    m = D - d
    rng = np.random.default_rng(seed)

    if init_resp is not None:
        starts = [np.asarray(init_resp, dtype=float)]
    else:
        n_starts = 1 if K == 1 else max(1, opts.restarts)
        starts = None

    best = None
    for r in range(len(starts) if starts is not None else n_starts):
        resp = starts[r] if starts is not None else _initial_responsibilities(X, K, r, rng, opts)
        try:
            run = run_em(X, sqY, m, resp, D, opts)
        except _Degenerate:
            continue
        if best is None or run[3][-1] > best[3][-1]:
            best = run
    if best is None:
        return FitResult(None, -math.inf, -math.inf, 0, False, "degenerate", d, K, n)
    params, n_iter, converged, history = best
    # Reported log-likelihood goes through the public density path so that bic() reproduces it exactly.
    try:
        ll = float(_logsumexp_rows(_weighted_logpdf(X, sqY, m, params)).sum())
    except NumericError:
        return FitResult(None, -math.inf, -math.inf, n_iter, False, "degenerate", d, K, n)
    return FitResult(params, ll, _bic_value(ll, d, K, D, n), n_iter, converged, "ok",
                     d, K, n, tuple(history))


def extend_to_redundant(Z, fit: FitResult, opts: EmOptions | None = None) -> FitResult:
    """Lift a full-covariance fit on ``Z[:, :d]`` to the constrained model on all of ``Z``.

    Responsibilities of the informative-only fit give the redundant variances
    ``sum_i r_ik |y_i|^2 / ((D - d) N_k)``; the returned fit carries the
    constrained-model log-likelihood and BIC.
    """
    opts = opts or EmOptions()
    Z = np.asarray(Z, dtype=float)
    n, D = Z.shape
    if not fit.ok:
        return replace(fit, params=None)
    p = fit.params
    d = p.d
    if d == D:
        return fit
    X, sqY = _split(Z, d)
    m = D - d
    a = _weighted_logpdf(X, np.zeros(n), 0, p)
    resp = np.exp(a - _logsumexp_rows(a)[:, None])
    Nk = resp.sum(axis=0)
    s2 = np.maximum((resp.T @ sqY) / (m * Nk), opts.sigma2_floor)
    try:
        params = ConstrainedGmmParams(p.weights, p.means, p.covariances, s2, D)
        ll = float(_logsumexp_rows(_weighted_logpdf(X, sqY, m, params)).sum())
    except (ParameterError, NumericError):
        return FitResult(None, -math.inf, -math.inf, fit.n_iter, False, "degenerate", d, fit.K, n)
    return FitResult(params, ll, _bic_value(ll, d, fit.K, D, n), fit.n_iter, fit.converged,
                     "ok", d, fit.K, n, fit.history)


# -- unconstrained GMM with BIC over K -------------------------------------------------


@dataclass(frozen=True)
class GmmBicResult:
    K_hat: int
    fit: FitResult
    labels: np.ndarray
    fits: tuple  # FitResult for K = 1..K_max

    @property
    def bics(self) -> np.ndarray:
        return np.array([f.bic for f in self.fits])


def unconstrained_seed(seed, d: int, K: int) -> int:
    return derive_seed(seed, "gmm", d, K)


def gmm_bic(X, K_max: int, opts: EmOptions | None = None, seed=0, cache: dict | None = None) -> GmmBicResult:
    """Full-covariance GMM fits for ``K = 1..K_max`` on ``X``; pick K by BIC, label by MAP.

    Fit seeds depend only on ``(seed, X.shape[1], K)`` so that any caller
    handing the same truncated embedding gets the same clustering. ``cache``
    maps ``K`` to an existing fit computed with that same seed.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[1]
    fits = []
    for K in range(1, K_max + 1):
        if cache is not None and K in cache:
            fits.append(cache[K])
        else:
            fits.append(em_fit(X, d, K, opts, unconstrained_seed(seed, d, K)))
    best = _argmax_first([f.bic for f in fits])
    if best is None:
        raise SelectionError("all unconstrained fits were degenerate")
    fit = fits[best]
    return GmmBicResult(K_hat=best + 1, fit=fit, labels=map_labels(X, fit.params), fits=tuple(fits))


def _argmax_first(values) -> int | None:
    best = None
    for i, v in enumerate(values):
        if v == -math.inf or math.isnan(v):
            continue
        if best is None or v > values[best]:
            best = i
    return best
