"""Random graph samplers: stochastic block models and random dot product graphs.

Block labels are 1-based throughout the package (``tau[i] in {1..K}``).
Adjacency matrices are dense ``float64`` arrays, symmetric and hollow.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

_ROW_CHUNK = 512


@dataclass(frozen=True)
class SbmParams:
    """Block connectivity matrix ``B`` and membership probabilities ``pi``."""

    B: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=float, ndmin=2)
        pi = np.array(self.pi, dtype=float, ndmin=1)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise ParameterError(f"B must be square, got shape {B.shape}")
        if pi.shape != (B.shape[0],):
            raise ParameterError(f"pi has length {pi.size}, expected {B.shape[0]}")
        if not np.array_equal(B, B.T):
            raise ParameterError("B must be symmetric")
        if np.any(B < 0) or np.any(B > 1) or not np.all(np.isfinite(B)):
            raise ParameterError("entries of B must lie in [0, 1]")
        _check_pi(pi)
        B.setflags(write=False)
        pi.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "pi", pi)

    @property
    def n_blocks(self) -> int:
        return self.B.shape[0]

    @property
    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.B))


def _check_pi(pi: np.ndarray) -> None:
    if pi.ndim != 1 or pi.size == 0:
        raise ParameterError("pi must be a non-empty vector")
    if not np.all(np.isfinite(pi)) or np.any(pi <= 0):
        raise ParameterError("pi entries must be strictly positive")
    if abs(pi.sum() - 1.0) > 1e-12:
        raise ParameterError(f"pi must sum to 1 (sum={pi.sum()!r})")


def validate_adjacency(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"adjacency matrix must be square, got {A.shape}")
    if not np.array_equal(A, A.T):
        raise ParameterError("adjacency matrix must be symmetric")
    if np.any(np.diag(A) != 0):
        raise ParameterError("adjacency matrix must have a zero diagonal")
    if not np.all((A == 0) | (A == 1)):
        raise ParameterError("adjacency entries must be 0 or 1")
    return A


def sample_memberships(pi, n: int, seed) -> np.ndarray:
    """Draw ``n`` i.i.d. categorical block labels (1-based) with probabilities ``pi``."""
    pi = np.asarray(pi, dtype=float)
    _check_pi(pi)
    if n < 1:
        raise ParameterError("n must be at least 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(pi)
    cdf[-1] = 1.0
    u = rng.random(n)
    return np.searchsorted(cdf, u, side="right").astype(np.int64) + 1


def _check_tau(tau, n_blocks: int) -> np.ndarray:
    tau = np.asarray(tau)
    if tau.ndim != 1 or tau.size < 1:
        raise ParameterError("tau must be a non-empty vector")
    if not np.issubdtype(tau.dtype, np.integer):
        if not np.all(tau == np.round(tau)):
            raise ParameterError("tau must hold integer labels")
        tau = tau.astype(np.int64)
    if tau.min() < 1 or tau.max() > n_blocks:
        raise ParameterError(f"labels must lie in 1..{n_blocks}")
    return tau


def edge_probability_matrix(params: SbmParams, tau) -> np.ndarray:
    """``P[i, j] = B[tau_i, tau_j]``."""
    tau = _check_tau(tau, params.n_blocks) - 1
    return params.B[np.ix_(tau, tau)]


def _bernoulli_symmetric(prob_rows, n: int, rng: np.random.Generator) -> np.ndarray:
    # Rows are drawn in order, so the stream (and result) does not depend on the chunk size.
    A = np.zeros((n, n), dtype=float)
    for start in range(0, n, _ROW_CHUNK):
        stop = min(start + _ROW_CHUNK, n)
        u = rng.random((stop - start, n))
        block = (u < prob_rows(start, stop)).astype(float)
        rows = np.arange(start, stop)[:, None]
        block[np.arange(n)[None, :] <= rows] = 0.0
        A[start:stop] = block
    A += A.T
    return A


def sample_sbm_conditional(params: SbmParams, tau, seed) -> np.ndarray:
    """Sample an adjacency matrix from SBM(B, tau) with fixed memberships."""
    tau = _check_tau(tau, params.n_blocks) - 1
    n = tau.size
    B = params.B
    rng = np.random.default_rng(seed)
    return _bernoulli_symmetric(lambda a, b: B[np.ix_(tau[a:b], tau)], n, rng)


def sample_sbm(n: int, params: SbmParams, seed) -> tuple[np.ndarray, np.ndarray]:
    """Sample memberships then a graph; both draws are driven by ``seed``."""
    ss = np.random.SeedSequence(seed)
    s_tau, s_graph = ss.spawn(2)
    tau = sample_memberships(params.pi, n, s_tau)
    return tau, sample_sbm_conditional(params, tau, s_graph)


def validate_latent_positions(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ParameterError("latent positions must be an n x d matrix")
    P = X @ X.T
    tol = 1e-12
    if np.any(P < -tol) or np.any(P > 1 + tol):
        raise ParameterError("latent position inner products must lie in [0, 1]")
    return X


def sample_rdpg(X, seed) -> np.ndarray:
    """Sample an RDPG with edge probabilities ``X_i . X_j``."""
    X = validate_latent_positions(X)
    rng = np.random.default_rng(seed)
    return _bernoulli_symmetric(lambda a, b: np.clip(X[a:b] @ X.T, 0.0, 1.0), X.shape[0], rng)


def latent_positions_from_sbm(params: SbmParams, tau) -> np.ndarray:
    """Block-constant latent positions ``X`` with ``X X^T = P`` for positive semidefinite ``B``."""
    w, V = np.linalg.eigh(params.B)
    if w.min() < -1e-12:
        raise ParameterError("B is indefinite; no RDPG representation")
    root = V * np.sqrt(np.clip(w, 0.0, None))
    tau = _check_tau(tau, params.n_blocks) - 1
    return root[tau]


# Parameters used throughout the simulation studies.
TWO_BLOCK = SbmParams(B=[[0.2, 0.1], [0.1, 0.25]], pi=[0.5, 0.5])
THREE_BLOCK = SbmParams(
    B=[[0.2, 0.1, 0.08], [0.1, 0.25, 0.05], [0.08, 0.05, 0.4]],
    pi=[0.4, 0.4, 0.2],
)


def sweep_params(p: float) -> SbmParams:
    """Two-block model ``[[0.2, p], [p, 0.1]]`` with balanced blocks."""
    return SbmParams(B=[[0.2, p], [p, 0.1]], pi=[0.5, 0.5])
