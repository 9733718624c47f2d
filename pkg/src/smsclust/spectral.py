"""Symmetric eigendecomposition, extended adjacency spectral embedding, and
within-block sample statistics of embedding columns."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateBlockError, EmbeddingDimensionError, NumericError, ParameterError


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray   # (m,), algebraically descending
    eigenvectors: np.ndarray  # (n, m), orthonormal columns


@dataclass(frozen=True)
class ExtendedEmbedding:
    """Rows of ``Z = U_[D] diag(lambda_[D])^(1/2)``.

    ``eigenvalues`` holds the top-``D`` eigenvalues used to build ``Z``.
    """

    Z: np.ndarray
    eigenvalues: np.ndarray

    @property
    def D(self) -> int:
        return self.Z.shape[1]

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    def split(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        return split(self.Z, d)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    # Largest-|entry| of each column made positive; argmax returns the lowest index on ties.
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def eig_sym(A, top: int) -> SpectralDecomposition:
    """The ``top`` algebraically largest eigenpairs of a symmetric matrix, descending."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if not 1 <= top <= n:
        raise ParameterError(f"top must lie in 1..{n}, got {top}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12):
        raise ParameterError("matrix is not symmetric")
    try:
        w, V = scipy.linalg.eigh(A, subset_by_index=[n - top, n - 1], driver="evr")
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigensolver failed: {exc}") from exc
    return SpectralDecomposition(eigenvalues=w[::-1].copy(), eigenvectors=_fix_signs(V[:, ::-1]))


def extended_ase(A, D: int) -> ExtendedEmbedding:
    """Embed ``A`` into ``D`` dimensions using its top ``D`` eigenpairs.

    Raises :class:`EmbeddingDimensionError` if the ``D``-th eigenvalue is not
    positive; the error carries the largest admissible ``D``.
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        raise ParameterError("graph is empty")
    dec = eig_sym(A, D)
    lam = dec.eigenvalues
    if lam[-1] <= 0:
        raise EmbeddingDimensionError(D, int(np.count_nonzero(lam > 0)))
    Z = dec.eigenvectors * np.sqrt(lam)
    return ExtendedEmbedding(Z=Z, eigenvalues=lam)


def split(Z, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Informative (first ``d`` columns) and redundant (remaining) views of ``Z``."""
    Z = np.asarray(Z)
    D = Z.shape[1]
    if not 0 <= d <= D:
        raise ParameterError(f"d must lie in 0..{D}, got {d}")
    return Z[:, :d], Z[:, d:]


@dataclass(frozen=True)
class BlockStats:
    """Per-block sample statistics; arrays are indexed by position in ``labels``."""

    labels: np.ndarray        # (K,)
    sizes: np.ndarray         # (K,)
    means: np.ndarray         # (K, m)
    variances: np.ndarray     # (K, m), divisor n_k - 1
    covariances: np.ndarray   # (K, m, m), divisor n_k - 1

    def offdiag(self, k: int) -> np.ndarray:
        """Strictly upper-triangular covariance entries of block position ``k``."""
        m = self.covariances.shape[1]
        iu = np.triu_indices(m, 1)
        return self.covariances[k][iu]


def block_stats(Y, tau) -> BlockStats:
    Y = np.asarray(Y, dtype=float)
    tau = np.asarray(tau)
    if Y.ndim != 2 or Y.shape[0] != tau.shape[0]:
        raise ParameterError("rows of Y must align with tau")
    labels, sizes = np.unique(tau, return_counts=True)
    if np.any(sizes < 2):
        bad = labels[sizes < 2].tolist()
        raise DegenerateBlockError(f"blocks {bad} have fewer than 2 members")
    m = Y.shape[1]
    K = labels.size
    means = np.empty((K, m))
    covs = np.empty((K, m, m))
    for k, lab in enumerate(labels):
        Yk = Y[tau == lab]
        means[k] = Yk.mean(axis=0)
        C = Yk - means[k]
        covs[k] = C.T @ C / (Yk.shape[0] - 1)
    variances = np.diagonal(covs, axis1=1, axis2=2).copy()
    return BlockStats(labels=labels, sizes=sizes, means=means, variances=variances, covariances=covs)
