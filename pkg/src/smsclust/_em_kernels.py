"""Compiled inner loops for EM on the constrained mixture.

These duplicate the arithmetic of the vectorized density code in ``gmm`` with
fused loops; the public evaluation functions never go through this module, so
tests can compare the two paths.

Layout: data are passed feature-major (``XT`` is ``d x n``) and
responsibilities component-major (``R`` is ``K x n``) so the hot loops run
over contiguous rows of length ``n``.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

LOG_2PI = math.log(2.0 * math.pi)
# Reassociation lets reductions vectorize; NaN/Inf semantics stay intact for the finiteness checks.
_FAST = {"reassoc", "contract", "arcp"}


@njit(cache=True, fastmath=_FAST)
def _chol_inv(C, Linv):
    """Write inv(chol(C)) into ``Linv``; return (logdet, ok)."""
    d = C.shape[0]
    L = np.zeros((d, d))
    for j in range(d):
        s = C[j, j]
        for p in range(j):
            s -= L[j, p] * L[j, p]
        if not s > 0.0 or not math.isfinite(s):
            return 0.0, False
        L[j, j] = math.sqrt(s)
        for i in range(j + 1, d):
            t = C[i, j]
            for p in range(j):
                t -= L[i, p] * L[j, p]
            L[i, j] = t / L[j, j]
    logdet = 0.0
    for j in range(d):
        logdet += 2.0 * math.log(L[j, j])
    for i in range(d):
        for j in range(d):
            Linv[i, j] = 0.0
    for j in range(d):
        Linv[j, j] = 1.0 / L[j, j]
        for i in range(j + 1, d):
            t = 0.0
            for p in range(j, i):
                t -= L[i, p] * Linv[p, j]
            Linv[i, j] = t / L[i, i]
    return logdet, True


@njit(cache=True, fastmath=_FAST)
def e_step(XT, sqY, m, weights, means, covs, s2, R):
    """Fill ``R`` (K x n) with posterior probabilities; return (loglik, ok)."""
    d, n = XT.shape
    K = weights.shape[0]
    Linv = np.empty((d, d))
    diff = np.empty((d, n))
    w = np.empty(n)
    for k in range(K):
        logdet, ok = _chol_inv(covs[k], Linv)
        if not ok:
            return -np.inf, False
        c = math.log(weights[k]) - 0.5 * (d * LOG_2PI + logdet)
        if m > 0:
            c -= 0.5 * m * math.log(2.0 * math.pi * s2[k])
        for j in range(d):
            mu = means[k, j]
            for i in range(n):
                diff[j, i] = XT[j, i] - mu
        row = R[k]
        for i in range(n):
            row[i] = 0.0
        for r in range(d):
            for i in range(n):
                w[i] = 0.0
            for q in range(r + 1):
                coef = Linv[r, q]
                for i in range(n):
                    w[i] += coef * diff[q, i]
            for i in range(n):
                row[i] += w[i] * w[i]
        if m > 0:
            inv = 1.0 / s2[k]
            for i in range(n):
                row[i] = c - 0.5 * (row[i] + sqY[i] * inv)
        else:
            for i in range(n):
                row[i] = c - 0.5 * row[i]
    amax = np.empty(n)
    for i in range(n):
        amax[i] = R[0, i]
    for k in range(1, K):
        for i in range(n):
            if R[k, i] > amax[i]:
                amax[i] = R[k, i]
    tot = np.zeros(n)
    for k in range(K):
        for i in range(n):
            v = math.exp(R[k, i] - amax[i])
            R[k, i] = v
            tot[i] += v
    ll = 0.0
    for i in range(n):
        ll += amax[i] + math.log(tot[i])
    for k in range(K):
        for i in range(n):
            R[k, i] /= tot[i]
    if not math.isfinite(ll):
        return ll, False
    return ll, True


@njit(cache=True, fastmath=_FAST)
def m_step(XT, sqY, R, means, covs, s2num):
    """Weighted moments. Returns N_k; fills means, covariances (divisor N_k), sum r|y|^2."""
    d, n = XT.shape
    K = R.shape[0]
    Nk = np.zeros(K)
    diff = np.empty((d, n))
    for k in range(K):
        r = R[k]
        tot = 0.0
        sy = 0.0
        for i in range(n):
            tot += r[i]
            sy += r[i] * sqY[i]
        Nk[k] = tot
        s2num[k] = sy
        inv = 1.0 / tot if tot > 0.0 else 0.0
        for j in range(d):
            s = 0.0
            for i in range(n):
                s += r[i] * XT[j, i]
            mu = s * inv
            means[k, j] = mu
            for i in range(n):
                diff[j, i] = XT[j, i] - mu
        for a in range(d):
            for b in range(a + 1):
                s = 0.0
                for i in range(n):
                    s += r[i] * diff[a, i] * diff[b, i]
                covs[k, a, b] = s * inv
                covs[k, b, a] = s * inv
    return Nk
