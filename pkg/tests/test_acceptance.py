"""End-to-end acceptance runs.

Each test records one pass/fail line per criterion through the ``criterion``
fixture and then asserts it. The simulation-heavy runs take most of an hour
on one core; select them with ``-m acceptance``.
"""
from __future__ import annotations

import filecmp
import math
from pathlib import Path

import numpy as np
import pytest

from smsclust.cli import main
from smsclust.harness import load_config, run_obsstats, run_pipeline, sign_tests

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

pytestmark = pytest.mark.acceptance


def _pipeline(name, tmp, **overrides):
    cfg = load_config(CONFIGS / name, {"output_dir": str(tmp), "workers": 1, **overrides})
    return cfg, run_pipeline(cfg)


def _rate(flags):
    flags = list(flags)
    return sum(flags) / len(flags)


# -- 1. selection tables --------------------------------------------------------------


def test_selection_table_two_block(tmp_path, criterion):
    _, res = _pipeline("bsims_two_block.yaml", tmp_path)
    oks = []
    for n in (200, 500, 1000, 2000):
        rs = [r for r in res.records if r.n == n]
        assert len(rs) == 100
        k_rate = _rate(r.ok and r.K_hat == 2 for r in rs)
        d_rate = _rate(r.ok and r.d_hat in (2, 3, 4) for r in rs)
        oks.append(criterion(f"1 two-block n={n}", k_rate >= 0.95 and d_rate >= 0.95,
                             f"K=2 rate {k_rate:.2f} (>=0.95), d in 2..4 rate {d_rate:.2f} (>=0.95)"))
    assert all(oks)


def test_selection_table_three_block(tmp_path, criterion):
    _, res = _pipeline("bsims_three_block.yaml", tmp_path)
    assert len(res.records) == 400
    per_n = {n: _rate(r.ok and r.K_hat == 3 for r in res.records if r.n == n)
             for n in (200, 500, 1000, 2000)}
    rate = _rate(r.ok and r.K_hat == 3 for r in res.records)
    detail = ", ".join(f"n={n}: {v:.2f}" for n, v in per_n.items())
    assert criterion("1 three-block aggregate", rate >= 0.85, f"K=3 rate {rate:.3f} (>=0.85); {detail}")


# -- 2. redundant-block statistics ----------------------------------------------------


@pytest.fixture(scope="module")
def obsstats(tmp_path_factory):
    cfg = load_config(CONFIGS / "obsstats.yaml",
                      {"output_dir": str(tmp_path_factory.mktemp("obs")), "workers": 1})
    return run_obsstats(cfg)


def test_redundant_means(obsstats, criterion):
    meds = [s["median_abs_mean"] for s in obsstats.summary if s["n"] == 2000]
    assert len(meds) == 20
    worst = max(meds)
    assert criterion("2a redundant means n=2000", worst <= 1e-3,
                     f"largest per-replicate median |mean| {worst:.2e} (<=1e-3), "
                     f"median over replicates {np.median(meds):.2e}")


def test_redundant_offdiag(obsstats, criterion):
    off = {n: np.median([s["mean_abs_offdiag"] for s in obsstats.summary if s["n"] == n])
           for n in (200, 2000)}
    assert criterion("2c off-diagonal shrinkage", off[2000] < 0.5 * off[200],
                     f"median mean |offdiag| n=2000 {off[2000]:.3e} vs n=200 {off[200]:.3e}")


def test_redundant_variances(tmp_path, criterion):
    # n=8000 stands in for n=16000: spread allowance grows by sqrt(2)
    limit = 0.25 * math.sqrt(2)
    cfg = load_config(CONFIGS / "obsstats.yaml", {"n": [8000], "replicates": 3, "workers": 1,
                                                  "output_dir": str(tmp_path)})
    res = run_obsstats(cfg)
    dims = np.array([row[:6] for row in res.dims], dtype=float)
    ok, lines = True, []
    for rep in range(3):
        stats = {}
        for block in (1, 2):
            v = dims[(dims[:, 1] == rep) & (dims[:, 2] == block), 5]
            q1, med, q3 = np.percentile(v, [25, 50, 75])
            stats[block] = (med, q3 - q1)
        rel = max(iqr / med for med, iqr in stats.values())
        sep = abs(stats[1][0] - stats[2][0]) / max(iqr for _, iqr in stats.values())
        ok &= rel <= limit and sep > 3.0
        lines.append(f"rep {rep}: rel IQR {rel:.3f}, separation {sep:.1f}x")
    assert criterion("2b redundant variances n=8000", ok,
                     f"rel IQR <= {limit:.3f} and separation > 3x IQR; " + "; ".join(lines))


# -- 3. ARI comparison against the sequential baselines -------------------------------


def test_psweep_sign_tests(tmp_path, criterion):
    values = (0.095, 0.115)
    cfg, res = _pipeline("psweep.yaml", tmp_path,
                         methods=["sms-reduced", "bic-zg-1", "bic-zg-2", "bic-zg-3"],
                         sweep={"entry": [0, 1], "values": list(values)})
    rows = res.records
    tests = {(t["param"], t["method_b"]): t for t in sign_tests(rows, "block")}
    want = {0.095: ("bic-zg-1", "bic-zg-3"), 0.115: ("bic-zg-2", "bic-zg-3")}
    ok = True
    for p, rivals in want.items():
        for b in rivals:
            t = tests[(p, b)]
            good = t["pvalue"] < 0.05 and t["mean_diff"] > 0
            ok &= criterion(f"3 p={p} sms-reduced vs {b}", good,
                            f"wins {t['wins']}, losses {t['losses']}, ties {t['ties']}, "
                            f"p={t['pvalue']:.2e} (<0.05), mean ARI diff {t['mean_diff']:+.4f} (>0)")
    for p in values:
        means = {m: np.mean([r.ari["block"] for r in rows if r.param == p and r.method == m and r.ok])
                 for m in cfg.methods}
        print(f"    p={p} mean ARI: " + ", ".join(f"{m} {v:.3f}" for m, v in means.items()))
    assert ok


# -- 4. consistency on direct mixture draws -------------------------------------------


def test_consistency(tmp_path, criterion):
    _, res = _pipeline("consistency.yaml", tmp_path)
    rates = {row["n"]: row["correct_rate"] for row in res.summary}
    seq = [rates[n] for n in (500, 2000, 8000)]
    ok = all(a <= b for a, b in zip(seq, seq[1:])) and seq[-1] >= 0.9
    assert criterion("4 consistency", ok,
                     "correct (d,K) rate " + ", ".join(f"n={n}: {r:.2f}" for n, r in rates.items())
                     + " (nondecreasing, >=0.9 at n=8000)")


# -- 5. property suites ----------------------------------------------------------------


def test_property_suites(criterion):
    from oracles import (ari_pairs, expected_complete_loglik, unconstrained_em,
                         zg_first_elbow_bruteforce)
    from scipy.optimize import minimize
    from smsclust.baselines import zg_elbow
    from smsclust.gmm import EmOptions, em_fit, sample_model
    from smsclust.graphgen import TWO_BLOCK, sample_sbm
    from smsclust.metrics import ari
    from smsclust.spectral import eig_sym, extended_ase
    from test_gmm import random_params

    results = []

    rng = np.random.default_rng(2024)
    worst = 0.0
    for trial in range(200):
        d = int(rng.integers(1, 4))
        D = d + int(rng.integers(0, 3))
        K = int(rng.integers(1, 5))
        _, Z = sample_model(random_params(rng, d, K, D), int(rng.integers(60, 250)), seed=trial)
        fit = em_fit(Z, int(rng.integers(1, D + 1)), K, EmOptions(restarts=2), seed=trial)
        if fit.ok:
            worst = min(worst, np.diff(fit.history).min(initial=0.0))
    results.append(criterion("5 EM monotonicity (200 fits)", worst >= -1e-9,
                             f"largest log-likelihood drop {abs(worst):.1e}"))

    gap = 0.0
    for seed in range(4):
        r = np.random.default_rng(seed)
        Z = r.normal(0, 1.5, size=(20, 2))
        Z[:10, :1] += 2.0
        R = r.dirichlet(np.ones(2), size=20)
        p = em_fit(Z, 1, 2, EmOptions(max_iter=1, ridge=0.0), init_resp=R).params
        X, Y = Z[:, :1], Z[:, 1:]
        q = expected_complete_loglik(X, Y, R, p.weights, p.means, p.covariances, p.redundant_var)

        def neg_q(t):
            w = np.exp([t[0], 0.0]) / np.exp([t[0], 0.0]).sum()
            covs = np.exp(2 * t[3:5]).reshape(2, 1, 1)
            return -expected_complete_loglik(X, Y, R, w, t[1:3].reshape(2, 1), covs, np.exp(t[5:7]))

        opt = minimize(neg_q, np.zeros(7), method="BFGS", options={"gtol": 1e-10, "maxiter": 10_000})
        gap = max(gap, abs(q + opt.fun))
    results.append(criterion("5 M-step vs numerical optimizer", gap <= 1e-6, f"max |dQ| {gap:.1e}"))

    rel = 0.0
    for seed in range(3):
        r = np.random.default_rng(seed)
        _, Z = sample_model(random_params(r, 3, 3, 3), 400, seed=seed)
        R0 = r.dirichlet(np.ones(3), size=400)
        ll = unconstrained_em(Z, R0)[0]
        rel = max(rel, abs(em_fit(Z, 3, 3, init_resp=R0).loglik - ll) / abs(ll))
    results.append(criterion("5 d=D fit vs unconstrained EM", rel <= 1e-8, f"max rel diff {rel:.1e}"))

    r = np.random.default_rng(0)
    bad = 0
    for _ in range(1000):
        n = int(r.integers(2, 11))
        a = r.integers(1, int(r.integers(1, 5)) + 1, n)
        b = r.integers(1, int(r.integers(1, 5)) + 1, n)
        bad += abs(ari(a, b) - ari_pairs(a, b)) > 1e-12
    results.append(criterion("5 ARI vs pair enumeration (1000)", bad == 0, f"{bad} mismatches"))

    r = np.random.default_rng(1)
    bad = 0
    for _ in range(1000):
        v = np.sort(r.standard_normal(int(r.integers(2, 51))) * r.uniform(0.1, 10))[::-1]
        bad += zg_elbow(v).elbows[0] != zg_first_elbow_bruteforce(v)
    results.append(criterion("5 elbow vs brute force (1000)", bad == 0, f"{bad} mismatches"))

    _, A = sample_sbm(300, TWO_BLOCK, seed=3)
    emb = extended_ase(A, 10)
    G = emb.Z.T @ emb.Z
    off = np.abs(G - np.diag(np.diag(G))).max() / emb.eigenvalues[0]
    dec = eig_sym(A, 10)
    resid = np.linalg.norm(A @ dec.eigenvectors - dec.eigenvectors * dec.eigenvalues) / np.linalg.norm(A)
    results.append(criterion("5 embedding identities", off <= 1e-8 and resid <= 1e-8,
                             f"Gram off-diagonal {off:.1e}, eigen residual {resid:.1e}"))
    assert all(results)


# -- 6. determinism across worker counts ----------------------------------------------


def test_cli_determinism(tmp_path, criterion, monkeypatch):
    obs = tmp_path / "obs.yaml"
    obs.write_text("model: {type: sbm, preset: three-block}\nn: [120, 240]\nD: 8\nreplicates: 3\n"
                   "scale_by_n: true\nseed: 11\n")
    runs = [("pipeline", CONFIGS / "smoke.yaml"), ("obsstats", obs),
            ("pipeline", CONFIGS / "psweep.yaml")]
    mismatched = []
    for i, (cmd, cfg) in enumerate(runs):
        extra = ["--replicates", "2", "--n", "150"] if cfg.name == "psweep.yaml" else []
        for w in (1, 3):
            assert main([cmd, str(cfg), "--out", str(tmp_path / f"{i}-{w}"), "--workers", str(w)]
                        + extra) in (0, 2)
        a, b = tmp_path / f"{i}-1", tmp_path / f"{i}-3"
        files = sorted(p.name for p in a.iterdir() if p.name != "timing.json")
        mismatched += [f"{cmd}:{f}" for f in files if not filecmp.cmp(a / f, b / f, shallow=False)]
    for w in (1, 3):
        main(["generate", str(CONFIGS / "bsims_three_block.yaml"), "--out", str(tmp_path / f"g{w}")])
    mismatched += [f"generate:{f}" for f in ("graph.edges", "truth.csv")
                   if not filecmp.cmp(tmp_path / "g1" / f, tmp_path / "g3" / f, shallow=False)]
    assert criterion("6 determinism across workers", not mismatched,
                     "byte-identical outputs for workers 1 and 3" if not mismatched
                     else "differs: " + ", ".join(mismatched))
