"""Monte Carlo orchestration: experiment configs, replicated selection runs,
block-statistics runs and their CSV/JSON outputs.

Every random quantity is drawn from a seed derived from the master seed and
the task's coordinates (setting, replicate, purpose), so outputs do not
depend on the number of worker processes or on scheduling order. Workers
return plain records; the orchestrator sorts and writes them.
"""
from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from . import io
from .baselines import seq_bic_zg_embedded
from .errors import ParameterError
from .gmm import ConstrainedGmmParams, EmOptions, sample_model
from .graphgen import THREE_BLOCK, TWO_BLOCK, SbmParams, sample_sbm
from .metrics import ari, selection_table, sign_test
from .seeding import derive_seed
from .selection import (SelectionOptions, fit_grid, sms_embedded, sms_reduced_embedded,
                        sms_two_step_embedded)
from .spectral import ExtendedEmbedding, block_stats, extended_ase

log = logging.getLogger(__name__)

OUTPUT_ENV = "SMSCLUST_OUTPUT_DIR"
METHOD_NAMES = ("sms", "sms-reduced", "two-step", "bic-zg-1", "bic-zg-2", "bic-zg-3")
PRESETS = {"two-block": TWO_BLOCK, "three-block": THREE_BLOCK}


class ConfigError(ParameterError):
    """Invalid or inconsistent experiment configuration."""


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_ENV, "results")


# -- configuration ---------------------------------------------------------------------


@dataclass(frozen=True)
class Sweep:
    """Vary ``B[i][j]`` (and ``B[j][i]``) over ``values``; indices are 0-based."""

    entry: tuple[int, int]
    values: tuple[float, ...]


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    ``model`` is a mapping with ``type`` in ``{"sbm", "edgelist", "gmm"}``:

    * ``sbm``: ``B`` and ``pi``, or ``preset`` (``two-block`` / ``three-block``);
    * ``edgelist``: ``path``, optional ``labels`` CSV and ``largest_component``;
    * ``gmm``: ``weights``, ``means``, ``covariances``, ``redundant_var``; rows
      are drawn directly from the constrained mixture instead of a graph.
    """

    model: dict
    n: tuple[int, ...] = (500,)
    D: int = 6
    K_max: int = 6
    methods: tuple[str, ...] = ("sms",)
    replicates: int = 1
    seed: int = 0
    em: EmOptions = field(default_factory=EmOptions)
    output_dir: str = ""
    workers: int = 1
    sweep: Sweep | None = None
    name: str = "experiment"
    # obsstats only
    d: int | None = None
    scale_by_n: bool = False

    def __post_init__(self):
        n = self.n if isinstance(self.n, (list, tuple)) else (self.n,)
        object.__setattr__(self, "n", tuple(int(v) for v in n))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.output_dir:
            object.__setattr__(self, "output_dir", default_output_dir())
        kind = self.model.get("type")
        if kind not in ("sbm", "edgelist", "gmm"):
            raise ConfigError(f"model.type must be sbm, edgelist or gmm, got {kind!r}")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.D < 1 or self.K_max < 1:
            raise ConfigError("D and K_max must be at least 1")
        bad = [m for m in self.methods if m not in METHOD_NAMES]
        if bad:
            raise ConfigError(f"unknown methods {bad}; choose from {list(METHOD_NAMES)}")
        if kind != "edgelist":
            if not self.n or min(self.n) < 1:
                raise ConfigError("n must be a positive count or list of counts")
            if self.D > min(self.n):
                raise ConfigError(f"D={self.D} exceeds the smallest n={min(self.n)}")
        if kind == "edgelist":
            for key in ("path", "labels"):
                p = self.model.get(key)
                if p is not None and not Path(p).is_file():
                    raise ConfigError(f"model.{key}: file not found: {p}")
            if "path" not in self.model:
                raise ConfigError("edgelist model needs 'path'")
        if self.sweep is not None and kind != "sbm":
            raise ConfigError("sweep applies to sbm models only")
        if kind == "gmm" and self.gmm_params().D != self.D:
            raise ConfigError("gmm model dimension must equal D")
        if kind == "sbm":
            self.sbm_params(None)  # validate early

    # model helpers

    def sbm_params(self, value: float | None) -> SbmParams:
        m = self.model
        try:
            if "preset" in m:
                if m["preset"] not in PRESETS:
                    raise ConfigError(f"unknown preset {m['preset']!r}")
                base = PRESETS[m["preset"]]
                B, pi = base.B.copy(), base.pi
            else:
                B, pi = np.array(m["B"], dtype=float), m["pi"]
            if self.sweep is not None:
                i, j = self.sweep.entry
                v = self.sweep.values[0] if value is None else value
                B[i, j] = B[j, i] = v
            return SbmParams(B=B, pi=pi)
        except ParameterError as exc:
            raise ConfigError(f"model: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ConfigError(f"model: malformed sbm parameters ({exc})") from exc

    def gmm_params(self) -> ConstrainedGmmParams:
        m = self.model
        try:
            return ConstrainedGmmParams(m["weights"], m["means"], m["covariances"],
                                        m.get("redundant_var", []), self.D)
        except (ParameterError, KeyError, ValueError) as exc:
            raise ConfigError(f"model: {exc}") from exc

    def truth_dims(self, value=None) -> tuple[int, int] | None:
        """True ``(d0, K0)`` for simulated models; ``None`` for real graphs."""
        kind = self.model["type"]
        if kind == "sbm":
            p = self.sbm_params(value)
            return p.rank, p.n_blocks
        if kind == "gmm":
            p = self.gmm_params()
            return p.d, p.K
        return None

    def settings(self) -> list[tuple[int, float | None]]:
        """``(n, sweep value)`` pairs in output order."""
        if self.model["type"] == "edgelist":
            return [(0, None)]
        values = self.sweep.values if self.sweep is not None else (None,)
        return [(n, v) for n in self.n for v in values]


def _em_from_mapping(data: dict | None) -> EmOptions:
    data = dict(data or {})
    names = {f.name for f in fields(EmOptions)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown em options: {sorted(unknown)}")
    return EmOptions(**data)


def config_from_mapping(data: dict, overrides: dict | None = None) -> ExperimentConfig:
    data = dict(data)
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "model" not in data:
        raise ConfigError("config needs a 'model' section")
    data["em"] = data["em"] if isinstance(data.get("em"), EmOptions) else _em_from_mapping(data.get("em"))
    sweep = data.get("sweep")
    if sweep is not None and not isinstance(sweep, Sweep):
        try:
            data["sweep"] = Sweep(entry=tuple(int(i) for i in sweep["entry"]),
                                  values=tuple(float(v) for v in sweep["values"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sweep: {exc}") from exc
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    model = data.get("model")
    if isinstance(model, dict) and model.get("type") == "edgelist":
        # Relative data paths are resolved against the config file's directory.
        for key in ("path", "labels"):
            if key in model and not Path(model[key]).is_absolute():
                model[key] = str(path.parent / model[key])
    return config_from_mapping(data, overrides)


def config_to_mapping(cfg: ExperimentConfig) -> dict:
    out = asdict(cfg)
    out["n"] = list(cfg.n)
    out["methods"] = list(cfg.methods)
    if cfg.sweep is not None:
        out["sweep"] = {"entry": list(cfg.sweep.entry), "values": list(cfg.sweep.values)}
    return out


# -- data generation -------------------------------------------------------------------


def _value_key(value) -> str:
    return "none" if value is None else format(float(value), ".17g")


def graph_seed(cfg: ExperimentConfig, n: int, value, rep: int) -> int:
    return derive_seed(cfg.seed, "graph", n, _value_key(value), rep)


def fit_seed(cfg: ExperimentConfig, n: int, value, rep: int) -> int:
    return derive_seed(cfg.seed, "fit", n, _value_key(value), rep)


@dataclass
class Sample:
    """One replicate's observed data and truths."""

    A: np.ndarray | None            # adjacency (None for direct mixture draws)
    Z: np.ndarray | None            # embedding when drawn directly from the mixture
    truths: dict                    # name -> label vector
    n: int


def load_graph(model: dict):
    """Read an edge-list model: returns ``(A, truths, kept_vertices)``."""
    el = io.read_edge_list(model["path"])
    n, edges = el.n, el.edges
    keep = np.arange(n)
    if model.get("largest_component"):
        keep, edges = io.largest_component(n, edges)
        n = keep.size
    elif n and np.unique(io.components(n, edges)).size > 1:
        log.warning("%s: graph is disconnected; consider largest_component", model["path"])
    truths = {}
    if model.get("labels"):
        cols = io.read_labels(model["labels"])
        for name, col in cols.items():
            if col.size != el.n:
                raise ConfigError(f"{model['labels']}: {col.size} labels for {el.n} vertices")
            truths[name] = col[keep]
    return io.edges_to_adjacency(n, edges), truths, keep


def draw_sample(cfg: ExperimentConfig, n: int, value, rep: int) -> Sample:
    kind = cfg.model["type"]
    if kind == "sbm":
        tau, A = sample_sbm(n, cfg.sbm_params(value), graph_seed(cfg, n, value, rep))
        return Sample(A=A, Z=None, truths={"block": tau}, n=n)
    if kind == "gmm":
        labels, Z = sample_model(cfg.gmm_params(), n, graph_seed(cfg, n, value, rep))
        return Sample(A=None, Z=Z, truths={"component": labels}, n=n)
    A, truths, _ = load_graph(cfg.model)
    return Sample(A=A, Z=None, truths=truths, n=A.shape[0])


def _embedding(sample: Sample, D: int) -> ExtendedEmbedding:
    if sample.Z is not None:
        # Direct mixture draws are already "embedded"; the spectrum is the column energy.
        return ExtendedEmbedding(Z=sample.Z, eigenvalues=(sample.Z ** 2).sum(axis=0))
    return extended_ase(sample.A, D)


# -- pipeline --------------------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    n: int
    param: float | None
    replicate: int
    method: str
    status: str          # "ok" or "error: <message>"
    d_hat: int | None
    K_hat: int | None
    ari: dict            # truth name -> ARI
    seed: int
    runtime_ms: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _run_methods(cfg: ExperimentConfig, emb: ExtendedEmbedding, seed: int):
    """Yield ``(method, SelectionResult | Exception, runtime_ms)`` in ``cfg.methods`` order."""
    opts = SelectionOptions(em=cfg.em)
    grid = None
    grid_ms = 0.0
    for method in cfg.methods:
        t0 = time.perf_counter()
        try:
            if method in ("sms", "sms-reduced"):
                if grid is None:
                    tg = time.perf_counter()
                    grid = fit_grid(emb.Z, cfg.K_max, opts, seed)
                    grid_ms = (time.perf_counter() - tg) * 1e3
                    t0 = time.perf_counter()
                fn = sms_embedded if method == "sms" else sms_reduced_embedded
                res = fn(emb.Z, cfg.K_max, opts, seed, grid=grid)
                yield method, res, grid_ms + (time.perf_counter() - t0) * 1e3
            elif method == "two-step":
                res = sms_two_step_embedded(emb.Z, cfg.K_max, opts, seed)
                yield method, res, (time.perf_counter() - t0) * 1e3
            else:
                ell = int(method.rsplit("-", 1)[1])
                res = seq_bic_zg_embedded(emb, ell, cfg.K_max, opts, seed)
                yield method, res, (time.perf_counter() - t0) * 1e3
        except Exception as exc:  # recorded per (replicate, method); the run goes on
            yield method, exc, (time.perf_counter() - t0) * 1e3


def run_replicate(cfg: ExperimentConfig, n: int, value, rep: int) -> list[RunRecord]:
    """All methods on one replicate. Never raises: failures become records."""
    seed = fit_seed(cfg, n, value, rep)
    try:
        sample = draw_sample(cfg, n, value, rep)
        emb = _embedding(sample, cfg.D)
    except Exception as exc:
        msg = f"error: {type(exc).__name__}: {exc}"
        return [RunRecord(n, value, rep, m, msg, None, None, {}, seed) for m in cfg.methods]
    records = []
    for method, res, ms in _run_methods(cfg, emb, seed):
        if isinstance(res, Exception):
            records.append(RunRecord(sample.n if n == 0 else n, value, rep, method,
                                     f"error: {type(res).__name__}: {res}", None, None, {}, seed, ms))
            continue
        scores = {name: ari(truth, res.labels) for name, truth in sample.truths.items()}
        records.append(RunRecord(sample.n if n == 0 else n, value, rep, method, "ok",
                                 res.d_hat, res.K_hat, scores, seed, ms))
    return records


def _replicate_task(args):
    return run_replicate(*args)


def _map(fn, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


@dataclass
class PipelineResult:
    records: list
    summary: list
    exit_code: int
    output_dir: Path


def run_pipeline(cfg: ExperimentConfig, write: bool = True) -> PipelineResult:
    tasks = [(cfg, n, v, rep) for n, v in cfg.settings() for rep in range(cfg.replicates)]
    chunks = _map(_replicate_task, tasks, cfg.workers)
    records = [r for chunk in chunks for r in chunk]
    order = {m: i for i, m in enumerate(cfg.methods)}
    records.sort(key=lambda r: (r.n, -math.inf if r.param is None else r.param, r.replicate,
                                order[r.method]))
    summary = summarize(cfg, records)
    exit_code = 0 if all(r.ok for r in records) else 2
    out = Path(cfg.output_dir)
    if write:
        write_pipeline_outputs(cfg, records, summary, out)
    return PipelineResult(records, summary, exit_code, out)


def truth_names(records) -> list[str]:
    names = []
    for r in records:
        for k in r.ari:
            if k not in names:
                names.append(k)
    return names


def summarize(cfg: ExperimentConfig, records) -> list[dict]:
    """Per (setting, method): ARI mean/median per truth and selection rates."""
    rows = []
    names = truth_names(records)
    for n, value in _settings_of(records):
        truth = cfg.truth_dims(value)
        for method in cfg.methods:
            rs = [r for r in records if r.n == n and r.param == value and r.method == method]
            ok = [r for r in rs if r.ok]
            row = {"n": n, "param": value, "method": method, "replicates": len(rs),
                   "failures": len(rs) - len(ok)}
            for name in names:
                vals = np.array([r.ari[name] for r in ok if name in r.ari])
                row[f"mean_ari_{name}"] = float(np.mean(vals)) if vals.size else math.nan
                row[f"median_ari_{name}"] = float(np.median(vals)) if vals.size else math.nan
            if ok and truth is not None:
                tab = selection_table(ok, truth)
                row.update(correct_d_rate=tab.correct_d_rate, correct_K_rate=tab.correct_K_rate,
                           correct_rate=tab.correct_rate)
            else:
                row.update(correct_d_rate=math.nan, correct_K_rate=math.nan, correct_rate=math.nan)
            rows.append(row)
    return rows


def _settings_of(records):
    seen = []
    for r in records:
        key = (r.n, r.param)
        if key not in seen:
            seen.append(key)
    return seen


def paired_differences(records, truth: str):
    """``(n, param, replicate, method_a, method_b, ari_a - ari_b)`` for each
    simultaneous method against each sequential baseline present."""
    simultaneous = [m for m in ("sms", "sms-reduced", "two-step")]
    out = []
    by_key = {}
    for r in records:
        if r.ok and truth in r.ari:
            by_key[(r.n, r.param, r.replicate, r.method)] = r.ari[truth]
    methods = []
    for r in records:
        if r.method not in methods:
            methods.append(r.method)
    for n, value in _settings_of(records):
        reps = sorted({r.replicate for r in records if r.n == n and r.param == value})
        for a in (m for m in methods if m in simultaneous):
            for b in (m for m in methods if m.startswith("bic-zg")):
                for rep in reps:
                    ka, kb = (n, value, rep, a), (n, value, rep, b)
                    if ka in by_key and kb in by_key:
                        out.append((n, value, rep, a, b, by_key[ka] - by_key[kb]))
    return out


def sign_tests(records, truth: str) -> list[dict]:
    diffs = paired_differences(records, truth)
    groups = {}
    for n, value, _, a, b, diff in diffs:
        groups.setdefault((n, value, a, b), []).append(diff)
    rows = []
    for (n, value, a, b), ds in groups.items():
        st = sign_test(ds)
        rows.append({"n": n, "param": value, "method_a": a, "method_b": b, "truth": truth,
                     "wins": st.wins, "losses": st.losses, "ties": st.ties, "pvalue": st.pvalue,
                     "mean_diff": float(np.mean(ds))})
    return rows


def _param_cell(value):
    return "" if value is None else value


def write_pipeline_outputs(cfg: ExperimentConfig, records, summary, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    names = truth_names(records)
    header = ["n", "param", "replicate", "method", "status", "d_hat", "K_hat"] + \
             [f"ari_{t}" for t in names] + ["seed"]
    rows = []
    for r in records:
        rows.append([r.n, _param_cell(r.param), r.replicate, r.method, r.status,
                     "" if r.d_hat is None else r.d_hat, "" if r.K_hat is None else r.K_hat]
                    + [r.ari.get(t, "") for t in names] + [r.seed])
    io.write_csv(out / "records.csv", header, rows)

    cols = list(summary[0].keys()) if summary else ["n", "param", "method"]
    io.write_csv(out / "summary.csv", cols,
                 [[_param_cell(row[c]) if c == "param" else row[c] for c in cols] for row in summary])

    sel_rows = []
    for n, value in _settings_of(records):
        for method in cfg.methods:
            ok = [r for r in records if r.n == n and r.param == value and r.method == method and r.ok]
            if ok:
                tab = selection_table(ok, cfg.truth_dims(value) or (0, 0))
                sel_rows += [[n, _param_cell(value), method, d, K, c] for d, K, c in tab.rows()]
    io.write_csv(out / "selection.csv", ["n", "param", "method", "d_hat", "K_hat", "count"], sel_rows)

    diff_rows, test_rows = [], []
    for t in names:
        diff_rows += [[n, _param_cell(v), rep, a, b, t, dlt]
                      for n, v, rep, a, b, dlt in paired_differences(records, t)]
        test_rows += sign_tests(records, t)
    io.write_csv(out / "paired.csv", ["n", "param", "replicate", "method_a", "method_b", "truth",
                                       "ari_diff"], diff_rows)
    tcols = ["n", "param", "method_a", "method_b", "truth", "wins", "losses", "ties", "pvalue",
             "mean_diff"]
    io.write_csv(out / "signtests.csv", tcols,
                 [[_param_cell(row[c]) if c == "param" else row[c] for c in tcols] for row in test_rows])

    doc = {"name": cfg.name, "config": config_to_mapping(replace(cfg, output_dir=".", workers=1)),
           "records": len(records), "failures": sum(not r.ok for r in records),
           "summary": summary, "sign_tests": test_rows}
    (out / "summary.json").write_text(io.dumps_json(doc) + "\n")
    # Wall-clock times differ run to run; they live apart from the reproducible outputs.
    timing = [{"n": r.n, "param": r.param, "replicate": r.replicate, "method": r.method,
               "runtime_ms": round(r.runtime_ms, 3)} for r in records]
    (out / "timing.json").write_text(json.dumps(timing, indent=1) + "\n")


# -- observed block statistics ---------------------------------------------------------


@dataclass
class ObsStats:
    dims: list       # (n, replicate, block, dim, mean, variance[, variance*n])
    offdiag: list    # (n, replicate, block, mean_abs_offdiag, max_abs_offdiag)
    summary: list    # per (n, replicate) dicts
    empty: bool


def _obs_task(args):
    cfg, n, rep, d = args
    sample = draw_sample(cfg, n, None, rep)
    emb = _embedding(sample, cfg.D)
    _, Y = emb.split(d)
    tau = sample.truths["block"]
    st = block_stats(Y, tau)
    dims, off = [], []
    for k, lab in enumerate(st.labels.tolist()):
        for j in range(Y.shape[1]):
            row = [n, rep, lab, d + j + 1, st.means[k, j], st.variances[k, j]]
            if cfg.scale_by_n:
                row.append(st.variances[k, j] * n)
            dims.append(row)
        o = np.abs(st.offdiag(k))
        if o.size:
            off.append([n, rep, lab, float(o.mean()), float(o.max())])
    abs_means = np.abs(st.means)
    summ = {"n": n, "replicate": rep,
            "median_abs_mean": float(np.median(abs_means)),
            "max_abs_mean": float(abs_means.max()),
            "mean_abs_offdiag": float(np.mean([r[3] for r in off])) if off else math.nan}
    return dims, off, summ


def run_obsstats(cfg: ExperimentConfig, write: bool = True) -> ObsStats:
    """Within-block means, variances and off-diagonal covariances of the
    redundant columns, per replicate and per ``n``."""
    if cfg.model["type"] != "sbm":
        raise ConfigError("obsstats needs an sbm model with known memberships")
    d = cfg.d if cfg.d is not None else cfg.sbm_params(None).rank
    if not 0 <= d <= cfg.D:
        raise ConfigError(f"d must lie in 0..{cfg.D}")
    empty = d == cfg.D
    dims, off, summ = [], [], []
    if not empty:
        tasks = [(cfg, n, rep, d) for n in cfg.n for rep in range(cfg.replicates)]
        for a, b, c in _map(_obs_task, tasks, cfg.workers):
            dims += a
            off += b
            summ.append(c)
    res = ObsStats(dims, off, summ, empty)
    if write:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        dh = ["n", "replicate", "block", "dim", "mean", "variance"] + (["variance_x_n"] if cfg.scale_by_n else [])
        io.write_csv(out / "obsstats_dims.csv", dh, dims)
        io.write_csv(out / "obsstats_offdiag.csv", ["n", "replicate", "block", "mean_abs_offdiag",
                                                    "max_abs_offdiag"], off)
        sh = ["n", "replicate", "median_abs_mean", "max_abs_mean", "mean_abs_offdiag"]
        io.write_csv(out / "obsstats_summary.csv", sh, [[s[c] for c in sh] for s in summ])
        doc = {"name": cfg.name, "d": d, "D": cfg.D, "empty": empty,
               "redundant_dims": cfg.D - d, "replicates": cfg.replicates, "n": list(cfg.n)}
        (out / "obsstats.json").write_text(io.dumps_json(doc) + "\n")
    return res


# -- single-graph generation -----------------------------------------------------------


def generate(cfg: ExperimentConfig, outdir, n: int | None = None, value=None, rep: int = 0) -> dict:
    """Write one replicate's data: ``graph.edges`` + ``truth.csv`` (or
    ``embedding.csv`` + ``truth.csv`` for mixture draws). The seed is the one
    the pipeline uses for the same ``(n, value, rep)``."""
    if cfg.model["type"] == "edgelist":
        raise ConfigError("generate needs a generative (sbm or gmm) model")
    n = cfg.n[0] if n is None else n
    if value is None and cfg.sweep is not None:
        value = cfg.sweep.values[0]
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    sample = draw_sample(cfg, n, value, rep)
    (name, labels), = sample.truths.items()
    paths = {"truth": outdir / "truth.csv"}
    io.write_labels(paths["truth"], labels, header=("vertex", name))
    if sample.A is not None:
        paths["graph"] = outdir / "graph.edges"
        io.write_edge_list(paths["graph"], sample.A)
    else:
        paths["embedding"] = outdir / "embedding.csv"
        io.write_embedding(paths["embedding"], sample.Z)
    return paths
