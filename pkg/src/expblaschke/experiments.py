"""Configured sweeps that check the characterisations numerically.

A config is a nested mapping (normally read from YAML)::

    experiment: thm1          # thm1 thm2 thm3 frostman lemma1 claim observation protas
    seed: 7
    generator: {kind: geometric, c: 1.0, delta: 0.5, angles: random}
    truncations: [10, 20, 30, 40]
    grid: {base_count: 16384, refine_factor: 64}
    lambda_grid: {points_per_decade: 200}
    thresholds: {max_ratio: 1.5}
    params: {}
    output: out/thm1

:func:`load_config` validates every field before anything is computed and
:func:`run` writes per-truncation CSV files, ``summary.json`` and
``metadata.json`` (the only file carrying a timestamp).
"""

from __future__ import annotations

import copy
import datetime as _dt
import hashlib
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml

from . import blaschke, boundary, logmean, modelspace, zeroseq
from .blaschke import BlaschkeProduct
from .modelspace import ModelFunction

log = logging.getLogger(__name__)

EXPERIMENTS = ("thm1", "thm2", "thm3", "frostman", "lemma1", "claim", "observation", "protas")

DEFAULT_THRESHOLDS = {
    "thm1": {"max_ratio": 1.5, "min_growth": 3.0},
    "thm2": {"max_increment": 4.0, "growth_factor": 2.0},
    "thm3": {"max_ratio": 3.0, "scale_tol": 1e-10},
    "frostman": {"max_factor": 4.0, "identity_tol": 1e-14},
    "lemma1": {},
    "claim": {"max_ratio": 4.0},
    "observation": {"control_max_ratio": 2.0},
    "protas": {"contraction": 0.75, "min_growth": 3.0},
}

DEFAULT_PARAMS = {
    "thm1": {"p": 1.0},
    "thm2": {"n_max": None, "compare": [10, 16]},
    "thm3": {"n_functions": 50, "r": 1.0},
    "frostman": {"shifts": ["0", "0.4j", "-0.7", "0.5+0.3j"]},
    "lemma1": {"mu": 16.0},
    "claim": {},
    "observation": {"kinds": ["divergent", "control"]},
    "protas": {"p": 0.9},
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    generator: dict
    truncations: tuple
    grid: dict
    lambda_grid: dict
    thresholds: dict
    params: dict
    output: str

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "generator": self.generator,
            "truncations": list(self.truncations),
            "grid": self.grid,
            "lambda_grid": self.lambda_grid,
            "thresholds": self.thresholds,
            "params": self.params,
            "output": self.output,
        }

    @property
    def hash(self) -> str:
        """SHA-256 prefix of the canonical config, output directory excluded."""
        d = self.as_dict()
        d.pop("output")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _num(d: dict, key: str, field: str, cast=float, default=None, check: Callable = None, why=""):
    val = d.get(key, default)
    if val is None:
        raise ConfigError(field, "required")
    try:
        val = cast(val)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected {cast.__name__}, got {val!r}") from None
    if check is not None and not check(val):
        raise ConfigError(field, f"{val!r} {why}")
    return val


def parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(str(value).replace(" ", ""))


def validate_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")
    known = {"experiment", "seed", "generator", "truncations", "grid", "lambda_grid",
             "thresholds", "params", "output"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(sorted(extra)[0], "unknown key")
    exp = raw.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError("experiment", f"must be one of {', '.join(EXPERIMENTS)}, got {exp!r}")
    seed = _num(raw, "seed", "seed", int, default=0, check=lambda s: s >= 0, why="must be >= 0")

    gen_raw = raw.get("generator", {}) or {}
    if not isinstance(gen_raw, dict):
        raise ConfigError("generator", "must be a mapping")
    kind = gen_raw.get("kind", "geometric")
    angles = gen_raw.get("angles", "random")
    if isinstance(angles, str):
        if angles not in ("random", "uniform-random", "equispaced"):
            raise ConfigError("generator.angles", f"unknown rule {angles!r}")
    elif not isinstance(angles, list):
        raise ConfigError("generator.angles", "must be a rule name or a list of angles")
    if kind == "geometric":
        c = _num(gen_raw, "c", "generator.c", default=1.0, check=lambda v: v > 0, why="must be > 0")
        delta = _num(gen_raw, "delta", "generator.delta", default=0.5,
                     check=lambda v: 0 < v < 1, why="must lie in (0, 1)")
        if c * delta >= 1:
            raise ConfigError("generator.c", f"c*delta = {c * delta} >= 1")
        generator = {"kind": kind, "c": c, "delta": delta, "angles": angles}
    elif kind == "power":
        q = _num(gen_raw, "q", "generator.q", default=2.0, check=lambda v: v > 1, why="must be > 1")
        generator = {"kind": kind, "q": q, "angles": angles}
    else:
        raise ConfigError("generator.kind", f"must be geometric or power, got {kind!r}")

    truncs = raw.get("truncations")
    if not isinstance(truncs, list) or not truncs:
        raise ConfigError("truncations", "must be a nonempty list of positive integers")
    try:
        truncs = tuple(int(t) for t in truncs)
    except (TypeError, ValueError):
        raise ConfigError("truncations", "entries must be integers") from None
    if any(t < 1 for t in truncs) or any(b <= a for a, b in zip(truncs, truncs[1:])):
        raise ConfigError("truncations", "must be positive and strictly increasing")
    if isinstance(angles, list) and len(angles) < truncs[-1]:
        raise ConfigError("generator.angles", f"{len(angles)} angles for {truncs[-1]} zeros")

    g = raw.get("grid", {}) or {}
    grid = {
        "base_count": _num(g, "base_count", "grid.base_count", int, 2**14, lambda v: v >= 64, "must be >= 64"),
        "refine_factor": _num(g, "refine_factor", "grid.refine_factor", int, 64, lambda v: v >= 1, "must be >= 1"),
    }
    lg = raw.get("lambda_grid", {}) or {}
    lam = {"points_per_decade": _num(lg, "points_per_decade", "lambda_grid.points_per_decade", int, 200,
                                     lambda v: v >= 1, "must be >= 1")}
    if lg.get("decades") is not None:
        dec = lg["decades"]
        if not (isinstance(dec, list) and len(dec) == 2 and float(dec[0]) < float(dec[1])):
            raise ConfigError("lambda_grid.decades", "must be [lo, hi] with lo < hi (log10 units)")
        lam["decades"] = [float(dec[0]), float(dec[1])]

    th = dict(DEFAULT_THRESHOLDS[exp])
    for k, v in (raw.get("thresholds") or {}).items():
        if k not in th:
            raise ConfigError(f"thresholds.{k}", f"not a threshold of {exp}")
        th[k] = _num({k: v}, k, f"thresholds.{k}", check=lambda x: x > 0, why="must be > 0")

    params = copy.deepcopy(DEFAULT_PARAMS[exp])
    for k, v in (raw.get("params") or {}).items():
        if k not in params:
            raise ConfigError(f"params.{k}", f"not a parameter of {exp}")
        params[k] = v
    _validate_params(exp, params, generator, truncs)

    output = raw.get("output", f"out/{exp}")
    if not isinstance(output, str) or not output:
        raise ConfigError("output", "must be a directory path")
    return ExperimentConfig(exp, seed, generator, truncs, grid, lam, th, params, output)


def _validate_params(exp, params, generator, truncs):
    if exp in ("thm1", "protas"):
        hi = 2.0 if exp == "thm1" else 1.0
        params["p"] = _num(params, "p", "params.p", check=lambda v: 0 < v <= hi and (exp == "thm1" or v < 1),
                           why="out of range")
    if exp == "thm2":
        if params["n_max"] is not None:
            params["n_max"] = _num(params, "n_max", "params.n_max", int, check=lambda v: 1 <= v <= 51,
                                   why="must lie in [1, 51]")
        cmp_ = params["compare"]
        if not (isinstance(cmp_, list) and len(cmp_) == 2 and int(cmp_[0]) < int(cmp_[1])):
            raise ConfigError("params.compare", "must be two increasing dyadic levels")
        params["compare"] = [int(cmp_[0]), int(cmp_[1])]
    if exp == "thm3":
        params["n_functions"] = _num(params, "n_functions", "params.n_functions", int,
                                     check=lambda v: v >= 1, why="must be >= 1")
        params["r"] = _num(params, "r", "params.r", check=lambda v: 0 < v <= 1, why="must lie in (0, 1]")
        if truncs[-1] > modelspace.MAX_SYSTEM:
            raise ConfigError("truncations", f"model spaces limited to {modelspace.MAX_SYSTEM} kernels")
    if exp == "frostman":
        shifts = params["shifts"]
        if not isinstance(shifts, list) or not shifts:
            raise ConfigError("params.shifts", "must be a nonempty list")
        for i, s in enumerate(shifts):
            try:
                a = parse_complex(s)
            except ValueError:
                raise ConfigError(f"params.shifts[{i}]", f"not a complex number: {s!r}") from None
            if not abs(a) < 1:
                raise ConfigError(f"params.shifts[{i}]", f"|a| = {abs(a)} must be < 1")
        params["shifts"] = [str(s) if not isinstance(s, list) else s for s in shifts]
    if exp == "lemma1":
        params["mu"] = _num(params, "mu", "params.mu", check=lambda v: v > 10, why="must exceed 10")
    if exp == "observation":
        kinds = params["kinds"]
        if not isinstance(kinds, list) or not set(kinds) <= {"divergent", "control"} or not kinds:
            raise ConfigError("params.kinds", "subset of [divergent, control]")
        if truncs[-1] > 40:
            raise ConfigError("truncations", "observation sweep limited to M <= 40")


def load_config(path) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"not valid YAML: {exc}") from None
    return validate_config(raw)


# -- running ------------------------------------------------------------------


def build_sequence(cfg: ExperimentConfig, count: int | None = None) -> zeroseq.ZeroSequence:
    g = cfg.generator
    n = count or cfg.truncations[-1]
    if g["kind"] == "geometric":
        return zeroseq.generate_geometric(g["c"], g["delta"], n, g["angles"], seed=cfg.seed)
    return zeroseq.generate_power(g["q"], n, g["angles"], seed=cfg.seed)


def _lambdas(cfg: ExperimentConfig):
    dec = cfg.lambda_grid.get("decades")
    if dec is None:
        return None
    ppd = cfg.lambda_grid["points_per_decade"]
    return 10.0 ** (np.arange(round(dec[0] * ppd), round(dec[1] * ppd) + 1) / ppd)


def _grid(cfg, seq):
    return boundary.make_grid(seq, cfg.grid["base_count"], cfg.grid["refine_factor"])


def _expects_bounded(cfg) -> bool:
    return cfg.generator["kind"] == "geometric"


def _ratio(values) -> float:
    v = np.asarray(values, float)
    return float(v.max() / v.min()) if v.size and v.min() > 0 else float("inf")


class _Writer:
    def __init__(self, cfg: ExperimentConfig, outdir: Path):
        self.cfg = cfg
        self.outdir = outdir
        self.files: list = []

    def csv(self, name: str, body: str):
        header = f"# config_hash={self.cfg.hash} seed={self.cfg.seed}\n"
        (self.outdir / name).write_text(header + body)
        self.files.append(name)

    def json(self, name: str, obj: dict):
        obj = dict(obj, config_hash=self.cfg.hash, seed=self.cfg.seed)
        (self.outdir / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        self.files.append(name)


def _run_thm1(cfg, out):
    seq = build_sequence(cfg)
    p = cfg.params["p"]
    rows, q = [], []
    for N in cfg.truncations:
        sub = seq[:N]
        grid = _grid(cfg, sub)
        vals = blaschke.boundary_derivative_modulus(BlaschkeProduct(sub), *grid.angles)
        prof = boundary.weak_quasinorm(vals, grid, p, _lambdas(cfg), cfg.lambda_grid["points_per_decade"])
        out.csv(f"thm1_N{N}.csv", prof.to_csv())
        _, m_obs = zeroseq.is_exponential(sub)
        rows.append([N, prof.quasinorm, prof.argmax_lambda, m_obs, len(grid)])
        q.append(prof.quasinorm)
    th = cfg.thresholds
    stats = {"max_over_min": _ratio(q), "growth": q[-1] / q[0]}
    if _expects_bounded(cfg):
        passed = stats["max_over_min"] <= th["max_ratio"]
        verdict = "bounded weak-L1 quasinorm" if passed else "quasinorm not uniform in N"
    else:
        passed = stats["growth"] >= th["min_growth"]
        verdict = "non-exponential detected" if passed else "growth below threshold"
    return ["N", "quasinorm", "argmax_lambda", "M_observed", "nodes"], rows, stats, passed, verdict


def _run_thm2(cfg, out):
    seq = build_sequence(cfg)
    lo, hi = cfg.params["compare"]
    n_max = cfg.params["n_max"] or (35 if _expects_bounded(cfg) else 18)
    per_N = {}
    curve = None
    for N in cfg.truncations:
        curve = logmean.dyadic_increments(BlaschkeProduct(seq[:N]), n_max)
        out.csv(f"thm2_N{N}_curve.csv", curve.curve_csv())
        out.csv(f"thm2_N{N}_increments.csv", curve.increments_csv())
        per_N[str(N)] = curve.M_observed
    rows = [[int(n), inc] for n, inc in zip(curve.levels.tolist(), curve.increments.tolist())]
    stats = {"M_observed": per_N}
    th = cfg.thresholds
    if _expects_bounded(cfg):
        passed = max(per_N.values()) <= th["max_increment"]
        verdict = "bounded dyadic increments" if passed else "increment bound exceeded"
    else:
        if hi > n_max:
            raise ConfigError("params.compare", f"level {hi} beyond n_max {n_max}")
        a, b = curve.increment(lo), curve.increment(hi)
        stats["compare"] = {str(lo): a, str(hi): b}
        passed = b >= th["growth_factor"] * a
        verdict = "non-exponential detected" if passed else "increments not growing"
    return ["N", "increment"], rows, stats, passed, verdict


def random_unit_model(zeros, rng) -> ModelFunction:
    beta = rng.standard_normal(len(zeros)) + 1j * rng.standard_normal(len(zeros))
    f = ModelFunction(zeros, beta)
    return f * (1.0 / modelspace.l2_norm(f))


def _run_thm3(cfg, out):
    seq = build_sequence(cfg)
    rng = np.random.default_rng(cfg.seed)
    r = cfg.params["r"]
    rows, every = [], []
    scale_err = 0.0
    for M in cfg.truncations:
        sub = seq[:M]
        grid = _grid(cfg, sub)
        stats_M = []
        for i in range(cfg.params["n_functions"]):
            f = random_unit_model(sub, rng)
            s = modelspace.weak23_statistic(f, r, grid, cfg.lambda_grid["points_per_decade"])
            if i == 0:
                s2 = modelspace.weak23_statistic(f * (3.0 - 2.0j), r, grid, cfg.lambda_grid["points_per_decade"])
                scale_err = max(scale_err, abs(s2 - s) / s)
            stats_M.append(s)
        every.extend(stats_M)
        out.csv(f"thm3_M{M}.csv", "index,statistic\n" + "".join(f"{i},{v!r}\n" for i, v in enumerate(stats_M)))
        rows.append([M, min(stats_M), max(stats_M), float(np.mean(stats_M))])
    th = cfg.thresholds
    stats = {"max_over_min": _ratio(every), "scale_rel_error": scale_err}
    passed = stats["max_over_min"] <= th["max_ratio"] and scale_err <= th["scale_tol"]
    verdict = "weak-2/3 bound uniform in M" if passed else "weak-2/3 statistic not uniform"
    return ["M", "min", "max", "mean"], rows, stats, passed, verdict


def _run_frostman(cfg, out):
    seq = build_sequence(cfg)
    shifts = [parse_complex(s) for s in cfg.params["shifts"]]
    rows, worst, ident = [], 1.0, 0.0
    ppd = cfg.lambda_grid["points_per_decade"]
    for N in cfg.truncations:
        sub = seq[:N]
        B = BlaschkeProduct(sub)
        grid = _grid(cfg, sub)
        base_vals = blaschke.boundary_derivative_modulus(B, *grid.angles)
        base = boundary.weak_quasinorm(base_vals, grid, 1.0, _lambdas(cfg), ppd).quasinorm
        lines = ["a,quasinorm\n"]
        for a in shifts:
            vals = blaschke.frostman_shift_boundary(B, a, *grid.angles)
            if a == 0:
                ident = max(ident, float(np.max(np.abs(vals - base_vals) / base_vals)))
            q = boundary.weak_quasinorm(vals, grid, 1.0, _lambdas(cfg), ppd).quasinorm
            ratio = q / base
            worst = max(worst, ratio, 1.0 / ratio)
            rows.append([N, str(a), base, q, ratio])
            lines.append(f"{a},{q!r}\n")
        out.csv(f"frostman_N{N}.csv", "".join(lines))
    th = cfg.thresholds
    stats = {"worst_factor": worst, "identity_error": ident}
    passed = worst <= th["max_factor"] and ident <= th["identity_tol"]
    verdict = "shifted quasinorms comparable" if passed else "shift changed the quasinorm too much"
    return ["N", "a", "unshifted", "shifted", "ratio"], rows, stats, passed, verdict


def _run_lemma1(cfg, out):
    seq = build_sequence(cfg)
    mu = cfg.params["mu"]
    res = zeroseq.lemma1_construct(seq, mu)
    rows = [[k, e, int(n)] for k, (e, n) in enumerate(zip(seq.eps.tolist(), res.exponents.tolist()), 1)]
    out.json("lemma1.json", {
        "mu": mu, "S_c": res.S_c, "S_d": res.S_d, "K_observed": res.K_observed,
        "exponents": [int(n) for n in res.exponents], "lag": res.lag, "lag_ratio": res.lag_ratio,
    })
    stats = {"S_c": res.S_c, "S_d": res.S_d, "K_observed": res.K_observed, "lag": res.lag}
    passed = res.S_d <= mu
    return ["k", "eps", "n_k"], rows, stats, passed, "S_d <= mu" if passed else "S_d exceeds mu"


def _run_claim(cfg, out):
    seq = build_sequence(cfg)
    rows, ratios = [], []
    for N in cfg.truncations:
        sub = seq[:N]
        grid = _grid(cfg, sub)
        h = ModelFunction.kernel(sub, N - 1)
        c = modelspace.claim_statistic(BlaschkeProduct(sub), h, grid, cfg.lambda_grid["points_per_decade"])
        rows.append([N, c.quasinorm, c.h_norm_pow, c.ratio])
        ratios.append(c.ratio)
    out.csv("claim.csv", "N,quasinorm,h_norm_pow,ratio\n" + "".join(f"{r[0]},{r[1]!r},{r[2]!r},{r[3]!r}\n" for r in rows))
    stats = {"max_over_min": _ratio(ratios)}
    passed = stats["max_over_min"] <= cfg.thresholds["max_ratio"]
    return ["N", "quasinorm", "h_norm_pow", "ratio"], rows, stats, passed, (
        "claim constant uniform" if passed else "claim constant not uniform")


def _run_observation(cfg, out):
    seq = build_sequence(cfg)
    rows, stats, passed = [], {}, True
    for kind in cfg.params["kinds"]:
        table = modelspace.divergence_witness(seq, cfg.truncations, kind,
                                              cfg.grid["base_count"], cfg.grid["refine_factor"])
        vals = [t.quasinorm for t in table]
        rows.extend([[t.M, kind, t.quasinorm, t.condition] for t in table])
        out.csv(f"observation_{kind}.csv", "M,quasinorm,condition\n"
                + "".join(f"{t.M},{t.quasinorm!r},{t.condition!r}\n" for t in table))
        if kind == "divergent":
            inc = all(b > a for a, b in zip(vals, vals[1:]))
            stats["divergent_increasing"] = inc
            passed &= inc
        else:
            stats["control_max_over_min"] = _ratio(vals)
            passed &= stats["control_max_over_min"] <= cfg.thresholds["control_max_ratio"]
    stats["interpolation_constant"] = modelspace.interpolation_constant(seq)
    return ["M", "weights", "quasinorm", "condition"], rows, stats, passed, (
        "divergence witnessed" if passed else "observation sweep failed")


def _run_protas(cfg, out):
    seq = build_sequence(cfg)
    p = cfg.params["p"]
    rows, q = [], []
    for N in cfg.truncations:
        sub = seq[:N]
        grid = _grid(cfg, sub)
        vals = blaschke.boundary_derivative_modulus(BlaschkeProduct(sub), *grid.angles)
        q.append(boundary.hardy_quasinorm(vals, grid, p))
        rows.append([N, q[-1]])
    out.csv("protas.csv", "N,quasinorm\n" + "".join(f"{n},{v!r}\n" for n, v in rows))
    diffs = np.diff(q)
    stats = {"growth": q[-1] / q[0]}
    if _expects_bounded(cfg):
        contraction = float(np.max(diffs[1:] / diffs[:-1])) if diffs.size > 1 else 0.0
        stats["contraction"] = contraction
        passed = contraction <= cfg.thresholds["contraction"]
        verdict = "increments contract (bounded)" if passed else "increments do not contract"
    else:
        passed = stats["growth"] >= cfg.thresholds["min_growth"]
        verdict = "H^p quasinorm grows" if passed else "growth below threshold"
    return ["N", "quasinorm"], rows, stats, passed, verdict


_RUNNERS = {
    "thm1": _run_thm1, "thm2": _run_thm2, "thm3": _run_thm3, "frostman": _run_frostman,
    "lemma1": _run_lemma1, "claim": _run_claim, "observation": _run_observation, "protas": _run_protas,
}


class ExperimentFailure(RuntimeError):
    """A computation inside an experiment raised; carries the experiment name."""


def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def run(cfg: ExperimentConfig, output: str | os.PathLike | None = None) -> dict:
    """Run one experiment and write its files.  Returns the summary dict."""
    outdir = Path(output or cfg.output)
    outdir.mkdir(parents=True, exist_ok=True)
    writer = _Writer(cfg, outdir)
    log.info("running %s (config %s) into %s", cfg.experiment, cfg.hash, outdir)
    try:
        columns, rows, stats, passed, verdict = _RUNNERS[cfg.experiment](cfg, writer)
    except (ConfigError, ExperimentFailure):
        raise
    except Exception as exc:
        raise ExperimentFailure(f"{cfg.experiment}: {type(exc).__name__}: {exc}") from exc
    cfg_dict = cfg.as_dict()
    cfg_dict.pop("output")
    summary = _jsonable({
        "experiment": cfg.experiment,
        "config_hash": cfg.hash,
        "seed": cfg.seed,
        "config": cfg_dict,
        "columns": columns,
        "rows": rows,
        "statistics": stats,
        "thresholds": cfg.thresholds,
        "passed": bool(passed),
        "verdict": verdict,
        "files": sorted(writer.files),
    })
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    (outdir / "metadata.json").write_text(json.dumps({
        "config_hash": cfg.hash,
        "seed": cfg.seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }, indent=2) + "\n")
    return summary


# -- reporting ----------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    s = str(v).strip()
    return "-" if not s else " ".join(s.split())


def report_render(summary: dict) -> str:
    """Plain-text table of a summary (or of a parsed rendering)."""
    title = [
        ("experiment", summary.get("experiment", "-")),
        ("passed", summary.get("passed", "-")),
        ("verdict", summary.get("verdict", "-")),
        ("config_hash", summary.get("config_hash", "-")),
    ]
    lines = [" | ".join(f"{k}: {_cell(v)}" for k, v in title)]
    columns = [_cell(c) for c in summary.get("columns", [])]
    if columns:
        rows = [[_cell(v) for v in row] for row in summary.get("rows", [])]
        widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(columns)]
        fmt = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
        lines.append(fmt(columns))
        lines.append(fmt(["-" * w for w in widths]))
        lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def report_parse(text: str) -> dict:
    """Inverse of :func:`report_render` up to cell formatting (cells stay strings)."""
    lines = text.rstrip("\n").split("\n")
    summary: dict = {}
    for part in lines[0].split(" | "):
        key, _, val = part.partition(": ")
        summary[key] = val
    if len(lines) >= 2:
        import re

        split = lambda line: re.split(r" {2,}", line.strip())
        summary["columns"] = split(lines[1])
        summary["rows"] = [split(line) for line in lines[3:]]
    return summary
