"""Experiment grids, dataset checks, and fixture emission.

The ``run`` subcommand sweeps (variant x oracle x c_dist x eta) cells and
writes one CSV row per repetition plus a per-cell summary CSV.  Seeding is
content-addressed (base seed, cell, repetition index), so identical
configs reproduce identical CSV bytes regardless of the parallelism
degree.  Synthetic repetitions regenerate their dataset from the
repetition seed; an embedding file is loaded once and shared across reps.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product
from pathlib import Path

from .datagen import LabeledDataset, SynthConfig, generate_synthetic, load_embedding
from .evaluation import CellSummary, RunResult, aggregate, score
from .oracle import GlobalDistanceWeak, LocalDistanceWeak, Oracle, Perfect
from .ssac import (
    SsacParams,
    TheoremParams,
    check_theorem_condition,
    map_cdist_params,
    run_ssac,
)

ORACLE_NAMES = ("perfect", "local", "global")

RUN_FIELDS = [
    "variant", "oracle", "c_dist", "eta", "beta", "seed", "accuracy", "failed",
    "phase1_failures", "queries_p1", "queries_p2", "ambiguity_events", "realized_gamma",
]
SUMMARY_FIELDS = [
    "variant", "oracle", "c_dist", "eta", "mean_accuracy", "std_accuracy",
    "failure_count", "mean_queries", "n_reps",
]


@dataclass(frozen=True)
class EmbeddingSource:
    path: str
    keep_labels: tuple | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    data: object  # SynthConfig | EmbeddingSource
    oracles: tuple = ("local",)
    c_dist: tuple = (1.0,)
    eta: tuple = (2.0,)
    beta: int = 1
    delta: float = 0.05
    variants: tuple = ("improved", "vanilla")
    repetitions: int = 1000
    base_seed: int = 0
    out: str = "results"
    parallel: int = 1

    def __post_init__(self):
        for name in ("oracles", "c_dist", "eta", "variants"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        for o in self.oracles:
            if o not in ORACLE_NAMES:
                raise ValueError(f"unknown oracle {o!r}; expected one of {ORACLE_NAMES}")
        for v in self.variants:
            if v not in ("improved", "vanilla"):
                raise ValueError(f"unknown variant {v!r}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.parallel < 1:
            raise ValueError("parallel must be >= 1")


def _seed64(*parts) -> int:
    key = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


@dataclass(frozen=True)
class RepTask:
    """One repetition, self-contained and picklable for worker processes."""

    variant: str
    oracle: str
    c_dist: float
    eta: float
    beta: int
    delta: float
    seed: int
    synth: SynthConfig | None
    embedding: EmbeddingSource | None


_EMBEDDING_CACHE: dict = {}


def _task_dataset(task: RepTask) -> LabeledDataset:
    if task.synth is not None:
        cfg = SynthConfig(
            n=task.synth.n, k=task.synth.k, dim=task.synth.dim,
            sigma=task.synth.sigma, gamma_min=task.synth.gamma_min,
            gamma_max=task.synth.gamma_max, seed=_seed64(task.seed, "data"),
            center_box_scale=task.synth.center_box_scale,
            max_attempts=task.synth.max_attempts,
        )
        return generate_synthetic(cfg)
    key = (task.embedding.path, task.embedding.keep_labels)
    if key not in _EMBEDDING_CACHE:
        _EMBEDDING_CACHE[key] = load_embedding(task.embedding.path, task.embedding.keep_labels)
    return _EMBEDDING_CACHE[key]


def make_oracle(ld: LabeledDataset, name: str, c_dist: float, resolve_random: bool,
                resolve_seed: int) -> Oracle:
    if name == "perfect":
        kind = Perfect()
    elif name == "local":
        nu, rho = map_cdist_params(c_dist, ld.realized_gamma)
        kind = LocalDistanceWeak(nu=nu, rho=rho)
    elif name == "global":
        kind = GlobalDistanceWeak(rho=c_dist)
    else:
        raise ValueError(f"unknown oracle {name!r}")
    return Oracle(ld.dataset, ld.truth, kind, resolve_random=resolve_random,
                  resolve_seed=resolve_seed)


def run_repetition(task: RepTask) -> RunResult:
    ld = _task_dataset(task)
    oracle = make_oracle(
        ld, task.oracle, task.c_dist,
        resolve_random=task.variant == "vanilla",
        resolve_seed=_seed64(task.seed, "resolve"),
    )
    params = SsacParams(
        k=ld.truth.k, eta=task.eta, beta=task.beta, delta=task.delta,
        variant=task.variant, seed=_seed64(task.seed, "algo"),
    )
    output = run_ssac(ld.dataset, oracle, params)
    return score(
        ld.truth, output, ld.dataset,
        variant=task.variant, oracle=task.oracle, c_dist=task.c_dist,
        eta=task.eta, beta=task.beta, seed=task.seed,
        realized_gamma=ld.realized_gamma,
    )


def build_tasks(cfg: ExperimentConfig) -> list:
    synth = cfg.data if isinstance(cfg.data, SynthConfig) else None
    emb = cfg.data if isinstance(cfg.data, EmbeddingSource) else None
    cells = sorted(product(cfg.variants, cfg.oracles, cfg.c_dist, cfg.eta))
    tasks = []
    for variant, oracle, c_dist, eta in cells:
        for rep in range(cfg.repetitions):
            seed = _seed64(cfg.base_seed, variant, oracle, repr(float(c_dist)),
                           repr(float(eta)), rep)
            tasks.append(RepTask(
                variant=variant, oracle=oracle, c_dist=float(c_dist), eta=float(eta),
                beta=cfg.beta, delta=cfg.delta, seed=seed, synth=synth, embedding=emb,
            ))
    return tasks


def execute(cfg: ExperimentConfig) -> list:
    """Run every repetition of the grid, in canonical cell-then-rep order."""
    tasks = build_tasks(cfg)
    if cfg.parallel == 1:
        return [run_repetition(t) for t in tasks]
    chunk = max(1, len(tasks) // (cfg.parallel * 16))
    with ProcessPoolExecutor(max_workers=cfg.parallel) as pool:
        return list(pool.map(run_repetition, tasks, chunksize=chunk))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _run_row(r: RunResult) -> list:
    return [
        r.variant, r.oracle, _fmt(float(r.c_dist)), _fmt(float(r.eta)), r.beta, r.seed,
        _fmt(float(r.accuracy)), _fmt(r.failed), r.phase1_failures,
        r.queries_phase1, r.queries_phase2, r.ambiguity_events,
        _fmt(float(r.realized_gamma)),
    ]


def _summary_row(c: CellSummary) -> list:
    return [
        c.variant, c.oracle, _fmt(float(c.c_dist)), _fmt(float(c.eta)),
        _fmt(c.mean_accuracy), _fmt(c.std_accuracy), c.failure_count,
        _fmt(c.mean_queries), c.n_reps,
    ]


def write_csv(path, fields, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        writer.writerows(rows)


def run_grid(cfg: ExperimentConfig, echo=print) -> tuple:
    """Execute the grid, write runs.csv / summary.csv, return (results, cells)."""
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = execute(cfg)
    cells = aggregate(results)
    write_csv(out_dir / "runs.csv", RUN_FIELDS, [_run_row(r) for r in results])
    write_csv(out_dir / "summary.csv", SUMMARY_FIELDS, [_summary_row(c) for c in cells])
    meta = {
        "data": asdict(cfg.data),
        "kind": "synthetic" if isinstance(cfg.data, SynthConfig) else "embedding",
        "oracles": list(cfg.oracles), "c_dist": list(cfg.c_dist),
        "eta": list(cfg.eta), "beta": cfg.beta, "delta": cfg.delta,
        "variants": list(cfg.variants), "repetitions": cfg.repetitions,
        "base_seed": cfg.base_seed,
    }
    with open(out_dir / "config.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for c in cells:
        echo(
            f"{c.variant:9s} {c.oracle:7s} c_dist={c.c_dist:<5g} eta={c.eta:<4g} "
            f"acc={c.mean_accuracy:.4f} +/- {c.std_accuracy:.4f} "
            f"failures={c.failure_count}/{c.n_reps} queries={c.mean_queries:.1f}"
        )
    return results, cells


def parse_config_text(text: str) -> dict:
    """Parse a JSON object or simple ``key = value`` lines (values JSON-ish)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        value = value.strip()
        try:
            out[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            if "," in value:
                out[key.strip()] = [json.loads(v) if _jsonish(v) else v.strip()
                                    for v in value.split(",")]
            else:
                out[key.strip()] = value
    return out


def _jsonish(v: str) -> bool:
    try:
        json.loads(v)
        return True
    except json.JSONDecodeError:
        return False


def config_from_dict(d: dict) -> ExperimentConfig:
    d = dict(d)
    data_spec = d.pop("data", None)
    if not isinstance(data_spec, dict):
        raise ValueError("config needs a 'data' section (object with a 'kind')")
    data_spec = dict(data_spec)
    kind = data_spec.pop("kind", "synthetic")
    if kind == "synthetic":
        data = SynthConfig(**data_spec)
    elif kind == "embedding":
        keep = data_spec.get("keep_labels")
        data = EmbeddingSource(
            path=data_spec["path"],
            keep_labels=None if keep is None else tuple(int(v) for v in keep),
        )
    else:
        raise ValueError(f"unknown data kind {kind!r}")
    listy = lambda v: tuple(v) if isinstance(v, (list, tuple)) else (v,)
    kwargs: dict = {"data": data}
    for name in ("oracles", "variants"):
        if name in d:
            kwargs[name] = tuple(str(v) for v in listy(d.pop(name)))
    for name in ("c_dist", "eta"):
        if name in d:
            kwargs[name] = tuple(float(v) for v in listy(d.pop(name)))
    for name in ("beta", "repetitions", "base_seed", "parallel"):
        if name in d:
            kwargs[name] = int(d.pop(name))
    if "delta" in d:
        kwargs["delta"] = float(d.pop("delta"))
    if "out" in d:
        kwargs["out"] = str(d.pop("out"))
    if d:
        raise ValueError(f"unknown config keys: {sorted(d)}")
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(parse_config_text(fh.read()))


def check_dataset(cfg: ExperimentConfig, model: str, c_dist: float,
                  epsilon: float | None = None, echo=print) -> bool:
    """Report realized margin and coverage-condition verdicts for a dataset."""
    if isinstance(cfg.data, SynthConfig):
        ld = generate_synthetic(cfg.data)
    else:
        ld = load_embedding(cfg.data.path, cfg.data.keep_labels)
    gamma = ld.realized_gamma
    echo(f"n={ld.dataset.n} dim={ld.dataset.dim} k={ld.truth.k}")
    echo(f"realized_gamma={gamma!r}")
    eps_cap = (gamma - 1.0) / 2.0
    if epsilon is None:
        epsilon = eps_cap
    if epsilon > eps_cap or epsilon <= 0.0:
        raise SystemExit(
            f"error: epsilon must be in (0, (gamma-1)/2] = (0, {eps_cap!r}]; got {epsilon!r}"
        )
    nu, rho = map_cdist_params(c_dist, gamma)
    tp = TheoremParams(epsilon=epsilon, gamma=gamma, nu=nu, rho=rho)
    report = check_theorem_condition(ld.dataset, ld.truth, tp, model)
    echo(f"model={model} c_dist={c_dist!r} nu={nu!r} rho={rho!r} epsilon={epsilon!r}")
    echo(f"coverage constant c={report.c!r}")
    for i, (ratio, sat) in enumerate(zip(report.min_ratios, report.satisfied)):
        echo(f"cluster {i}: min d/r = {ratio:.4f} -> {'ok' if sat else 'UNSATISFIED'}")
    echo(f"condition {'holds' if report.ok else 'does not hold'}")
    return report.ok


def emit_fixture(seed: int, path, n: int = 24, k: int = 3, dim: int = 2) -> None:
    """Write a small labeled dataset in the embedding file format."""
    cfg = SynthConfig(n=n, k=k, dim=dim, sigma=1.0, gamma_min=1.0, gamma_max=100.0,
                      seed=seed, center_box_scale=8.0, max_attempts=5000)
    ld = generate_synthetic(cfg)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# labeled point fixture, seed={seed}\n")
        for label, point in zip(ld.truth.labels, ld.dataset.points):
            fh.write(",".join([str(int(label))] + [repr(float(v)) for v in point]) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakssac",
        description="Active clustering simulator with distance-weak same-cluster oracles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment grid from a config file")
    p_run.add_argument("--config", required=True, help="JSON or key=value config file")
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")
    p_run.add_argument("--reps", type=int, default=None, help="repetitions per cell")
    p_run.add_argument("--parallel", type=int, default=None, help="worker processes")
    p_run.add_argument("--seed", type=int, default=None, help="base seed")

    p_check = sub.add_parser("check", help="report margin and coverage conditions")
    p_check.add_argument("--config", required=True)
    p_check.add_argument("--model", choices=("local", "global"), default="local")
    p_check.add_argument("--c-dist", type=float, default=1.0)
    p_check.add_argument("--epsilon", type=float, default=None,
                         help="defaults to (gamma-1)/2")
    p_check.add_argument("--seed", type=int, default=None, help="base seed")

    p_fix = sub.add_parser("fixture", help="emit a small labeled dataset file")
    p_fix.add_argument("--seed", type=int, default=0)
    p_fix.add_argument("--out", required=True)
    p_fix.add_argument("--n", type=int, default=24)
    p_fix.add_argument("--k", type=int, default=3)
    p_fix.add_argument("--dim", type=int, default=2)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            overrides = {}
            if args.out is not None:
                overrides["out"] = args.out
            if args.reps is not None:
                overrides["repetitions"] = args.reps
            if args.parallel is not None:
                overrides["parallel"] = args.parallel
            if args.seed is not None:
                overrides["base_seed"] = args.seed
            if overrides:
                cfg = ExperimentConfig(**{**_config_kwargs(cfg), **overrides})
            run_grid(cfg)
            return 0
        if args.command == "check":
            cfg = load_config(args.config)
            if args.seed is not None:
                cfg = ExperimentConfig(**{**_config_kwargs(cfg), "base_seed": args.seed})
            if isinstance(cfg.data, SynthConfig) and args.seed is not None:
                data = SynthConfig(**{**asdict(cfg.data), "seed": args.seed})
                cfg = ExperimentConfig(**{**_config_kwargs(cfg), "data": data})
            check_dataset(cfg, args.model, args.c_dist, args.epsilon)
            return 0
        if args.command == "fixture":
            emit_fixture(args.seed, args.out, n=args.n, k=args.k, dim=args.dim)
            return 0
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def _config_kwargs(cfg: ExperimentConfig) -> dict:
    return {
        "data": cfg.data, "oracles": cfg.oracles, "c_dist": cfg.c_dist,
        "eta": cfg.eta, "beta": cfg.beta, "delta": cfg.delta,
        "variants": cfg.variants, "repetitions": cfg.repetitions,
        "base_seed": cfg.base_seed, "out": cfg.out, "parallel": cfg.parallel,
    }


if __name__ == "__main__":
    sys.exit(main())
