"""Batch experiment harness: methods x datasets x noise settings x repeated
stratified splits, with machine-readable outputs.

Outputs per run: raw records as JSON-lines and TSV (one file pair per
dataset/noise setting), a mean +- std summary table, and — when coverage
allows — a rank/degradation trade-off table.  TSV record files are the
bit-stable artifact (identical across reruns of the same config); the
JSON-lines carry wall-clock telemetry and therefore are not.

Determinism rests on keyed RNG streams:
- split stream per dataset: (master seed, split seed, crc32(dataset), tag),
  then (that, repeat_index) inside stratified_split;
- uniform-noise stream: (master seed, crc32(dataset), repeat, kind code,
  round(p * 1e4)).
Methods never enter any key, so adding or dropping a method cannot perturb
another method's numbers; the same holds across datasets, noise settings,
and repeats.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import rankdata

from .baselines import (DEFAULT_ROUNDS, fit_adaboost, fit_logitboost,
                        baseline_error)
from .data import (Dataset, SplitSpec, check_registry_shape, load_csv,
                   registry_entry, stratified_split)
from .learner import (RmbConfig, decision_scores, deterministic_error, fit,
                      predict_deterministic, randomized_error)
from .noise import KIND_CODES, NoiseSpec, apply_noise

METHODS = ("rmboost", "adaboost", "logitboost")

WORKERS_ENV = "RMBOOST_WORKERS"

_SPLIT_STREAM_TAG = 11  # domain separator: split streams vs noise streams


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one benchmark run."""

    datasets: Tuple[str, ...]
    methods: Tuple[str, ...] = METHODS
    noise: Tuple[NoiseSpec, ...] = (NoiseSpec(),)
    split: SplitSpec = SplitSpec()
    lambda_policy: Union[str, float] = "inv-sqrt-n"
    output_dir: str = "results"
    seed: int = 0
    data_dir: str = "data"
    workers: int = 1

    def validated(self) -> "ExperimentConfig":
        if not self.datasets:
            raise ValueError("config needs at least one dataset")
        if len(set(self.datasets)) != len(self.datasets):
            raise ValueError("duplicate dataset entries in config")
        if not self.methods:
            raise ValueError("config needs at least one method")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate method entries in config")
        if not self.noise:
            raise ValueError("config needs at least one noise setting")
        tags = [spec.validated().tag for spec in self.noise]
        if len(set(tags)) != len(tags):
            raise ValueError("duplicate noise settings in config")
        self.split.validated()
        if isinstance(self.lambda_policy, str):
            if self.lambda_policy != "inv-sqrt-n":
                raise ValueError("lambda_policy must be a positive number or "
                                 "'inv-sqrt-n'")
        elif not (float(self.lambda_policy) > 0.0):
            raise ValueError("fixed lambda_policy must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        return self


def config_from_mapping(raw: Dict, base_dir: Union[str, Path, None] = None
                        ) -> ExperimentConfig:
    """Build a validated ExperimentConfig from a parsed TOML/JSON mapping.

    Relative data/output paths are resolved against base_dir (the config
    file's directory) when given.  Unknown keys are rejected.
    """
    known = {"datasets", "methods", "noise", "split", "lambda_policy",
             "output_dir", "seed", "data_dir", "workers"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {unknown}")

    kwargs: Dict = {}
    if "datasets" not in raw:
        raise ValueError("config must list datasets")
    kwargs["datasets"] = tuple(str(d) for d in raw["datasets"])
    if "methods" in raw:
        kwargs["methods"] = tuple(str(m) for m in raw["methods"])
    if "noise" in raw:
        specs = []
        for item in raw["noise"]:
            extra = sorted(set(item) - {"kind", "p_noise"})
            if extra:
                raise ValueError(f"unknown noise keys: {extra}")
            specs.append(NoiseSpec(kind=str(item.get("kind", "none")),
                                   p_noise=float(item.get("p_noise", 0.0))))
        kwargs["noise"] = tuple(specs)
    if "split" in raw:
        item = raw["split"]
        extra = sorted(set(item) - {"test_fraction", "n_repeats", "seed"})
        if extra:
            raise ValueError(f"unknown split keys: {extra}")
        kwargs["split"] = SplitSpec(
            test_fraction=float(item.get("test_fraction", 0.1)),
            n_repeats=int(item.get("n_repeats", 100)),
            seed=int(item.get("seed", 0)))
    if "lambda_policy" in raw:
        lp = raw["lambda_policy"]
        kwargs["lambda_policy"] = lp if isinstance(lp, str) else float(lp)
    for key in ("output_dir", "data_dir"):
        if key in raw:
            kwargs[key] = str(raw[key])
    for key in ("seed", "workers"):
        if key in raw:
            kwargs[key] = int(raw[key])

    config = ExperimentConfig(**kwargs).validated()
    if base_dir is not None:
        base = Path(base_dir)
        config = dataclasses.replace(
            config,
            output_dir=str(base / config.output_dir)
            if not Path(config.output_dir).is_absolute() else config.output_dir,
            data_dir=str(base / config.data_dir)
            if not Path(config.data_dir).is_absolute() else config.data_dir,
            datasets=tuple(
                str(base / d) if (d.endswith(".csv")
                                  and not Path(d).is_absolute()) else d
                for d in config.datasets))
    return config


@dataclass(frozen=True)
class ResultRecord:
    """One (dataset, noise, repeat, method) evaluation.

    Metric fields are None (serialized as NA/null) when the fit failed;
    minimax_risk is populated only by the minimax learner.  Errors are
    measured on clean test labels, as fractions in [0, 1].
    """

    dataset: str
    method: str
    noise_kind: str
    p_noise: float
    repeat_index: int
    test_error_deterministic: Optional[float]
    test_error_randomized: Optional[float]
    minimax_risk: Optional[float]
    rounds_run: Optional[int]
    n_rules: Optional[int]
    l1_mu: Optional[float]
    wall_time_ms: float
    seed: int
    error: Optional[str] = None

    @property
    def noise_tag(self) -> str:
        return NoiseSpec(self.noise_kind, self.p_noise).tag


TSV_COLUMNS = ("dataset", "method", "noise_kind", "p_noise", "repeat_index",
               "test_error_deterministic", "test_error_randomized",
               "minimax_risk", "rounds_run", "n_rules", "l1_mu", "seed",
               "error")

_RECORD_SORT_KEY = lambda r: (r.dataset, r.noise_kind, r.p_noise,  # noqa: E731
                              r.repeat_index, r.method)


def _tsv_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return value.replace("\t", " ").replace("\n", " ")
    return str(value)


def _split_seed(master_seed: int, split_seed: int, dataset_name: str) -> int:
    entropy = (int(master_seed), int(split_seed),
               zlib.crc32(dataset_name.encode("utf-8")), _SPLIT_STREAM_TAG)
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, np.uint64)[0])


def _noise_rng(master_seed: int, dataset_name: str, repeat_index: int,
               spec: NoiseSpec) -> np.random.Generator:
    entropy = (int(master_seed), zlib.crc32(dataset_name.encode("utf-8")),
               int(repeat_index), KIND_CODES[spec.kind],
               int(round(spec.p_noise * 10_000)))
    return np.random.default_rng(np.random.SeedSequence(entropy))


def resolve_dataset(entry: str, data_dir: Union[str, Path]) -> Dataset:
    """Turn a config entry into a loaded Dataset.

    A path-like entry (.csv suffix or existing file) loads directly; a bare
    name must be in the registry, load from data_dir/<name>.csv, and match
    the registry shape.
    """
    p = Path(entry)
    if p.suffix == ".csv" or p.exists():
        if not p.exists():
            raise ValueError(f"dataset file not found: {p}")
        return load_csv(p)
    reg = registry_entry(entry)
    path = Path(data_dir) / f"{entry}.csv"
    if not path.exists():
        raise ValueError(f"dataset {entry!r} not found at {path}; run "
                         "scripts/fetch_datasets.py to download and prepare it")
    ds = load_csv(path, name=entry)
    check_registry_shape(ds, reg)
    return ds


def _resolve_lambda(policy: Union[str, float], n_train: int) -> float:
    if isinstance(policy, str):
        return 1.0 / math.sqrt(n_train)
    return float(policy)


def _eval_rmboost(X_train, y_train, test: Dataset, lam: float) -> Dict:
    model = fit(X_train, y_train, RmbConfig(lam=lam))
    scores = decision_scores(model, test.X)
    det_loss = (predict_deterministic(model, test.X) != test.y).astype(np.float64)
    rand_loss = np.clip(0.5 - test.y * scores, 0.0, 1.0)
    if np.any(det_loss > 2.0 * rand_loss):
        raise AssertionError("deterministic loss exceeded twice the "
                             "randomized loss on a test sample")
    return {
        "test_error_deterministic": deterministic_error(model, test.X, test.y),
        "test_error_randomized": randomized_error(model, test.X, test.y),
        "minimax_risk": float(model.minimax_risk),
        "rounds_run": model.rounds_run,
        "n_rules": len(model.rules),
        "l1_mu": model.l1_mu,
    }


def _eval_baseline(method: str, X_train, y_train, test: Dataset) -> Dict:
    fitter = fit_adaboost if method == "adaboost" else fit_logitboost
    model = fitter(X_train, y_train, DEFAULT_ROUNDS)
    err = baseline_error(model, test.X, test.y)
    # A deterministic classifier is its own point-mass randomization.
    return {
        "test_error_deterministic": err,
        "test_error_randomized": err,
        "minimax_risk": None,
        "rounds_run": model.rounds_run,
        "n_rules": len(model.rules),
        "l1_mu": model.l1_coefficients,
    }


_FAILED_METRICS = {
    "test_error_deterministic": None, "test_error_randomized": None,
    "minimax_risk": None, "rounds_run": None, "n_rules": None, "l1_mu": None,
}


def _cell_records(dataset: Dataset, split_spec: SplitSpec, repeat_index: int,
                  master_seed: int, noise_specs: Sequence[NoiseSpec],
                  methods: Sequence[str],
                  lambda_policy: Union[str, float]) -> List[ResultRecord]:
    """All records for one (dataset, repeat) cell.

    Noise is drawn once per (partition, noise setting) and shared across
    methods; the adversarial reference is fitted once per partition on the
    clean training labels.  Any failure is recorded, never raised.
    """
    def record(spec: NoiseSpec, method: str, metrics: Dict, wall_ms: float,
               error: Optional[str]) -> ResultRecord:
        return ResultRecord(
            dataset=dataset.name, method=method, noise_kind=spec.kind,
            p_noise=spec.p_noise, repeat_index=repeat_index,
            wall_time_ms=wall_ms, seed=master_seed, error=error, **metrics)

    try:
        train, test = stratified_split(dataset, split_spec, repeat_index)
    except Exception as exc:  # noqa: BLE001 - harness must keep running
        msg = f"{type(exc).__name__}: {exc}"
        return [record(spec, m, _FAILED_METRICS, 0.0, msg)
                for spec in noise_specs for m in methods]

    lam = _resolve_lambda(lambda_policy, train.n)

    reference = None
    reference_error: Optional[str] = None
    if any(spec.kind == "adversarial_margin" for spec in noise_specs):
        try:
            reference = fit_logitboost(train.X, train.y, DEFAULT_ROUNDS)
        except Exception as exc:  # noqa: BLE001
            reference_error = (f"reference fit failed: "
                               f"{type(exc).__name__}: {exc}")

    records: List[ResultRecord] = []
    for spec in noise_specs:
        if spec.kind == "adversarial_margin" and reference is None:
            records.extend(record(spec, m, _FAILED_METRICS, 0.0,
                                  reference_error) for m in methods)
            continue
        rng = (_noise_rng(master_seed, dataset.name, repeat_index, spec)
               if spec.kind == "uniform_symmetric" else None)
        try:
            y_noisy, _ = apply_noise(spec, train.X, train.y, rng=rng,
                                     reference=reference)
        except Exception as exc:  # noqa: BLE001
            msg = f"{type(exc).__name__}: {exc}"
            records.extend(record(spec, m, _FAILED_METRICS, 0.0, msg)
                           for m in methods)
            continue
        for method in methods:
            start = time.perf_counter()
            try:
                if method == "rmboost":
                    metrics = _eval_rmboost(train.X, y_noisy, test, lam)
                else:
                    metrics = _eval_baseline(method, train.X, y_noisy, test)
                error = None
            except Exception as exc:  # noqa: BLE001
                metrics, error = _FAILED_METRICS, f"{type(exc).__name__}: {exc}"
            wall_ms = (time.perf_counter() - start) * 1e3
            records.append(record(spec, method, metrics, wall_ms, error))
    return records


def _cell_worker(args) -> List[ResultRecord]:
    return _cell_records(*args)


def run_experiment(config: ExperimentConfig,
                   echo: Optional[Callable[[str], None]] = None
                   ) -> Tuple[List[ResultRecord], List[Dict]]:
    """Execute the full grid and write all output files.

    Returns (records, summary rows); failed fits are recorded with their
    error message and excluded from summaries.  Worker count comes from the
    RMBOOST_WORKERS env var when set, else config.workers; with one worker
    everything runs in-process.
    """
    config = config.validated()
    say = echo or (lambda _msg: None)

    datasets = [resolve_dataset(entry, config.data_dir)
                for entry in config.datasets]
    names = [ds.name for ds in datasets]
    if len(set(names)) != len(names):
        raise ValueError(f"dataset names collide after resolution: {names}")

    tasks = []
    for ds in datasets:
        derived = SplitSpec(test_fraction=config.split.test_fraction,
                            n_repeats=config.split.n_repeats,
                            seed=_split_seed(config.seed, config.split.seed,
                                             ds.name))
        for repeat in range(config.split.n_repeats):
            tasks.append((ds, derived, repeat, config.seed, config.noise,
                          config.methods, config.lambda_policy))

    workers = int(os.environ.get(WORKERS_ENV, config.workers))
    workers = max(1, min(workers, len(tasks)))

    records: List[ResultRecord] = []
    if workers == 1:
        for task in tasks:
            records.extend(_cell_records(*task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cell in pool.map(_cell_worker, tasks):
                records.extend(cell)

    records.sort(key=_RECORD_SORT_KEY)

    out_dir = Path(config.output_dir)
    paths = write_records(records, out_dir)
    summary_rows = summarize(records)
    summary_path = out_dir / "summary.tsv"
    write_summary(summary_rows, summary_path)
    paths.append(summary_path)
    try:
        tradeoff_rows = emit_tradeoff_summary(records)
    except ValueError:
        tradeoff_rows = None
    if tradeoff_rows is not None:
        tradeoff_path = out_dir / "tradeoff.tsv"
        write_tradeoff(tradeoff_rows, tradeoff_path)
        paths.append(tradeoff_path)

    for name in names:
        subset = [r for r in records if r.dataset == name]
        n_failed = sum(1 for r in subset if r.error is not None)
        say(f"{name}: {len(subset) - n_failed}/{len(subset)} records ok")
    n_failed = sum(1 for r in records if r.error is not None)
    if n_failed:
        say(f"{n_failed} record(s) failed; see the error column")
    return records, summary_rows


def write_records(records: Sequence[ResultRecord],
                  out_dir: Union[str, Path]) -> List[Path]:
    """One TSV + JSONL pair per (dataset, noise setting) under
    out_dir/records/, rows ordered by (repeat, method).  The TSV omits
    wall_time_ms so reruns of the same config are byte-identical."""
    rec_dir = Path(out_dir) / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    groups: Dict[Tuple[str, str], List[ResultRecord]] = {}
    for r in records:
        groups.setdefault((r.dataset, r.noise_tag), []).append(r)
    paths: List[Path] = []
    for (ds_name, tag) in sorted(groups):
        rows = sorted(groups[(ds_name, tag)],
                      key=lambda r: (r.repeat_index, r.method))
        stem = f"{ds_name}__{tag}"
        tsv = rec_dir / f"{stem}.tsv"
        with tsv.open("w", encoding="utf-8") as fh:
            fh.write("\t".join(TSV_COLUMNS) + "\n")
            for r in rows:
                fh.write("\t".join(_tsv_cell(getattr(r, c))
                                   for c in TSV_COLUMNS) + "\n")
        jsonl = rec_dir / f"{stem}.jsonl"
        with jsonl.open("w", encoding="utf-8") as fh:
            for r in rows:
                fh.write(json.dumps(dataclasses.asdict(r), sort_keys=True)
                         + "\n")
        paths.extend([tsv, jsonl])
    return paths


def read_records_jsonl(path: Union[str, Path]) -> List[ResultRecord]:
    """Load records from a .jsonl file, or every .jsonl under a directory."""
    p = Path(path)
    files = sorted(p.rglob("*.jsonl")) if p.is_dir() else [p]
    if not files:
        raise ValueError(f"no .jsonl record files under {p}")
    out: List[ResultRecord] = []
    for f in files:
        with f.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    out.append(ResultRecord(**json.loads(line)))
                except (TypeError, json.JSONDecodeError) as exc:
                    raise ValueError(f"{f}: line {lineno}: bad record: {exc}"
                                     ) from None
    return out


SUMMARY_COLUMNS = ("dataset", "method", "noise_kind", "p_noise", "n_repeats",
                   "n_failed", "mean_error_pct", "std_error_pct",
                   "mean_risk_pct", "std_risk_pct")


def _mean_std(values: List[float]) -> Tuple[float, float]:
    arr = np.asarray(values)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.shape[0] >= 2 else 0.0
    return mean, std


def summarize(records: Sequence[ResultRecord]) -> List[Dict]:
    """Mean +- sample-std per (dataset, method, noise), in percent, over
    successful records only."""
    groups: Dict[Tuple[str, str, str, float], List[ResultRecord]] = {}
    for r in records:
        groups.setdefault((r.dataset, r.noise_kind, r.p_noise, r.method),
                          []).append(r)
    rows: List[Dict] = []
    for key in sorted(groups):
        ds_name, kind, p, method = key
        group = groups[key]
        ok = [r for r in group if r.error is None]
        row: Dict = {"dataset": ds_name, "method": method, "noise_kind": kind,
                     "p_noise": p, "n_repeats": len(group),
                     "n_failed": len(group) - len(ok)}
        if ok:
            mean, std = _mean_std(
                [100.0 * r.test_error_deterministic for r in ok])
            row["mean_error_pct"], row["std_error_pct"] = mean, std
        else:
            row["mean_error_pct"] = row["std_error_pct"] = None
        risks = [100.0 * r.minimax_risk for r in ok
                 if r.minimax_risk is not None]
        if risks:
            row["mean_risk_pct"], row["std_risk_pct"] = _mean_std(risks)
        else:
            row["mean_risk_pct"] = row["std_risk_pct"] = None
        rows.append(row)
    return rows


def write_summary(rows: Sequence[Dict], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("\t".join(SUMMARY_COLUMNS) + "\n")
        for row in rows:
            fh.write("\t".join(_tsv_cell(row[c]) for c in SUMMARY_COLUMNS)
                     + "\n")


CURVE_COLUMNS = ("p_noise", "method", "mean_error", "std_error")


def emit_degradation_curve(records: Sequence[ResultRecord], dataset: str,
                           methods: Sequence[str], noise_kind: str,
                           p_grid: Sequence[float]) -> List[Tuple]:
    """Plot-ready (p_noise, method, mean_error, std_error) rows over a
    noise-level grid for one dataset.

    A grid point p=0 is satisfied by matching-kind records at p=0 or, in
    their absence, by noiseless records (the two coincide by construction).
    Missing grid cells raise with the full gap list.
    """
    pool = [r for r in records
            if r.error is None and r.dataset == dataset and r.method in methods]
    rows: List[Tuple] = []
    gaps: List[Tuple[float, str]] = []
    for p in p_grid:
        for method in methods:
            sel = [r for r in pool if r.method == method
                   and r.noise_kind == noise_kind
                   and abs(r.p_noise - p) < 1e-12]
            if not sel and p == 0.0:
                sel = [r for r in pool
                       if r.method == method and r.noise_kind == "none"]
            if not sel:
                gaps.append((float(p), method))
                continue
            mean, std = _mean_std([r.test_error_deterministic for r in sel])
            rows.append((float(p), method, mean, std))
    if gaps:
        raise ValueError(f"no records for dataset {dataset!r}, noise "
                         f"{noise_kind!r} at grid cells: {gaps}")
    return rows


def write_curve(rows: Sequence[Tuple], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("\t".join(CURVE_COLUMNS) + "\n")
        for row in rows:
            fh.write("\t".join(_tsv_cell(v) for v in row) + "\n")


TRADEOFF_COLUMNS = ("method", "mean_rank_noiseless", "mean_degradation_pct")


def emit_tradeoff_summary(records: Sequence[ResultRecord],
                          noise_kind: Optional[str] = None,
                          p_noise: Optional[float] = None) -> List[Tuple]:
    """Per method: average rank by noiseless mean error (average rank over
    ties, rank 1 best) and mean degradation (noisy minus noiseless mean
    error, percentage points), both averaged across datasets.

    The noisy setting defaults to the unique one present; pass
    (noise_kind, p_noise) to disambiguate.  Coverage gaps raise with the
    full list of missing (dataset, method, setting) cells.
    """
    ok = [r for r in records if r.error is None]
    clean = [r for r in ok if r.noise_kind == "none"]
    noisy_pool = [r for r in ok if r.noise_kind != "none"]
    if noise_kind is None:
        combos = sorted({(r.noise_kind, r.p_noise) for r in noisy_pool})
        if len(combos) != 1:
            raise ValueError("need exactly one noisy setting to infer the "
                             f"trade-off target, found {combos}; pass "
                             "noise_kind/p_noise explicitly")
        noise_kind, p_noise = combos[0]
    if p_noise is None:
        raise ValueError("p_noise is required when noise_kind is given")
    noisy = [r for r in noisy_pool if r.noise_kind == noise_kind
             and abs(r.p_noise - p_noise) < 1e-12]

    datasets = sorted({r.dataset for r in clean} | {r.dataset for r in noisy})
    methods = sorted({r.method for r in clean} | {r.method for r in noisy})
    if not datasets or not methods:
        raise ValueError("no successful records to summarize")

    def mean_error(pool: List[ResultRecord], ds_name: str,
                   method: str) -> Optional[float]:
        vals = [r.test_error_deterministic for r in pool
                if r.dataset == ds_name and r.method == method]
        return float(np.mean(vals)) if vals else None

    gaps = []
    clean_means: Dict[Tuple[str, str], float] = {}
    noisy_means: Dict[Tuple[str, str], float] = {}
    for ds_name in datasets:
        for method in methods:
            c = mean_error(clean, ds_name, method)
            z = mean_error(noisy, ds_name, method)
            if c is None:
                gaps.append((ds_name, method, "none"))
            if z is None:
                gaps.append((ds_name, method, f"{noise_kind}-{p_noise:g}"))
            clean_means[(ds_name, method)] = c
            noisy_means[(ds_name, method)] = z
    if gaps:
        raise ValueError(f"trade-off coverage gaps: {gaps}")

    rows: List[Tuple] = []
    for method in methods:
        ranks = []
        degradations = []
        for ds_name in datasets:
            errs = np.array([clean_means[(ds_name, m)] for m in methods])
            ranks.append(float(rankdata(errs, method="average")
                               [methods.index(method)]))
            degradations.append(100.0 * (noisy_means[(ds_name, method)]
                                         - clean_means[(ds_name, method)]))
        rows.append((method, float(np.mean(ranks)),
                     float(np.mean(degradations))))
    return rows


def write_tradeoff(rows: Sequence[Tuple], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("\t".join(TRADEOFF_COLUMNS) + "\n")
        for row in rows:
            fh.write("\t".join(_tsv_cell(v) for v in row) + "\n")
