"""Command-line entry points: fit / predict / bench / curve.

Exit codes: 0 on success, 1 for configuration or data errors, 2 when a
benchmark run finished but some records failed.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
from pathlib import Path
from typing import Optional, Tuple

import click

from . import baselines, learner
from .data import load_csv, load_features_csv
from .harness import (config_from_mapping, emit_degradation_curve,
                      read_records_jsonl, run_experiment, write_curve,
                      CURVE_COLUMNS)

_NOISE_ALIASES = {
    "none": "none",
    "uniform": "uniform_symmetric",
    "uniform_symmetric": "uniform_symmetric",
    "adversarial": "adversarial_margin",
    "adversarial_margin": "adversarial_margin",
}


def _canonical_noise_kind(name: str) -> str:
    key = name.strip().lower()
    if key not in _NOISE_ALIASES:
        raise ValueError(f"unknown noise kind {name!r}; choose from "
                         f"{sorted(set(_NOISE_ALIASES))}")
    return _NOISE_ALIASES[key]


def _parse_label_column(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def _load_model(path: Path):
    text = path.read_text(encoding="utf-8")
    kind = json.loads(text).get("model_kind")
    if kind == "rmboost":
        return kind, learner.model_from_json(text)
    if kind in ("adaboost", "logitboost"):
        return kind, baselines.model_from_json(text)
    raise ValueError(f"{path}: unknown model_kind {kind!r}")


@click.group()
def cli() -> None:
    """Minimax-boosting tools: fit models, predict, run benchmarks."""


@cli.command("fit")
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Training CSV with one label column.")
@click.option("--lambda", "lam_text", default="auto", show_default=True,
              help="Uncertainty-set width: a positive number, or 'auto' "
                   "for 1/sqrt(n).")
@click.option("--rounds", default=200, show_default=True, type=int,
              help="Maximum column-generation rounds.")
@click.option("--label-column", default="-1", show_default=True,
              help="Label column index or header name.")
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path),
              help="Where to write the model JSON.")
def fit_command(data_path: Path, lam_text: str, rounds: int,
                label_column: str, out_path: Path) -> int:
    """Fit the minimax learner on a CSV and save the model as JSON."""
    ds = load_csv(data_path, label_column=_parse_label_column(label_column))
    if lam_text.strip().lower() == "auto":
        lam = 1.0 / math.sqrt(ds.n)
    else:
        lam = float(lam_text)
    config = learner.RmbConfig(lam=lam, max_rounds=rounds)
    model = learner.fit(ds.X, ds.y, config)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(learner.model_to_json(model), encoding="utf-8")
    click.echo(f"fitted {ds.name}: risk={model.minimax_risk:.6f} "
               f"rounds={model.rounds_run} rules={len(model.rules)} "
               f"lambda={lam:.6g} -> {out_path}")
    return 0


@cli.command("predict")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Model JSON written by fit or the benchmark harness.")
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="CSV of samples to score.")
@click.option("--label-column", default="-1", show_default=True,
              help="Label column index or name, or 'none' for a "
                   "features-only CSV.")
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path),
              help="Where to write the predictions TSV.")
def predict_command(model_path: Path, data_path: Path, label_column: str,
                    out_path: Path) -> int:
    """Score a CSV with a saved model; writes row, score, prediction."""
    kind, model = _load_model(model_path)
    if label_column.strip().lower() == "none":
        X, _ = load_features_csv(data_path)
    else:
        X = load_csv(data_path,
                     label_column=_parse_label_column(label_column)).X
    needed = max((rule.feature for rule in model.rules), default=-1) + 1
    if X.shape[1] < needed:
        raise ValueError(f"model uses {needed} feature column(s) but the "
                         f"data has {X.shape[1]}")
    if kind == "rmboost":
        scores = learner.decision_scores(model, X)
        preds = learner.predict_deterministic(model, X)
    else:
        scores = baselines.stagewise_scores(model, X)
        preds = baselines.predict_baseline(model, X)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", encoding="utf-8") as fh:
        fh.write("row\tscore\tprediction\n")
        for i in range(X.shape[0]):
            fh.write(f"{i}\t{float(scores[i])!r}\t{int(preds[i])}\n")
    click.echo(f"wrote {X.shape[0]} predictions -> {out_path}")
    return 0


def _read_config_mapping(path: Path) -> dict:
    if path.suffix.lower() == ".json":
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)
    if path.suffix.lower() == ".toml":
        try:
            import tomllib as toml_reader  # 3.11+
        except ImportError:
            import tomli as toml_reader
        with path.open("rb") as fh:
            return toml_reader.load(fh)
    raise ValueError(f"{path}: config must be .toml or .json")


@cli.command("bench")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Experiment config, TOML or JSON.")
@click.option("--out-dir", "out_dir", default=None,
              type=click.Path(file_okay=False, path_type=Path),
              help="Override the config's output directory.")
def bench_command(config_path: Path, out_dir: Optional[Path]) -> int:
    """Run the full benchmark grid described by a config file."""
    raw = _read_config_mapping(config_path)
    config = config_from_mapping(raw, base_dir=config_path.parent)
    if out_dir is not None:
        config = dataclasses.replace(config, output_dir=str(out_dir))
    records, _summary = run_experiment(config, echo=click.echo)
    click.echo(f"outputs in {config.output_dir}")
    n_failed = sum(1 for r in records if r.error is not None)
    return 2 if n_failed else 0


@cli.command("curve")
@click.option("--records", "records_path", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="Benchmark output directory (or one records .jsonl).")
@click.option("--dataset", required=True, help="Dataset name to slice on.")
@click.option("--noise", "noise_name", required=True,
              help="Noise kind: uniform or adversarial (long names accepted).")
@click.option("--grid", "grid_text", required=True,
              help="Comma-separated noise levels, e.g. 0,0.05,0.1,0.15,0.2.")
@click.option("--methods", "methods_text", default="rmboost,adaboost",
              show_default=True, help="Comma-separated method names.")
@click.option("--out", "out_path", default=None,
              type=click.Path(dir_okay=False, path_type=Path),
              help="Output TSV; prints to stdout when omitted.")
def curve_command(records_path: Path, dataset: str, noise_name: str,
                  grid_text: str, methods_text: str,
                  out_path: Optional[Path]) -> int:
    """Emit a plot-ready error-vs-noise-level table from saved records."""
    kind = _canonical_noise_kind(noise_name)
    grid = [float(tok) for tok in grid_text.split(",") if tok.strip()]
    if not grid:
        raise ValueError("empty noise grid")
    methods: Tuple[str, ...] = tuple(
        tok.strip() for tok in methods_text.split(",") if tok.strip())
    if not methods:
        raise ValueError("empty method list")
    records = read_records_jsonl(records_path)
    rows = emit_degradation_curve(records, dataset, methods, kind, grid)
    if out_path is not None:
        write_curve(rows, out_path)
        click.echo(f"wrote {len(rows)} rows -> {out_path}")
    else:
        click.echo("\t".join(CURVE_COLUMNS))
        for row in rows:
            click.echo("\t".join(repr(v) if isinstance(v, float) else str(v)
                                 for v in row))
    return 0


def main(argv=None) -> int:
    """Console entry point with the documented exit codes."""
    try:
        result = cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return int(result) if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
