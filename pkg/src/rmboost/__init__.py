"""Minimax-robust boosting with column generation and stump base rules.

The package trains an ensemble of decision stumps whose coefficients solve
a worst-case error-probability program: a bounded-variable simplex solver
optimizes the round LP, column generation adds one priced-in rule per
round, and the fitted model carries its minimax risk alongside the usual
deterministic/randomized prediction rules.  Around that core live the
classical AdaBoost/LogitBoost baselines, label-noise injectors, diagnostic
generalization-bound calculators, CSV ingestion with stratified splitting,
and a benchmark harness driven by the ``rmboost`` command-line tool.

Serialization helpers here (``model_to_json``/``model_from_json``) handle
the minimax model; the baselines module ships its own pair for stagewise
models.
"""

from .baselines import StagewiseModel, fit_adaboost, fit_logitboost
from .bounds import (
    early_termination_bound,
    epsilon_delta,
    est_error_bound,
    noise_theorem_bounds,
    round_error_bound,
    vc_bound_trees,
)
from .data import (
    Dataset,
    SplitSpec,
    dataset_registry,
    load_csv,
    save_csv,
    stratified_split,
)
from .harness import ExperimentConfig, ResultRecord, run_experiment
from .learner import (
    RmbConfig,
    RmbFitError,
    RmbModel,
    decision_scores,
    deterministic_error,
    epsilon_opt_diagnostic,
    fit,
    model_from_json,
    model_to_json,
    objective_F,
    predict_deterministic,
    predict_randomized,
    randomized_error,
)
from .linprog import LpProblem, LpSolution, price_columns, solve_master
from .noise import NoiseSpec, apply_noise, inject_adversarial, inject_uniform
from .stumps import RegressionStump, Stump, best_stump, enumerate_stumps

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "ExperimentConfig",
    "LpProblem",
    "LpSolution",
    "NoiseSpec",
    "RegressionStump",
    "ResultRecord",
    "RmbConfig",
    "RmbFitError",
    "RmbModel",
    "SplitSpec",
    "StagewiseModel",
    "Stump",
    "apply_noise",
    "best_stump",
    "dataset_registry",
    "decision_scores",
    "deterministic_error",
    "early_termination_bound",
    "enumerate_stumps",
    "epsilon_delta",
    "epsilon_opt_diagnostic",
    "est_error_bound",
    "fit",
    "fit_adaboost",
    "fit_logitboost",
    "inject_adversarial",
    "inject_uniform",
    "load_csv",
    "model_from_json",
    "model_to_json",
    "noise_theorem_bounds",
    "objective_F",
    "predict_deterministic",
    "predict_randomized",
    "price_columns",
    "randomized_error",
    "round_error_bound",
    "run_experiment",
    "save_csv",
    "solve_master",
    "stratified_split",
    "vc_bound_trees",
    "__version__",
]
