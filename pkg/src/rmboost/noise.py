"""Training-label corruption: independent symmetric flips and
margin-targeted adversarial flips.

Uniform-symmetric noise flips each label independently with the same
probability, leaving the feature marginal untouched.  Adversarial noise
deterministically flips the labels of exactly ceil(p * n) training samples
on which a reference model is most confidently correct (largest margin
y * score), the regime observed to damage stagewise methods most.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .baselines import StagewiseModel, stagewise_scores

NOISE_KINDS = ("none", "uniform_symmetric", "adversarial_margin")

# Stable stream-key codes used by the experiment harness.
KIND_CODES = {"none": 0, "uniform_symmetric": 1, "adversarial_margin": 2}


@dataclass(frozen=True)
class NoiseSpec:
    """What to do to a training split's labels."""

    kind: str = "none"
    p_noise: float = 0.0

    def validated(self) -> "NoiseSpec":
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind: {self.kind!r}")
        if not (0.0 <= self.p_noise <= 1.0 and math.isfinite(self.p_noise)):
            raise ValueError("p_noise must lie in [0, 1]")
        if self.kind == "none" and self.p_noise != 0.0:
            raise ValueError("noise kind 'none' requires p_noise = 0")
        return self

    @property
    def tag(self) -> str:
        """File-name-safe identifier for this setting."""
        if self.kind == "none":
            return "none"
        return f"{self.kind}-{self.p_noise:g}"


def _check_labels(labels: np.ndarray) -> np.ndarray:
    y = np.asarray(labels, dtype=np.float64)
    if y.ndim != 1 or not np.all(np.abs(y) == 1.0):
        raise ValueError("labels must be a 1-d array of +1/-1")
    return y


def inject_uniform(labels: np.ndarray, p: float,
                   rng: Union[int, np.random.Generator]) -> Tuple[np.ndarray, np.ndarray]:
    """Flip each label independently with probability p.

    rng may be a seed or a Generator (the harness passes keyed streams).
    Returns (new_labels, flipped_indices); deterministic given the stream.
    """
    y = _check_labels(labels)
    if not (0.0 <= p <= 1.0):
        raise ValueError("flip probability must lie in [0, 1]")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    flips = rng.random(y.shape[0]) < p
    out = np.where(flips, -y, y)
    return out, np.flatnonzero(flips)


def inject_adversarial(X: np.ndarray, labels: np.ndarray, p: float,
                       reference: Optional[StagewiseModel]) -> Tuple[np.ndarray, np.ndarray]:
    """Flip the labels of exactly ceil(p * n) samples with the largest
    reference margin y * score; ties at the cutoff break toward the lowest
    index.  The reference must have been fitted on the clean labels of the
    same split."""
    y = _check_labels(labels)
    if not (0.0 <= p <= 1.0):
        raise ValueError("flip probability must lie in [0, 1]")
    if reference is None:
        raise ValueError("adversarial noise requires a reference model")
    n = y.shape[0]
    count = int(math.ceil(p * n))
    if count == 0:
        return y.copy(), np.zeros(0, dtype=np.int64)
    margins = y * stagewise_scores(reference, X)
    order = np.argsort(-margins, kind="stable")
    chosen = np.sort(order[:count])
    out = y.copy()
    out[chosen] = -out[chosen]
    return out, chosen


def apply_noise(spec: NoiseSpec, X: np.ndarray, labels: np.ndarray,
                rng: Union[int, np.random.Generator, None] = None,
                reference: Optional[StagewiseModel] = None):
    """Dispatch on the noise setting; 'none' returns the labels copied,
    no flips."""
    spec = spec.validated()
    y = _check_labels(labels)
    if spec.kind == "none":
        return y.copy(), np.zeros(0, dtype=np.int64)
    if spec.kind == "uniform_symmetric":
        if rng is None:
            raise ValueError("uniform noise requires an RNG stream or seed")
        return inject_uniform(y, spec.p_noise, rng)
    return inject_adversarial(X, y, spec.p_noise, reference)
