"""Dataset ingestion, label normalization, stratified splitting, and the
registry of benchmark datasets.

The library only ingests flat numeric CSVs; categorical source data is
converted by the documented preparation script (scripts/fetch_datasets.py)
before it ever reaches this module.  Feature scaling is deliberately
absent: threshold rules are invariant to per-feature monotone maps.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np


@dataclass
class Dataset:
    """Feature matrix with +-1 labels."""

    X: np.ndarray
    y: np.ndarray
    name: str = ""
    feature_names: Optional[List[str]] = None

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def validated(self) -> "Dataset":
        if self.X.ndim != 2 or self.y.shape != (self.X.shape[0],):
            raise ValueError("X must be (n, d) with one label per row")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("feature matrix contains non-finite entries")
        if not np.all(np.abs(self.y) == 1.0):
            raise ValueError("labels must be +1 or -1")
        if self.feature_names is not None and len(self.feature_names) != self.d:
            raise ValueError("feature_names length does not match d")
        return self


@dataclass(frozen=True)
class SplitSpec:
    """Repeated stratified train/test partition settings."""

    test_fraction: float = 0.1
    n_repeats: int = 100
    seed: int = 0

    def validated(self) -> "SplitSpec":
        if not (0.0 < self.test_fraction < 1.0):
            raise ValueError("test_fraction must lie strictly between 0 and 1")
        if self.n_repeats < 1:
            raise ValueError("n_repeats must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        return self


def _default_label_map(tokens: List[str]) -> Dict[str, float]:
    """Map two distinct label tokens to -1/+1.

    Numeric convention first: a token parsing to 0 or -1 goes to -1 and one
    parsing to 1 goes to +1; if that fails to separate the two tokens, the
    lexicographically smaller token goes to -1.
    """

    def numeric_side(tok: str) -> Optional[float]:
        try:
            v = float(tok)
        except ValueError:
            return None
        if v in (0.0, -1.0):
            return -1.0
        if v == 1.0:
            return 1.0
        return None

    a, b = sorted(tokens)
    na, nb = numeric_side(a), numeric_side(b)
    if na is not None and nb is not None and na != nb:
        return {a: na, b: nb}
    return {a: -1.0, b: 1.0}


def load_csv(path: Union[str, Path], has_header: Optional[bool] = None,
             label_column: Union[int, str] = -1,
             label_mapping: Optional[Dict[str, float]] = None,
             name: Optional[str] = None) -> Dataset:
    """Parse a numeric CSV with one label column into a Dataset.

    has_header None autodetects: the first row is a header when any of its
    non-label cells fails to parse as a number (an all-numeric header
    cannot be detected; pass has_header=True for those).  label_column may
    be an index (negative allowed) or, with a header, a column name.
    Labels are mapped to -1/+1 by label_mapping when given, else by the
    default convention; exactly two distinct label tokens are required.
    Errors cite 1-based physical row numbers.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        raw = [row for row in csv.reader(fh)]
    rows = [(i + 1, [cell.strip() for cell in row])
            for i, row in enumerate(raw) if any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError(f"{path}: empty file")

    header: Optional[List[str]] = None
    if isinstance(label_column, str):
        if has_header is False:
            raise ValueError("label_column by name requires a header row")
        has_header = True

    first_cells = rows[0][1]
    width = len(first_cells)
    if width < 2:
        raise ValueError(f"{path}: need at least one feature column and a label column")

    def resolve_index(col: Union[int, str], names: Optional[List[str]]) -> int:
        if isinstance(col, str):
            assert names is not None
            if col not in names:
                raise ValueError(f"{path}: no column named {col!r} in header")
            return names.index(col)
        idx = col if col >= 0 else width + col
        if not (0 <= idx < width):
            raise ValueError(f"{path}: label column {col} out of range for "
                             f"{width} columns")
        return idx

    if has_header is None:
        probe = resolve_index(label_column if not isinstance(label_column, str) else -1,
                              None)
        def is_number(tok: str) -> bool:
            try:
                float(tok)
            except ValueError:
                return False
            return True
        has_header = any(not is_number(c)
                         for j, c in enumerate(first_cells) if j != probe)

    if has_header:
        header = first_cells
        data_rows = rows[1:]
        if not data_rows:
            raise ValueError(f"{path}: no data rows after the header")
    else:
        data_rows = rows

    label_idx = resolve_index(label_column, header)

    col_name = (header[label_idx] if header else f"column {label_idx}")
    n = len(data_rows)
    d = width - 1
    X = np.empty((n, d))
    tokens: List[str] = []
    for r, (lineno, cells) in enumerate(data_rows):
        if len(cells) != width:
            raise ValueError(f"{path}: row {lineno}: expected {width} columns, "
                             f"found {len(cells)}")
        j_out = 0
        for j, cell in enumerate(cells):
            if j == label_idx:
                tokens.append(cell)
                continue
            try:
                v = float(cell)
            except ValueError:
                cname = header[j] if header else f"column {j}"
                raise ValueError(f"{path}: row {lineno}, {cname}: cannot parse "
                                 f"{cell!r} as a number") from None
            if not math.isfinite(v):
                cname = header[j] if header else f"column {j}"
                raise ValueError(f"{path}: row {lineno}, {cname}: non-finite "
                                 f"value {cell!r}")
            X[r, j_out] = v
            j_out += 1

    distinct = sorted(set(tokens))
    if label_mapping is None:
        if len(distinct) != 2:
            raise ValueError(f"{path}: label column {col_name!r} must contain "
                             f"exactly 2 distinct values, found {len(distinct)}: "
                             f"{distinct[:5]}")
        mapping = _default_label_map(distinct)
    else:
        mapping = {str(k): float(v) for k, v in label_mapping.items()}
        if any(v not in (-1.0, 1.0) for v in mapping.values()):
            raise ValueError("label_mapping values must be -1 or +1")
        missing = [t for t in distinct if t not in mapping]
        if missing:
            raise ValueError(f"{path}: label tokens not covered by "
                             f"label_mapping: {missing[:5]}")
    y = np.array([mapping[t] for t in tokens])

    feature_names = None
    if header is not None:
        feature_names = [h for j, h in enumerate(header) if j != label_idx]
    return Dataset(X=X, y=y, name=name or path.stem,
                   feature_names=feature_names).validated()


def load_features_csv(path: Union[str, Path],
                      has_header: Optional[bool] = None):
    """Parse a CSV of features only (no label column).

    Returns (X, feature_names); feature_names is None without a header.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        raw = [row for row in csv.reader(fh)]
    rows = [(i + 1, [cell.strip() for cell in row])
            for i, row in enumerate(raw) if any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    first_cells = rows[0][1]
    width = len(first_cells)
    if has_header is None:
        def is_number(tok: str) -> bool:
            try:
                float(tok)
            except ValueError:
                return False
            return True
        has_header = any(not is_number(c) for c in first_cells)
    header = first_cells if has_header else None
    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise ValueError(f"{path}: no data rows after the header")
    X = np.empty((len(data_rows), width))
    for r, (lineno, cells) in enumerate(data_rows):
        if len(cells) != width:
            raise ValueError(f"{path}: row {lineno}: expected {width} columns, "
                             f"found {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                cname = header[j] if header else f"column {j}"
                raise ValueError(f"{path}: row {lineno}, {cname}: cannot parse "
                                 f"{cell!r} as a number") from None
            if not math.isfinite(v):
                cname = header[j] if header else f"column {j}"
                raise ValueError(f"{path}: row {lineno}, {cname}: non-finite "
                                 f"value {cell!r}")
            X[r, j] = v
    return X, header


def save_csv(dataset: Dataset, path: Union[str, Path]) -> None:
    """Write a Dataset as a numeric CSV that load_csv round-trips bit-exactly
    (features via shortest round-trip decimal repr, labels as 1/-1)."""
    ds = dataset.validated()
    path = Path(path)
    names = ds.feature_names or [f"f{j}" for j in range(ds.d)]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + ["label"])
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.X[i]]
            row.append("1" if ds.y[i] > 0 else "-1")
            writer.writerow(row)


def stratified_split(data: Dataset, spec: SplitSpec,
                     repeat_index: int) -> Tuple[Dataset, Dataset]:
    """Class-stratified train/test partition, deterministic given
    (spec.seed, repeat_index).

    Per class the test share is test_fraction rounded to nearest, at least
    1 and at most class size - 1; both classes need at least 2 members.
    """
    ds = data.validated()
    spec = spec.validated()
    if repeat_index < 0:
        raise ValueError("repeat_index must be nonnegative")
    rng = np.random.default_rng(np.random.SeedSequence((spec.seed, repeat_index)))
    test_parts = []
    train_parts = []
    for cls in (-1.0, 1.0):
        idx = np.flatnonzero(ds.y == cls)
        if idx.shape[0] < 2:
            raise ValueError(f"class {cls:+.0f} has {idx.shape[0]} member(s); "
                             "need at least 2 for a stratified split")
        k = int(math.floor(spec.test_fraction * idx.shape[0] + 0.5))
        k = max(1, min(k, idx.shape[0] - 1))
        perm = rng.permutation(idx)
        test_parts.append(perm[:k])
        train_parts.append(perm[k:])
    test_idx = np.sort(np.concatenate(test_parts))
    train_idx = np.sort(np.concatenate(train_parts))
    train = Dataset(ds.X[train_idx], ds.y[train_idx], name=ds.name,
                    feature_names=ds.feature_names)
    test = Dataset(ds.X[test_idx], ds.y[test_idx], name=ds.name,
                   feature_names=ds.feature_names)
    return train, test


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    n_rows: int
    n_features: int
    source_note: str


_REGISTRY = (
    RegistryEntry("diabetes", 768, 8,
                  "Pima Indians diabetes (UCI); all-numeric as distributed"),
    RegistryEntry("german-numer", 1000, 24,
                  "Statlog German credit, numeric encoding (LIBSVM german.numer)"),
    RegistryEntry("credit", 690, 15,
                  "Australian/crx credit screening (UCI); categoricals integer-coded "
                  "and missing cells imputed by the preparation script"),
    RegistryEntry("blood", 748, 4,
                  "Blood transfusion service center (UCI)"),
    RegistryEntry("titanic", 891, 8,
                  "Titanic survival; preparation script encodes to 8 numeric columns"),
    RegistryEntry("raisin", 900, 7,
                  "Raisin grain measurements (UCI)"),
    RegistryEntry("qsar", 1055, 41,
                  "QSAR biodegradation molecular descriptors (UCI)"),
    RegistryEntry("climate", 540, 18,
                  "Climate model simulation crashes (UCI)"),
)


def dataset_registry() -> Tuple[RegistryEntry, ...]:
    """The 8 benchmark datasets with their expected ingestion shapes."""
    return _REGISTRY


def registry_entry(name: str) -> RegistryEntry:
    for entry in _REGISTRY:
        if entry.name == name:
            return entry
    known = ", ".join(e.name for e in _REGISTRY)
    raise ValueError(f"unknown dataset {name!r}; registry has: {known}")


def check_registry_shape(dataset: Dataset, entry: RegistryEntry) -> None:
    """Hard error on shape mismatch, protecting benchmark runs from
    silently wrong downloads."""
    if (dataset.n, dataset.d) != (entry.n_rows, entry.n_features):
        raise ValueError(
            f"dataset {entry.name!r} has shape ({dataset.n}, {dataset.d}), "
            f"registry expects ({entry.n_rows}, {entry.n_features}); "
            "re-run the fetch script or fix the CSV")
