#!/usr/bin/env python3
"""Download and prepare the benchmark datasets into data/<name>.csv.

Each dataset is fetched from its public source, converted to the flat
numeric CSV layout the library ingests (features, then a trailing ``label``
column holding +1/-1), and validated against the shape registry before it
is written.  Raw downloads are cached under data/raw/ so re-runs are cheap
and partial failures can be resumed.

Usage:
    python3 scripts/fetch_datasets.py              # fetch everything
    python3 scripts/fetch_datasets.py --only blood,raisin
    python3 scripts/fetch_datasets.py --selftest   # offline parser checks

The conversions applied, per dataset:

* diabetes       Pima diabetes CSV used as distributed (8 numeric columns,
                 label 1 = tested positive).
* german-numer   LIBSVM german.numer (24 numeric columns, labels already
                 +1/-1).
* credit         UCI crx screening data: the nine categorical columns are
                 integer-coded (sorted value order), '?' cells imputed with
                 the column mode (categorical) or median (continuous),
                 label '+' = +1.
* blood          UCI transfusion.data as distributed, label 1 = donated.
* titanic        Passenger manifest encoded to 8 numeric columns: Pclass,
                 Sex (female=0, male=1), Age (median-imputed), SibSp,
                 Parch, Fare, Embarked (C=0, Q=1, S=2, mode-imputed),
                 CabinKnown (0/1); label 1 = survived.
* raisin         UCI Raisin_Dataset.arff out of the distribution zip
                 (7 numeric columns), label Kecimen = +1, Besni = -1.
* qsar           UCI biodeg.csv (semicolon-separated, 41 numeric columns),
                 label RB (ready biodegradable) = +1.
* climate        UCI pop_failures.dat: the 18 simulation parameters, label
                 outcome 1 (run succeeded) = +1; the leading Study/Run
                 bookkeeping columns are dropped.
"""

from __future__ import annotations

import argparse
import csv
import io
import statistics
import sys
import urllib.request
import zipfile
from collections import Counter
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rmboost.data import Dataset, check_registry_shape, registry_entry, save_csv

DATA_DIR = Path(__file__).resolve().parents[1] / "data"
RAW_DIR = DATA_DIR / "raw"
TIMEOUT = 60.0

SOURCES = {
    "diabetes": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/"
                "pima-indians-diabetes.csv",
    "german-numer": "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/"
                    "binary/german.numer",
    "credit": "https://archive.ics.uci.edu/ml/machine-learning-databases/"
              "credit-screening/crx.data",
    "blood": "https://archive.ics.uci.edu/ml/machine-learning-databases/"
             "blood-transfusion/transfusion.data",
    "titanic": "https://raw.githubusercontent.com/datasciencedojo/datasets/"
               "master/titanic.csv",
    "raisin": "https://archive.ics.uci.edu/static/public/850/raisin.zip",
    "qsar": "https://archive.ics.uci.edu/ml/machine-learning-databases/"
            "00254/biodeg.csv",
    "climate": "https://archive.ics.uci.edu/ml/machine-learning-databases/"
               "00252/pop_failures.dat",
}


def download(name: str) -> bytes:
    RAW_DIR.mkdir(parents=True, exist_ok=True)
    url = SOURCES[name]
    cache = RAW_DIR / (name + Path(url).suffix)
    if cache.is_file() and cache.stat().st_size > 0:
        return cache.read_bytes()
    print(f"  downloading {url}")
    request = urllib.request.Request(url, headers={"User-Agent": "curl/8"})
    with urllib.request.urlopen(request, timeout=TIMEOUT) as response:
        payload = response.read()
    cache.write_bytes(payload)
    return payload


def _to_sign(values, positive) -> np.ndarray:
    return np.array([1.0 if v == positive else -1.0 for v in values])


def _mode(values):
    counts = Counter(values)
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)


def prepare_diabetes(payload: bytes) -> Dataset:
    rows = [line.split(",") for line in payload.decode().splitlines() if line.strip()]
    X = np.array([[float(cell) for cell in row[:8]] for row in rows])
    y = _to_sign([row[8].strip() for row in rows], "1")
    return Dataset(X, y, name="diabetes")


def prepare_german_numer(payload: bytes) -> Dataset:
    X_rows, labels = [], []
    for line in payload.decode().splitlines():
        parts = line.split()
        if not parts:
            continue
        labels.append(float(parts[0]))
        features = [0.0] * 24
        for item in parts[1:]:
            index, value = item.split(":")
            features[int(index) - 1] = float(value)
        X_rows.append(features)
    return Dataset(np.array(X_rows), np.array(labels), name="german-numer")


CRX_CATEGORICAL = (0, 3, 4, 5, 6, 8, 9, 11, 12)


def prepare_credit(payload: bytes) -> Dataset:
    rows = [line.split(",") for line in payload.decode().splitlines() if line.strip()]
    n = len(rows)
    X = np.zeros((n, 15))
    for j in range(15):
        column = [row[j].strip() for row in rows]
        present = [v for v in column if v != "?"]
        if j in CRX_CATEGORICAL:
            codes = {v: float(k) for k, v in enumerate(sorted(set(present)))}
            fill = codes[_mode(present)]
            X[:, j] = [codes[v] if v != "?" else fill for v in column]
        else:
            fill = statistics.median(float(v) for v in present)
            X[:, j] = [float(v) if v != "?" else fill for v in column]
    y = _to_sign([row[15].strip() for row in rows], "+")
    return Dataset(X, y, name="credit")


def prepare_blood(payload: bytes) -> Dataset:
    rows = [line.split(",") for line in payload.decode().splitlines() if line.strip()]
    body = rows[1:]  # header names the five columns
    X = np.array([[float(cell) for cell in row[:4]] for row in body])
    y = _to_sign([row[4].strip() for row in body], "1")
    return Dataset(X, y, name="blood")


def prepare_titanic(payload: bytes) -> Dataset:
    reader = csv.DictReader(io.StringIO(payload.decode()))
    rows = list(reader)
    ages = [float(r["Age"]) for r in rows if r["Age"] not in ("", None)]
    age_fill = statistics.median(ages)
    embarked_codes = {"C": 0.0, "Q": 1.0, "S": 2.0}
    embarked_fill = embarked_codes[_mode(
        [r["Embarked"] for r in rows if r["Embarked"]])]

    X = np.zeros((len(rows), 8))
    y = np.zeros(len(rows))
    for i, r in enumerate(rows):
        X[i] = (
            float(r["Pclass"]),
            0.0 if r["Sex"] == "female" else 1.0,
            float(r["Age"]) if r["Age"] else age_fill,
            float(r["SibSp"]),
            float(r["Parch"]),
            float(r["Fare"]),
            embarked_codes.get(r["Embarked"], embarked_fill),
            0.0 if not r["Cabin"] else 1.0,
        )
        y[i] = 1.0 if r["Survived"] == "1" else -1.0
    names = ["Pclass", "Sex", "Age", "SibSp", "Parch", "Fare", "Embarked",
             "CabinKnown"]
    return Dataset(X, y, name="titanic", feature_names=names)


def prepare_raisin(payload: bytes) -> Dataset:
    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        arff_name = next(n for n in archive.namelist()
                         if n.lower().endswith(".arff"))
        text = archive.read(arff_name).decode()
    X_rows, labels = [], []
    in_data = False
    for line in text.splitlines():
        line = line.strip()
        if not in_data:
            in_data = line.lower().startswith("@data")
            continue
        if not line or line.startswith("%"):
            continue
        cells = line.split(",")
        X_rows.append([float(c) for c in cells[:7]])
        labels.append(cells[7].strip())
    y = _to_sign(labels, "Kecimen")
    return Dataset(np.array(X_rows), y, name="raisin")


def prepare_qsar(payload: bytes) -> Dataset:
    rows = [line.split(";") for line in payload.decode().splitlines() if line.strip()]
    X = np.array([[float(cell) for cell in row[:41]] for row in rows])
    y = _to_sign([row[41].strip() for row in rows], "RB")
    return Dataset(X, y, name="qsar")


def prepare_climate(payload: bytes) -> Dataset:
    lines = [ln.split() for ln in payload.decode().splitlines() if ln.strip()]
    header, body = lines[0], lines[1:]
    names = header[2:20]
    X = np.array([[float(cell) for cell in row[2:20]] for row in body])
    y = _to_sign([row[20] for row in body], "1")
    return Dataset(X, y, name="climate", feature_names=names)


PREPARERS = {
    "diabetes": prepare_diabetes,
    "german-numer": prepare_german_numer,
    "credit": prepare_credit,
    "blood": prepare_blood,
    "titanic": prepare_titanic,
    "raisin": prepare_raisin,
    "qsar": prepare_qsar,
    "climate": prepare_climate,
}


def fetch(name: str) -> Path:
    entry = registry_entry(name)
    dataset = PREPARERS[name](download(name)).validated()
    check_registry_shape(dataset, entry)
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    out = DATA_DIR / f"{name}.csv"
    save_csv(dataset, out)
    print(f"  wrote {out} ({dataset.n} rows, {dataset.d} features)")
    return out


# --------------------------------------------------------------------------
# Offline self-test: each preparer against a miniature synthetic payload in
# the exact raw format its source serves.  Checks parsing, imputation, and
# label mapping without any network access.
# --------------------------------------------------------------------------

def _selftest() -> None:
    d = prepare_diabetes(b"1,85,66,29,0,26.6,0.351,31,0\n8,183,64,0,0,23.3,0.672,32,1\n")
    assert d.X.shape == (2, 8) and d.y.tolist() == [-1.0, 1.0]

    g = prepare_german_numer(b"+1 1:0.5 24:1\n-1 2:3\n")
    assert g.X.shape == (2, 24)
    assert g.X[0, 0] == 0.5 and g.X[0, 23] == 1.0 and g.X[1, 1] == 3.0
    assert g.y.tolist() == [1.0, -1.0]

    crx = ("b,30.83,0,u,g,w,v,1.25,t,t,1,f,g,00202,0,+\n"
           "a,58.67,4.46,u,g,q,h,3.04,t,t,6,f,g,00043,560,-\n"
           "?,24.50,0.5,y,g,q,h,1.5,t,f,0,f,g,00280,824,+\n")
    c = prepare_credit(crx.encode())
    assert c.X.shape == (3, 15)
    # '?' in the first (categorical) column imputes to the tied-mode value
    # 'a' -> code 0; labels map '+' to +1.
    assert c.X[2, 0] == 0.0
    assert c.y.tolist() == [1.0, -1.0, 1.0]

    b = prepare_blood(b"R,F,M,T,Donated\n2,50,12500,98,1\n0,13,3250,28,0\n")
    assert b.X.shape == (2, 4) and b.y.tolist() == [1.0, -1.0]

    t = prepare_titanic(
        b"PassengerId,Survived,Pclass,Name,Sex,Age,SibSp,Parch,Ticket,Fare,Cabin,Embarked\n"
        b'1,0,3,"Braund, Mr. Owen",male,22,1,0,A/5,7.25,,S\n'
        b"2,1,1,\"Cumings, Mrs. John\",female,38,1,0,PC,71.28,C85,C\n"
        b"3,1,3,\"Moran, Mr. James\",male,,0,0,330877,8.46,,S\n")
    assert t.X.shape == (3, 8)
    assert t.X[0].tolist() == [3, 1, 22, 1, 0, 7.25, 2, 0]
    assert t.X[2, 2] == 30.0  # median of {22, 38} imputed for missing Age
    assert t.y.tolist() == [-1.0, 1.0, 1.0]

    arff = ("@relation raisin\n@attribute Area numeric\n@data\n"
            "87524,442.2,253.3,0.82,90546,0.76,1184.04,Kecimen\n"
            "75166,406.7,243.0,0.80,78789,0.68,1121.79,Besni\n")
    payload = io.BytesIO()
    with zipfile.ZipFile(payload, "w") as archive:
        archive.writestr("Raisin_Dataset/Raisin_Dataset.arff", arff)
    r = prepare_raisin(payload.getvalue())
    assert r.X.shape == (2, 7) and r.y.tolist() == [1.0, -1.0]

    q = prepare_qsar((";".join(["1.0"] * 41) + ";RB\n"
                      + ";".join(["2.0"] * 41) + ";NRB\n").encode())
    assert q.X.shape == (2, 41) and q.y.tolist() == [1.0, -1.0]

    cl = prepare_climate(
        ("Study Run " + " ".join(f"p{i}" for i in range(18)) + " outcome\n"
         "1 1 " + " ".join(["0.5"] * 18) + " 1\n"
         "1 2 " + " ".join(["0.6"] * 18) + " 0\n").encode())
    assert cl.X.shape == (2, 18) and cl.y.tolist() == [1.0, -1.0]

    print("selftest: all preparers parse, impute, and map labels correctly")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", default=None,
                        help="comma-separated subset of dataset names")
    parser.add_argument("--selftest", action="store_true",
                        help="run offline parser checks and exit")
    args = parser.parse_args(argv)

    if args.selftest:
        _selftest()
        return 0

    names = list(PREPARERS) if args.only is None else [
        n.strip() for n in args.only.split(",") if n.strip()]
    unknown = [n for n in names if n not in PREPARERS]
    if unknown:
        parser.error(f"unknown dataset names: {unknown}")

    failures = []
    for name in names:
        print(f"{name}:")
        try:
            fetch(name)
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures.append(name)
            print(f"  FAILED: {exc}")
    if failures:
        print(f"\n{len(failures)} dataset(s) failed: {', '.join(failures)}")
        return 1
    print("\nall datasets prepared and shape-checked")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
