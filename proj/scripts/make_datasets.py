#!/usr/bin/env python3
"""Regenerate the bundled KEEL-format data files under data/.

iris, wine and wdbc are written from scikit-learn's bundled copies of the
UCI originals (identical to the KEEL versions of these datasets).

The remaining benchmark files (wisconsin, glass, sonar, ...) are not
redistributed here; download them from the KEEL classification repository
at https://sci2s.ugr.es/keel/category.php?cat=clas and unzip the .dat
files into data/.
"""

import os

from sklearn.datasets import load_breast_cancer, load_iris, load_wine

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


def fmt(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def write_keel(name, attrs, classes, rows, labels):
    path = os.path.join(OUT_DIR, f"{name}.dat")
    with open(path, "w", newline="\n") as f:
        f.write(f"@relation {name}\n")
        for j, attr in enumerate(attrs):
            lo = min(r[j] for r in rows)
            hi = max(r[j] for r in rows)
            f.write(f"@attribute {attr} real [{fmt(lo)}, {fmt(hi)}]\n")
        f.write("@attribute class {" + ", ".join(classes) + "}\n")
        f.write("@inputs " + ", ".join(attrs) + "\n")
        f.write("@outputs class\n")
        f.write("@data\n")
        for row, y in zip(rows, labels):
            f.write(",".join(fmt(v) for v in row) + "," + classes[y] + "\n")
    print(f"wrote {path}: {len(rows)} rows, {len(attrs)} features")


def sanitize(name: str) -> str:
    return name.replace(" ", "_").replace("(", "").replace(")", "").replace("/", "_")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)

    iris = load_iris()
    write_keel(
        "iris",
        ["sepalLength", "sepalWidth", "petalLength", "petalWidth"],
        ["Iris-setosa", "Iris-versicolor", "Iris-virginica"],
        iris.data.tolist(),
        iris.target.tolist(),
    )

    wine = load_wine()
    write_keel(
        "wine",
        [sanitize(n) for n in wine.feature_names],
        ["1", "2", "3"],
        wine.data.tolist(),
        wine.target.tolist(),
    )

    wdbc = load_breast_cancer()
    # sklearn encodes malignant as 0, benign as 1; KEEL uses M/B tokens.
    write_keel(
        "wdbc",
        [sanitize(n) for n in wdbc.feature_names],
        ["M", "B"],
        wdbc.data.tolist(),
        wdbc.target.tolist(),
    )


if __name__ == "__main__":
    main()
