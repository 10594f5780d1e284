"""Regenerate the bundled test datasets under tests/data/.

iris.csv comes from scikit-learn's canonical copy (150 rows, 4 attributes,
three classes of 50). The *_like.csv files are deterministic surrogates with
the same shape, class counts, and separability regime as the UCI originals
(Wisconsin Breast Cancer 9-attribute, Ionosphere, Seeds), for use where the
real files are not redistributable alongside this repository. Drop the real
UCI CSVs into tests/data/real/ (wbc.csv, ionosphere.csv, seeds.csv, columns
named with a final "class" label column) and the test suite prefers them.

Run: python3 tools/make_fixtures.py
"""

import csv
import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(HERE, "..", "tests", "data")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def make_iris():
    from sklearn.datasets import load_iris

    iris = load_iris()
    names = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    rows = []
    for x, y in zip(iris.data, iris.target):
        rows.append([f"{v:g}" for v in x] + [iris.target_names[y]])
    write_csv(os.path.join(DATA_DIR, "iris.csv"), names + ["class"], rows)


def make_wbc_like(seed=20240811):
    """683 integer-grid rows on 1..10, benign 444 / malignant 239.

    Benign cases concentrate at the low end of every attribute, malignant
    cases sit high with heavier spread, and a thin sliver of each class is
    pushed into the overlap so a linear discriminant lands near 97-98%
    training accuracy with its errors confined to a narrow projection band.
    """
    rng = np.random.default_rng(seed)
    attrs = [f"a{i+1}" for i in range(9)]

    def sample(n, center, spread, skew):
        base = rng.normal(center, spread, size=(n, 9))
        base += skew * rng.normal(0, 1, size=(n, 1))  # shared severity factor
        return np.clip(np.rint(base), 1, 10).astype(int)

    benign = sample(444, 1.7, 0.9, 0.6)
    malignant = sample(239, 6.9, 1.9, 1.5)
    # overlap sliver: mild malignant and noisy benign cases
    n_hard_m, n_hard_b = 10, 7
    malignant[:n_hard_m] = np.clip(
        np.rint(rng.normal(3.0, 1.0, size=(n_hard_m, 9))), 1, 10)
    benign[:n_hard_b] = np.clip(
        np.rint(rng.normal(4.0, 1.2, size=(n_hard_b, 9))), 1, 10)

    rows = [list(map(str, r)) + ["benign"] for r in benign]
    rows += [list(map(str, r)) + ["malignant"] for r in malignant]
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    write_csv(os.path.join(DATA_DIR, "wbc_like.csv"), attrs + ["class"], rows)


def make_ionosphere_like(seed=20240812):
    """351 rows x 34 attributes in [-1, 1], good 225 / bad 126.

    Good returns follow a smooth damped-oscillation profile; bad returns are
    noise-dominated with erratic phase. The class boundary is mostly radial
    (signal energy), so a linear model plateaus near 90% while a polynomial
    kernel expansion separates almost perfectly.
    """
    rng = np.random.default_rng(seed)
    attrs = [f"a{i+1}" for i in range(34)]
    t = np.arange(17)

    def coherent_pulse():
        amp = rng.uniform(0.55, 1.0)
        decay = rng.uniform(0.02, 0.09)
        phase = rng.uniform(-0.9, 0.9)
        freq = rng.uniform(0.18, 0.5)
        noise = rng.normal(0, 0.12, size=(2, 17))
        re = amp * np.exp(-decay * t) * np.cos(freq * t + phase) + noise[0]
        im = amp * np.exp(-decay * t) * np.sin(freq * t + phase) + noise[1]
        return re, im

    def interleave(re, im):
        row = np.empty(34)
        row[0::2] = re
        row[1::2] = im
        return np.clip(row, -1, 1)

    good = np.array([interleave(*coherent_pulse()) for _ in range(225)])

    bad_rows = []
    for i in range(126):
        kind = i % 3
        if kind == 0:  # noise with a good-like leading edge
            re = rng.normal(0, 0.5, size=17)
            im = rng.normal(0, 0.5, size=17)
            re[0] = rng.uniform(0.4, 1.0)
        elif kind == 1:  # coherent pulse, tail phase-scrambled: linear stats
            re, im = coherent_pulse()  # stay good-like, coherence is broken
            scram = rng.permutation(np.arange(4, 17))
            re[4:] = re[scram] * rng.choice([-1.0, 1.0], size=13)
            im[4:] = im[scram] * rng.choice([-1.0, 1.0], size=13)
        else:  # saturated erratic
            re = rng.choice([-1.0, 1.0], size=17) * rng.uniform(0.5, 1.0, 17)
            im = rng.normal(0, 0.55, size=17)
        bad_rows.append(interleave(re, im))
    bad = np.array(bad_rows)
    rows = [[f"{v:.5f}" for v in r] + ["g"] for r in good]
    rows += [[f"{v:.5f}" for v in r] + ["b"] for r in bad]
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    write_csv(os.path.join(DATA_DIR, "ionosphere_like.csv"), attrs + ["class"], rows)


def make_seeds_like(seed=20240813):
    """210 rows x 7 attributes, three classes of 70 (wheat-kernel regime)."""
    rng = np.random.default_rng(seed)
    attrs = ["area", "perimeter", "compactness", "length", "width",
             "asymmetry", "groove_length"]
    centers = {
        "1": [14.3, 14.3, 0.880, 5.5, 3.2, 2.7, 5.1],
        "2": [18.3, 16.1, 0.885, 6.1, 3.7, 3.6, 6.0],
        "3": [11.9, 13.2, 0.850, 5.2, 2.9, 4.8, 5.1],
    }
    spread = [1.2, 0.6, 0.015, 0.25, 0.18, 1.2, 0.25]
    rows = []
    for cls, mu in centers.items():
        pts = rng.normal(mu, spread, size=(70, 7))
        rows += [[f"{v:.4f}" for v in p] + [cls] for p in pts]
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    write_csv(os.path.join(DATA_DIR, "seeds_like.csv"), attrs + ["class"], rows)


if __name__ == "__main__":
    os.makedirs(DATA_DIR, exist_ok=True)
    make_iris()
    make_wbc_like()
    make_ionosphere_like()
    make_seeds_like()
