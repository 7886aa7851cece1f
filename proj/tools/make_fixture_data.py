#!/usr/bin/env python3
"""Builds tests/data/ucr: small real UCR problems plus regenerated synthetic ones.

Real problems are copied from a directory of already-downloaded files (the
copies bundled with aeon/sktime/pyts/tslearn wheels work). The synthetic
problems (CBF, SyntheticControl, TwoPatterns, BME, UMD) are regenerated from
their generative definitions with a fixed seed, at reduced sizes so every
training split has at most 100 cases.
"""

import argparse
import pathlib
import shutil

import numpy as np

REAL = [
    ("ArrowHead_TRAIN.ts", "ArrowHead_TEST.ts"),
    ("GunPoint_TRAIN.ts", "GunPoint_TEST.ts"),
    ("ItalyPowerDemand_TRAIN.ts", "ItalyPowerDemand_TEST.ts"),
    ("Coffee_TRAIN.txt", "Coffee_TEST.txt"),
]


def write_ts(path, name, x, y, note=None):
    classes = " ".join(str(c) for c in sorted(set(y)))
    with open(path, "w") as f:
        if note:
            f.write(f"# {note}\n")
        f.write(f"@problemName {name}\n@timeStamps false\n@missing false\n@univariate true\n")
        f.write(f"@equalLength true\n@seriesLength {x.shape[1]}\n@classLabel true {classes}\n@data\n")
        for row, label in zip(x, y):
            f.write(",".join(f"{v:.6g}" for v in row) + f":{label}\n")


def cbf(rng, n_per_class, m=128):
    x, y = [], []
    t = np.arange(1, m + 1)
    for c in range(3):
        for _ in range(n_per_class):
            a = rng.uniform(16, 32)
            b = a + rng.uniform(32, 96)
            eta = rng.normal()
            inside = (t >= a) & (t <= b)
            if c == 0:
                shape = inside * 1.0
            elif c == 1:
                shape = inside * (t - a) / (b - a)
            else:
                shape = inside * (b - t) / (b - a)
            x.append((6 + eta) * shape + rng.normal(size=m))
            y.append(c + 1)
    return np.array(x), y


def synthetic_control(rng, n_per_class, m=60):
    x, y = [], []
    t = np.arange(m)
    for c in range(6):
        for _ in range(n_per_class):
            base = 30 + 2 * rng.uniform(-3, 3, size=m)
            if c == 1:
                base += rng.uniform(10, 15) * np.sin(2 * np.pi * t / rng.uniform(10, 15))
            elif c == 2:
                base += rng.uniform(0.2, 0.5) * t
            elif c == 3:
                base -= rng.uniform(0.2, 0.5) * t
            elif c in (4, 5):
                start = rng.integers(m // 3, 2 * m // 3)
                step = rng.uniform(7.5, 20) * (t >= start)
                base += step if c == 4 else -step
            x.append(base)
            y.append(c + 1)
    return np.array(x), y


def two_patterns(rng, n_per_class, m=128):
    def pattern(up, length):
        half = length // 2
        seg = np.concatenate([-5 * np.ones(half), 5 * np.ones(length - half)])
        return seg if up else -seg

    x, y = [], []
    for c in range(4):
        first_up, second_up = c in (0, 1), c in (0, 2)
        for _ in range(n_per_class):
            s = rng.normal(size=m)
            l1, l2 = rng.integers(16, 33), rng.integers(16, 33)
            p1 = rng.integers(0, m // 2 - l1)
            p2 = rng.integers(m // 2, m - l2)
            s[p1:p1 + l1] = pattern(first_up, l1)
            s[p2:p2 + l2] = pattern(second_up, l2)
            x.append(s)
            y.append(c + 1)
    return np.array(x), y


def bell(t, centre, width, height):
    return height * np.exp(-0.5 * ((t - centre) / width) ** 2)


def bme(rng, n_per_class, m=128):
    # A small bump at the beginning, middle or end, with a distracting plateau.
    t = np.arange(m)
    x, y = [], []
    for c in range(3):
        for _ in range(n_per_class):
            centre = [0.12, 0.5, 0.88][c] * m + rng.uniform(-6, 6)
            s = bell(t, centre, rng.uniform(3, 6), rng.uniform(2, 3))
            plateau = rng.integers(m // 4, 3 * m // 4)
            s[plateau:plateau + 10] += 1.0
            x.append(s + 0.3 * rng.normal(size=m))
            y.append(c + 1)
    return np.array(x), y


def umd(rng, n_per_class, m=150):
    # A central bump pointing up, absent, or pointing down, at a jittered position.
    t = np.arange(m)
    x, y = [], []
    for c in range(3):
        for _ in range(n_per_class):
            centre = m / 2 + rng.uniform(-25, 25)
            sign = [1.0, 0.0, -1.0][c]
            s = sign * bell(t, centre, rng.uniform(5, 10), rng.uniform(2, 3))
            x.append(s + 0.3 * rng.normal(size=m))
            y.append(c + 1)
    return np.array(x), y


SYNTHETIC = [
    ("CBF", cbf, 10, 100),
    ("SyntheticControl", synthetic_control, 10, 20),
    ("TwoPatterns", two_patterns, 25, 50),
    ("BME", bme, 10, 50),
    ("UMD", umd, 12, 48),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--real", required=True, type=pathlib.Path,
                    help="directory with the downloaded real files and Trace.npz")
    ap.add_argument("--out", required=True, type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for pair in REAL:
        for name in pair:
            shutil.copyfile(args.real / name, args.out / name)
    # The Chinatown problem ships under the name UnitTest.
    for split in ("TRAIN", "TEST"):
        text = (args.real / f"UnitTest_{split}.ts").read_text()
        (args.out / f"Chinatown_{split}.ts").write_text(
            text.replace("@problemName UnitTest", "@problemName Chinatown"))

    z = np.load(args.real / "Trace.npz", allow_pickle=True)
    for split in ("train", "test"):
        x = z[f"X_{split}"][:, :, 0]
        y = [int(v) for v in z[f"y_{split}"]]
        write_ts(args.out / f"Trace_{split.upper()}.ts", "Trace", x, y)

    rng = np.random.default_rng(args.seed)
    for name, gen, n_train, n_test in SYNTHETIC:
        note = "regenerated synthetic problem, not the archive copy"
        x, y = gen(rng, n_train)
        write_ts(args.out / f"{name}_TRAIN.ts", name, x, y, note)
        x, y = gen(rng, n_test)
        write_ts(args.out / f"{name}_TEST.ts", name, x, y, note)


if __name__ == "__main__":
    main()
