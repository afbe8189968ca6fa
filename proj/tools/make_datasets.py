#!/usr/bin/env python3
"""Regenerate the bundled datasets under data/.

planted/   6 points x 3 attributes. Points P2 and P4 are pushed away from the
           others; the reference distances are those before the push (a = 1).
synthetic/ 8 points x 5 attributes in two categories, reference distances
           scaled by 2.5, points P3 and P7 pushed away.

Both pushes are multiples of the vector from the point to the mean of the
other points, so a move toward that mean undoes them.
"""
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data"


def push(x_true, points, factor):
    theta = np.zeros_like(x_true)
    for l in points:
        others = np.delete(x_true, l, axis=0)
        theta[l] = factor * (others.mean(axis=0) - x_true[l])
    return x_true - theta, theta


def distances(x):
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2))


def write_table(path, labels, header, values):
    with open(path, "w") as fh:
        fh.write(",".join(["label"] + header) + "\n")
        for lab, row in zip(labels, values):
            fh.write(",".join([lab] + [repr(float(v)) for v in row]) + "\n")


def planted():
    x_true = np.array([
        [1.0, 2.0, 0.5],
        [4.0, 1.5, 2.0],
        [2.5, 4.5, 1.0],
        [0.5, 3.5, 3.5],
        [3.5, 3.0, 4.0],
        [2.0, 0.5, 3.0],
    ])
    x_obs, theta = push(x_true, [1, 3], 8.0)
    labels = [f"P{i + 1}" for i in range(len(x_true))]
    out = ROOT / "planted"
    out.mkdir(parents=True, exist_ok=True)
    write_table(out / "target.csv", labels, ["A1", "A2", "A3"], x_obs)
    write_table(out / "reference.csv", labels, labels, distances(x_true))
    write_table(out / "theta_planted.csv", labels, ["A1", "A2", "A3"], theta)


def synthetic():
    rng = np.random.default_rng(20240611)
    x_true = np.round(rng.uniform(0.0, 6.0, size=(8, 5)), 3)
    x_obs, theta = push(x_true, [2, 6], 3.0)
    x_obs = np.round(x_obs, 6)
    labels = [f"P{i + 1}" for i in range(len(x_true))]
    attrs = ["Sweet", "Salty", "Bitter", "Crunchy", "Oily"]
    out = ROOT / "synthetic"
    out.mkdir(parents=True, exist_ok=True)
    write_table(out / "target.csv", labels, attrs, x_obs)
    write_table(out / "reference.csv", labels, labels, 2.5 * distances(x_true))
    with open(out / "categories.csv", "w") as fh:
        fh.write("attribute,category\n")
        for a in attrs:
            fh.write(f"{a},{'Flavor' if a in ('Sweet', 'Salty', 'Bitter') else 'Texture'}\n")


if __name__ == "__main__":
    planted()
    synthetic()
