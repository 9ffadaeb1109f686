#!/usr/bin/env python3
"""Seeded search for a K=2, M=2 GDB instance with an indefinite weighting
matrix whose interference map has two fixed points with C(beta) PSD, where
h_k^H B^{-1} h_k < 0 for both users (so the projected iteration is trapped at
the origin). Writes the first hit as a GDB instance file.

    python3 tools/find_two_fixed_point.py --seed 0 --out tests/fixtures/two_fixed_point.json
"""
import argparse
import json

import numpy as np
from scipy.optimize import fsolve


def c_matrix(beta, B, H):
    return B + sum(beta[j] * np.outer(H[j], H[j].conj()) for j in range(len(H)))


def imap(beta, B, H, g):
    C = c_matrix(beta, B, H)
    return np.array([g[k] / (g[k] + 1) / np.real(H[k].conj() @ np.linalg.solve(C, H[k]))
                     for k in range(len(H))])


def fpi(beta0, B, H, g, max_iter=20000):
    b = np.array(beta0, float)
    for _ in range(max_iter):
        nb = imap(b, B, H, g)
        if not np.all(np.isfinite(nb)) or np.max(np.abs(nb)) > 1e12:
            return None
        if np.linalg.norm(nb - b) < 1e-12:
            return nb
        b = nb
    return None


def psd(beta, B, H, tol=1e-9):
    return np.min(np.linalg.eigvalsh(c_matrix(beta, B, H))) >= -tol


def search(seed):
    rng = np.random.default_rng(seed)
    for trial in range(100000):
        U, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        e = np.array([-rng.uniform(0.1, 2), rng.uniform(0.1, 2)])
        B = U @ np.diag(e) @ U.conj().T
        H = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / np.sqrt(2)
        g = rng.uniform(0.1, 3, size=2)
        Binv = np.linalg.inv(B)
        if not all(np.real(H[k].conj() @ Binv @ H[k]) < 0 for k in range(2)):
            continue
        top = fpi([100.0, 100.0], B, H, g)
        if top is None or np.min(np.linalg.eigvalsh(c_matrix(top, B, H))) <= 1e-6:
            continue
        roots = []
        for s1 in np.linspace(0, 1.2 * max(top), 25):
            for s2 in np.linspace(0, 1.2 * max(top), 25):
                try:
                    r, _, ier, _ = fsolve(lambda b: imap(b, B, H, g) - b, [s1, s2],
                                          full_output=True)
                except Exception:
                    continue
                if ier == 1 and np.all(r >= -1e-9) and psd(r, B, H) \
                        and not any(np.linalg.norm(r - x) < 1e-6 for x in roots):
                    roots.append(r)
        if len(roots) >= 2:
            return trial, B, H, g, top, roots
    raise RuntimeError("no instance found")


def pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    trial, B, H, g, top, roots = search(args.seed)
    doc = {
        "M": 2, "K": 2, "Q": 1, "eta": 1.0,
        "gamma": [float(x) for x in g],
        "sigma2": [1.0, 1.0],
        "theta": [0.0], "d": [1.0],
        "h": [[pair(z) for z in h] for h in H],
        "B": [[pair(z) for z in row] for row in B],
        "meta": {
            "search_seed": args.seed, "trial": trial,
            "fixed_points": [[float(x) for x in r] for r in roots],
        },
    }
    with open(args.out, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print(f"trial {trial}: fixed points {[list(r) for r in roots]}, FPI(100) -> {list(top)}")


if __name__ == "__main__":
    main()
