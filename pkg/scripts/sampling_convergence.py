"""Convergence of empirical PSAs to Born values under seeded sampling.

Measures a state in one rank-one context for a range of shot counts and many
seeds, and prints the median and 95th-percentile absolute error of the
estimated potentia next to the binomial standard error sqrt(p(1-p)/n).

    python3 scripts/sampling_convergence.py --dim 3 --seeds 200
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from logoswb.linalg import make_density, vector_to_projector
from logoswb.psa import born_value
from logoswb.randomstates import random_density, random_rank_one_context
from logoswb.sampling import estimate_psa, sample_context


@dataclass(frozen=True)
class ConvergenceConfig:
    dim: int = 2
    shots: tuple[int, ...] = (100, 1_000, 10_000, 100_000)
    seeds: int = 100
    random_state: bool = False
    seed: int = 20191015


def setup(cfg: ConvergenceConfig):
    rng = np.random.default_rng(cfg.seed)
    if cfg.random_state:
        return random_density(cfg.dim, rng), random_rank_one_context(cfg.dim, rng)
    rho = make_density(np.eye(cfg.dim) / cfg.dim)
    basis = np.eye(cfg.dim)
    return rho, [(f"e{k}", vector_to_projector(basis[k])) for k in range(cfg.dim)]


def run(cfg: ConvergenceConfig):
    rho, ctx = setup(cfg)
    exact = {i: born_value(rho, p) for i, p in ctx}
    rows = []
    for n in cfg.shots:
        errs = []
        for s in range(cfg.seeds):
            est = estimate_psa(sample_context(rho, ctx, n, s))
            errs.append(max(abs(est[i] - exact[i]) for i in exact))
        stderr = max(np.sqrt(p * (1 - p) / n) for p in exact.values())
        rows.append((n, float(np.median(errs)), float(np.percentile(errs, 95)), stderr))
    return exact, rows


def main() -> None:
    d = ConvergenceConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=d.dim)
    ap.add_argument("--shots", type=int, nargs="+", default=list(d.shots))
    ap.add_argument("--seeds", type=int, default=d.seeds)
    ap.add_argument("--random-state", action="store_true", help="random rho and context instead of the uniform state")
    a = ap.parse_args()
    cfg = ConvergenceConfig(a.dim, tuple(a.shots), a.seeds, a.random_state)

    exact, rows = run(cfg)
    print("Born values: " + ", ".join(f"{i}={p:.4f}" for i, p in exact.items()))
    print(f"{'shots':>8}  {'median':>9}  {'p95':>9}  {'std err':>9}")
    for n, med, p95, se in rows:
        print(f"{n:>8}  {med:>9.2e}  {p95:>9.2e}  {se:>9.2e}")


if __name__ == "__main__":
    main()
