"""Born recovery over random context posets.

For random (rho, P) pairs, builds a poset from P's own context, the trivial
context and a few random or refined contexts, then reports how closely the
minimum of the daseinised measure matches Tr(rho P) and how often the minimum
sits somewhere other than P's own context.

    python3 scripts/born_recovery_sweep.py --trials 200 --dims 2 3 4 5
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

import numpy as np

from logoswb.linalg import vector_to_projector
from logoswb.psa import born_value
from logoswb.randomstates import random_abelian_context, random_density, random_pure_vector, random_refinement
from logoswb.topos import abelian_context_from, born_recovery, build_poset


@dataclass(frozen=True)
class SweepConfig:
    dims: tuple[int, ...] = (2, 3, 4)
    trials: int = 500
    extra_contexts: int = 5
    refine_fraction: float = 0.4
    close: bool = True
    seed: int = 20191015


@dataclass
class DimStats:
    dim: int
    errors: list[float] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    elsewhere: int = 0


def random_poset(p, dim: int, cfg: SweepConfig, rng: np.random.Generator):
    own = abelian_context_from([p], label="own")
    ctxs = [own]
    for k in range(cfg.extra_contexts):
        if rng.random() < cfg.refine_fraction:
            base = ctxs[int(rng.integers(len(ctxs)))]
            ctxs.append(random_refinement(base, rng, f"f{k}"))
        else:
            ctxs.append(random_abelian_context(dim, rng, f"r{k}"))
    return build_poset(ctxs, close=cfg.close)


def run(cfg: SweepConfig) -> list[DimStats]:
    rng = np.random.default_rng(cfg.seed)
    out = []
    for dim in cfg.dims:
        stats = DimStats(dim)
        for _ in range(cfg.trials):
            rho = random_density(dim, rng)
            p = vector_to_projector(random_pure_vector(dim, rng))
            poset = random_poset(p, dim, cfg, rng)
            rec = born_recovery(rho, p, poset)
            stats.errors.append(abs(rec.minimum - born_value(rho, p)))
            stats.sizes.append(len(poset.contexts))
            stats.elsewhere += rec.attained_at != "own"
        out.append(stats)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = SweepConfig()
    ap.add_argument("--dims", type=int, nargs="+", default=list(d.dims))
    ap.add_argument("--trials", type=int, default=d.trials)
    ap.add_argument("--extra", type=int, default=d.extra_contexts)
    ap.add_argument("--no-close", action="store_true")
    ap.add_argument("--seed", type=int, default=d.seed)
    a = ap.parse_args()
    cfg = SweepConfig(tuple(a.dims), a.trials, a.extra, d.refine_fraction, not a.no_close, a.seed)

    print(f"{'dim':>3}  {'trials':>6}  {'max err':>9}  {'mean |poset|':>12}  {'min elsewhere':>13}")
    for s in run(cfg):
        print(
            f"{s.dim:>3}  {len(s.errors):>6}  {max(s.errors):>9.1e}  "
            f"{np.mean(s.sizes):>12.2f}  {s.elsewhere:>13}"
        )


if __name__ == "__main__":
    main()
