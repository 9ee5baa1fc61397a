"""Seeded random states, unitaries and contexts for experiments and tests."""

from __future__ import annotations

import numpy as np

from .linalg import DensityMatrix, Projector, make_density, vector_to_projector
from .topos import AbelianContext, abelian_context


def ginibre(dim: int, rng: np.random.Generator, cols: int | None = None) -> np.ndarray:
    return rng.normal(size=(dim, cols or dim)) + 1j * rng.normal(size=(dim, cols or dim))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre(dim, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(dim, rng)
    return (g + g.conj().T) / 2


def random_pure_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    g = ginibre(dim, rng, rank or dim)
    m = g @ g.conj().T
    return make_density(m / np.trace(m).real)


def random_pure_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    return make_density(vector_to_projector(random_pure_vector(dim, rng)).matrix)


def random_rank_one_context(dim: int, rng: np.random.Generator, prefix: str = "b") -> list[tuple[str, Projector]]:
    u = random_unitary(dim, rng)
    return [(f"{prefix}{k}", vector_to_projector(u[:, k] / np.linalg.norm(u[:, k]))) for k in range(dim)]


def _split(n: int, rng: np.random.Generator) -> list[int]:
    # random composition of n into positive parts
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, n), size=rng.integers(0, n), replace=False)) if n > 1 else []
    edges = [0, *cuts, n]
    return [b - a for a, b in zip(edges, edges[1:])]


def _blocks(u: np.ndarray, sizes: list[int]) -> list[Projector]:
    out, start = [], 0
    for s in sizes:
        cols = u[:, start:start + s]
        m = cols @ cols.conj().T
        m.setflags(write=False)
        out.append(Projector(m, s))
        start += s
    return out


def random_abelian_context(dim: int, rng: np.random.Generator, label: str = "rand") -> AbelianContext:
    """Random unitary frame grouped into random blocks."""
    u = random_unitary(dim, rng)
    return abelian_context(_blocks(u, _split(dim, rng)), label)


def random_refinement(ctx: AbelianContext, rng: np.random.Generator, label: str = "refined") -> AbelianContext:
    """A random context at or above ``ctx``: every atom is split inside its own range."""
    atoms: list[Projector] = []
    for a in ctx.atoms:
        lam, vecs = np.linalg.eigh(a.matrix)
        basis = vecs[:, lam > 0.5]
        rot = basis @ random_unitary(a.rank, rng)
        atoms.extend(_blocks(rot, _split(a.rank, rng)))
    return abelian_context(atoms, label)
