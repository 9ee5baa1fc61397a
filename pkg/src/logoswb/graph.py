"""Commutation graphs of projectors and their contexts (cliques)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DimensionMismatch, DuplicateId, InvalidProjector, UnknownId
from .linalg import (
    Projector,
    commutator_norm,
    complete_to_basis,
    range_basis,
    vector_to_projector,
)


@dataclass(frozen=True, eq=False)
class PowerGraph:
    """Finite reflexive symmetric graph; ``projectors`` is None for abstract graphs."""

    ids: tuple[str, ...]
    adjacency: np.ndarray
    projectors: tuple[Projector, ...] | None = None
    tol_comm: float = DEFAULT_TOL.comm

    @classmethod
    def from_adjacency(cls, ids: Sequence[str], adjacency) -> "PowerGraph":
        """An abstract graph; loops are forced on and the relation must be symmetric."""
        ids = tuple(str(i) for i in ids)
        _check_unique(ids)
        adj = np.array(adjacency, dtype=bool).reshape(len(ids), len(ids))
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        np.fill_diagonal(adj, True)
        adj.setflags(write=False)
        return cls(ids, adj)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int | None:
        return self.projectors[0].dim if self.projectors else None

    def index(self, node_id: str) -> int:
        try:
            return self.ids.index(node_id)
        except ValueError:
            raise UnknownId(f"unknown node id {node_id!r}") from None

    def projector(self, node_id: str) -> Projector:
        if self.projectors is None:
            raise InvalidProjector("abstract graph carries no projectors")
        return self.projectors[self.index(node_id)]

    def related(self, a: str, b: str) -> bool:
        return bool(self.adjacency[self.index(a), self.index(b)])

    def edges(self) -> list[tuple[str, str]]:
        """Non-loop edges as ``(i, j)`` id pairs with i before j in node order."""
        n = len(self.ids)
        return [(self.ids[i], self.ids[j]) for i in range(n) for j in range(i + 1, n) if self.adjacency[i, j]]

    def items(self) -> list[tuple[str, Projector]]:
        if self.projectors is None:
            raise InvalidProjector("abstract graph carries no projectors")
        return list(zip(self.ids, self.projectors))


@dataclass(frozen=True)
class Context:
    ids: tuple[str, ...]
    maximal: bool = False


def _check_unique(ids: Sequence[str]) -> None:
    seen = set()
    for i in ids:
        if i in seen:
            raise DuplicateId(f"duplicate node id {i!r}")
        seen.add(i)


def build_commutation_graph(
    projectors: Sequence[tuple[str, Projector]], tol: Tolerances = DEFAULT_TOL
) -> PowerGraph:
    ids = tuple(str(i) for i, _ in projectors)
    mats = tuple(p for _, p in projectors)
    _check_unique(ids)
    if mats and len({p.dim for p in mats}) != 1:
        raise DimensionMismatch(f"projector dimensions differ: {sorted({p.dim for p in mats})}")
    n = len(ids)
    adj = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            adj[i, j] = adj[j, i] = commutator_norm(mats[i].matrix, mats[j].matrix) <= tol.comm
    adj.setflags(write=False)
    return PowerGraph(ids, adj, mats, tol.comm)


def is_context(g: PowerGraph, ids: Iterable[str]) -> bool:
    idx = [g.index(i) for i in ids]
    sub = g.adjacency[np.ix_(idx, idx)]
    return bool(sub.all())


def maximal_cliques(adjacency: np.ndarray) -> list[frozenset[int]]:
    """Bron-Kerbosch with Tomita pivoting over an index adjacency matrix."""
    n = adjacency.shape[0]
    nbrs = [frozenset(int(j) for j in np.flatnonzero(adjacency[i]) if j != i) for i in range(n)]
    out: list[frozenset[int]] = []

    def expand(r: frozenset[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: (len(nbrs[u] & p), -u))
        for v in sorted(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p.discard(v)
            x.add(v)

    if n:
        expand(frozenset(), set(range(n)), set())
    return out


def maximal_contexts(g: PowerGraph) -> list[Context]:
    contexts = [Context(tuple(sorted(g.ids[i] for i in c)), True) for c in maximal_cliques(g.adjacency)]
    return sorted(contexts, key=lambda c: c.ids)


@dataclass(frozen=True)
class GeneratedContext:
    """A rank-one resolution of identity containing a target projector.

    ``members`` are the ids whose projectors sum to the target.
    """

    context: Context
    projectors: tuple[tuple[str, Projector], ...]
    members: tuple[str, ...]


def generate_context_containing(
    p: Projector, dim: int, tol: Tolerances = DEFAULT_TOL, prefix: str = "w"
) -> GeneratedContext:
    # Range basis of P completed to C^dim: the standard context rotated so that
    # P becomes a sum of its atoms.
    if p.dim != dim:
        raise InvalidProjector(f"projector has dimension {p.dim}, expected {dim}")
    if p.rank < 1:
        raise InvalidProjector("cannot generate a context for the zero projector")
    basis = complete_to_basis(range_basis(p, tol), dim, tol)
    items = tuple((f"{prefix}{k}", vector_to_projector(v / np.linalg.norm(v), tol)) for k, v in enumerate(basis))
    ids = tuple(i for i, _ in items)
    return GeneratedContext(Context(ids, True), items, ids[: p.rank])
