"""Binary versus intensive valuations over a family of contexts.

A binary valuation picks exactly one projector per context and assigns it
1. For Kochen-Specker sets none exists, while the Born valuation of any
density matrix always sums to 1 on every context.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .document import parse_document
from .errors import InvalidContext, MissingNode, UnknownId
from .linalg import Projector, frob
from .psa import PSA


@dataclass(frozen=True, eq=False)
class ValuationProblem:
    ids: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]
    projectors: Mapping[str, Projector] | None = None


@dataclass(frozen=True)
class BinaryValuation:
    assignment: Mapping[str, int]
    explored: int


@dataclass(frozen=True)
class NoneExists:
    explored: int

    def __bool__(self) -> bool:
        return False


def check_resolution(ctx: Sequence[str], projectors: Mapping[str, Projector], tol: Tolerances) -> None:
    mats = [projectors[i] for i in ctx]
    dim = mats[0].dim
    for i, p in zip(ctx, mats):
        if p.dim != dim:
            raise InvalidContext(f"context {list(ctx)}: {i!r} has dimension {p.dim}, expected {dim}")
        if p.rank != 1:
            raise InvalidContext(f"context {list(ctx)}: {i!r} is not rank one")
    for (i, p), (j, q) in combinations(zip(ctx, mats), 2):
        if frob(p.matrix @ q.matrix) > tol.idem:
            raise InvalidContext(f"context {list(ctx)}: {i!r} and {j!r} are not orthogonal")
    defect = frob(sum(p.matrix for p in mats) - np.eye(dim))
    if defect > tol.idem:
        raise InvalidContext(f"context {list(ctx)} does not sum to identity (defect {defect:.3e})")


def make_problem(
    contexts: Sequence[Sequence[str]],
    projectors: Sequence[tuple[str, Projector]] | Mapping[str, Projector] | None = None,
    ids: Sequence[str] | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> ValuationProblem:
    """Build a problem; with projectors, each context must be a rank-one resolution of identity."""
    ctxs = tuple(tuple(sorted(c)) for c in contexts)
    for c in ctxs:
        if not c:
            raise InvalidContext("empty context")
    mapping = None
    if projectors is not None:
        mapping = dict(projectors.items() if isinstance(projectors, Mapping) else projectors)
    if ids is None:
        ids = list(mapping) if mapping is not None else sorted({i for c in ctxs for i in c})
    known = set(ids)
    for c in ctxs:
        for i in c:
            if i not in known:
                raise UnknownId(f"context references unknown id {i!r}")
    if mapping is not None:
        for c in ctxs:
            check_resolution(c, mapping, tol)
        mapping = MappingProxyType(mapping)
    return ValuationProblem(tuple(sorted(known)), ctxs, mapping)


def find_binary_valuation(p: ValuationProblem, tol: Tolerances = DEFAULT_TOL) -> BinaryValuation | NoneExists:
    """Exhaustive backtracking for an exactly-one-per-context {0,1} assignment.

    Contexts are visited by ascending size (ties by id tuple); inside the first
    context still lacking a 1, the lexicographically first unassigned node is
    tried with 1 before 0. Assignments are propagated (a 1 zeroes its
    context-mates; a context with one open slot and no 1 forces it), so the
    first solution found is deterministic. Nodes in no context get 0.
    """
    if p.projectors is not None:
        for c in p.contexts:
            check_resolution(c, p.projectors, tol)
    order = sorted(p.contexts, key=lambda c: (len(c), c))
    member: dict[str, list[tuple[str, ...]]] = {i: [] for i in p.ids}
    for c in order:
        for i in c:
            member[i].append(c)
    explored = 0

    def propagate(assign: dict[str, int], node: str, value: int) -> dict[str, int] | None:
        assign = dict(assign)
        queue = [(node, value)]
        while queue:
            n, v = queue.pop()
            if n in assign:
                if assign[n] != v:
                    return None
                continue
            assign[n] = v
            for c in member[n]:
                if v == 1:
                    for m in c:
                        if m != n:
                            if assign.get(m) == 1:
                                return None
                            if m not in assign:
                                queue.append((m, 0))
                elif not any(assign.get(m) == 1 for m in c):
                    open_ = [m for m in c if m not in assign]
                    if not open_:
                        return None
                    if len(open_) == 1:
                        queue.append((open_[0], 1))
        return assign

    def search(assign: dict[str, int]) -> dict[str, int] | None:
        nonlocal explored
        explored += 1
        target = next((c for c in order if not any(assign.get(m) == 1 for m in c)), None)
        if target is None:
            return assign
        open_ = [m for m in target if m not in assign]
        if not open_:
            return None
        for value in (1, 0):
            nxt = propagate(assign, open_[0], value)
            if nxt is not None:
                found = search(nxt)
                if found is not None:
                    return found
        return None

    found = search({})
    if found is None:
        return NoneExists(explored)
    full = {i: found.get(i, 0) for i in p.ids}
    return BinaryValuation(MappingProxyType(full), explored)


@dataclass(frozen=True)
class ContextSum:
    ids: tuple[str, ...]
    total: float
    passed: bool


@dataclass(frozen=True)
class IntensiveReport:
    contexts: tuple[ContextSum, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.contexts)

    @property
    def worst_defect(self) -> float:
        return max((abs(c.total - 1.0) for c in self.contexts), default=0.0)


def check_intensive_valuation(psa: PSA, p: ValuationProblem, tol: float = DEFAULT_TOL.born) -> IntensiveReport:
    missing = [i for i in p.ids if i not in psa.table]
    if missing:
        raise MissingNode(f"PSA lacks values for {missing}")
    rows = []
    for c in p.contexts:
        total = float(sum(psa.table[i] for i in c))
        rows.append(ContextSum(c, total, abs(total - 1.0) <= tol))
    return IntensiveReport(tuple(rows))


def argmax_selection(psa: PSA, p: ValuationProblem) -> dict[tuple[str, ...], str]:
    """Per context, the node of largest potentia (lowest id on ties).

    A diagnostic only: the choices need not agree across contexts sharing nodes.
    """
    return {c: min(c, key=lambda i: (-psa[i], i)) for c in p.contexts}


def ks18_problem(tol: Tolerances = DEFAULT_TOL) -> ValuationProblem:
    """The shipped 18-vector, 9-context Kochen-Specker set in dimension 4, validated on load."""
    text = resources.files("logoswb").joinpath("data/ks18.json").read_text()
    doc = parse_document(text)
    return make_problem(doc.contexts or (), doc.projector_items(tol), tol=tol)
