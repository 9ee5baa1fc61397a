"""Finite-dimensional topos constructions over a finite poset of contexts.

A commutative subalgebra with identity is stored as its partition of the
identity into atoms. Its Gelfand spectrum is that atom set, a clopen
subobject of the spectral presheaf picks atoms context by context, and the
outer daseinisation of a projector P at V is the smallest atom sum that
dominates P.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .document import decode_matrix, encode_matrix
from .errors import (
    DimensionMismatch,
    InvalidPoset,
    InvalidSubobject,
    NotAntitone,
    NotCommuting,
    PNotInPoset,
)
from .linalg import DensityMatrix, Projector, commutator_norm, frob, make_projector
from .psa import born_value


@dataclass(frozen=True, eq=False)
class AbelianContext:
    atoms: tuple[Projector, ...]
    label: str = ""

    @property
    def dim(self) -> int:
        return self.atoms[0].dim

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        return f"AbelianContext({self.label!r}, ranks={[a.rank for a in self.atoms]})"


def _clean_projector(m: np.ndarray) -> Projector | None:
    # nearest projector of an almost-projector; None if it is ~0
    m = (m + m.conj().T) / 2
    lam, u = np.linalg.eigh(m)
    keep = u[:, lam > 0.5]
    if keep.shape[1] == 0:
        return None
    return Projector(_ro(keep @ keep.conj().T), keep.shape[1])


def _ro(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def abelian_context(atoms: Sequence[Projector], label: str = "", tol: Tolerances = DEFAULT_TOL) -> AbelianContext:
    """Validate a partition of the identity into non-zero, pairwise orthogonal atoms."""
    if not atoms:
        raise InvalidPoset("a context needs at least one atom")
    dim = atoms[0].dim
    for a in atoms:
        if a.dim != dim:
            raise DimensionMismatch("atoms have different dimensions")
        if a.rank == 0:
            raise InvalidPoset(f"context {label!r} has a zero atom")
    for a, b in combinations(atoms, 2):
        if frob(a.matrix @ b.matrix) > tol.idem:
            raise InvalidPoset(f"context {label!r} has non-orthogonal atoms")
    defect = frob(sum(a.matrix for a in atoms) - np.eye(dim))
    if defect > tol.idem:
        raise InvalidPoset(f"atoms of {label!r} do not sum to identity (defect {defect:.3e})")
    return AbelianContext(tuple(atoms), label)


def trivial_context(dim: int) -> AbelianContext:
    return AbelianContext((Projector(_ro(np.eye(dim)), dim),), "trivial")


def abelian_context_from(
    projectors: Sequence[Projector], dim: int | None = None, label: str = "", tol: Tolerances = DEFAULT_TOL
) -> AbelianContext:
    """Atoms of the algebra generated by commuting projectors (and the identity).

    Starting from {I}, every atom a is split into aP and a(I-P) for each
    generator P in turn, dropping zero pieces.
    """
    if dim is None:
        if not projectors:
            raise ValueError("dimension required for an empty generator list")
        dim = projectors[0].dim
    for p in projectors:
        if p.dim != dim:
            raise DimensionMismatch(f"projector of dimension {p.dim} in a dimension-{dim} context")
    for i, j in combinations(range(len(projectors)), 2):
        c = commutator_norm(projectors[i].matrix, projectors[j].matrix)
        if c > tol.comm:
            raise NotCommuting(f"generators {i} and {j} do not commute (||[P,Q]||_F = {c:.3e})")
    atoms = [np.eye(dim, dtype=complex)]
    for p in projectors:
        nxt = []
        for a in atoms:
            inside = a @ p.matrix
            for piece in (inside, a - inside):
                clean = _clean_projector(piece)
                if clean is not None:
                    nxt.append(clean.matrix)
        atoms = nxt
    out = tuple(Projector(_ro(a), int(round(np.trace(a).real))) for a in atoms)
    return abelian_context(out, label or "ctx", tol)


def spectrum(v: AbelianContext) -> list[Projector]:
    """Gelfand spectrum of a finite abelian algebra: one point per atom."""
    return list(v.atoms)


def dasein_atoms(p: Projector, v: AbelianContext, tol: Tolerances = DEFAULT_TOL) -> frozenset[int]:
    if p.dim != v.dim:
        raise DimensionMismatch(f"projector dimension {p.dim}, context dimension {v.dim}")
    return frozenset(k for k, a in enumerate(v.atoms) if frob(p.matrix @ a.matrix) > tol.overlap)


def _atom_sum(v: AbelianContext, picked) -> Projector:
    m = np.zeros((v.dim, v.dim), dtype=complex)
    for k in sorted(picked):
        m = m + v.atoms[k].matrix
    return Projector(_ro(m), sum(v.atoms[k].rank for k in picked))


def daseinise(p: Projector, v: AbelianContext, tol: Tolerances = DEFAULT_TOL) -> Projector:
    """Outer daseinisation: sum of the atoms of ``v`` that overlap P."""
    return _atom_sum(v, dasein_atoms(p, v, tol))


def contains(v: AbelianContext, p: Projector, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when P is an atom sum of ``v``."""
    return frob(daseinise(p, v, tol).matrix - p.matrix) <= tol.idem


# ---------------------------------------------------------------------------
# poset of contexts


def coarsening_map(coarse: AbelianContext, fine: AbelianContext, tol: Tolerances = DEFAULT_TOL) -> tuple[int, ...] | None:
    """For each atom of ``fine``, the atom of ``coarse`` containing it; None if coarse is not below fine."""
    parent = []
    for a in fine.atoms:
        hit = None
        for k, w in enumerate(coarse.atoms):
            prod = w.matrix @ a.matrix
            if frob(prod - a.matrix) <= tol.idem:
                hit = k
                break
            if frob(prod) > tol.overlap:
                return None
        if hit is None:
            return None
        parent.append(hit)
    return tuple(parent)


def meet(a: AbelianContext, b: AbelianContext, tol: Tolerances = DEFAULT_TOL) -> AbelianContext:
    """Intersection algebra: join atoms of ``a`` linked through overlapping atoms of ``b``."""
    n = len(a)
    group = list(range(n))

    def find(x: int) -> int:
        while group[x] != x:
            group[x] = group[group[x]]
            x = group[x]
        return x

    for bb in b.atoms:
        linked = [k for k, aa in enumerate(a.atoms) if frob(aa.matrix @ bb.matrix) > tol.overlap]
        for k in linked[1:]:
            group[find(k)] = find(linked[0])
    blocks: dict[int, list[int]] = {}
    for k in range(n):
        blocks.setdefault(find(k), []).append(k)
    atoms = tuple(_atom_sum(a, ks) for ks in blocks.values())
    return AbelianContext(atoms, f"{a.label}^{b.label}")


@dataclass(frozen=True, eq=False)
class ContextPoset:
    """Finite poset of contexts; ``leq[i, j]`` means contexts[i] is a subalgebra of contexts[j].

    ``parent[(i, j)]`` (for leq[i, j]) maps each atom of contexts[j] to the
    atom of contexts[i] that contains it.
    """

    contexts: tuple[AbelianContext, ...]
    leq: np.ndarray
    parent: dict

    @property
    def dim(self) -> int:
        return self.contexts[0].dim

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.contexts]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def edges(self) -> list[tuple[int, int]]:
        """Strict relations (i, j) with contexts[i] < contexts[j]."""
        n = len(self.contexts)
        return [(i, j) for i in range(n) for j in range(n) if i != j and self.leq[i, j]]


def _same(a: AbelianContext, b: AbelianContext, tol: Tolerances) -> bool:
    return len(a) == len(b) and coarsening_map(a, b, tol) is not None


def build_poset(
    contexts: Sequence[AbelianContext], close: bool = False, tol: Tolerances = DEFAULT_TOL
) -> ContextPoset:
    """Poset on the given contexts plus the trivial one, duplicates removed.

    With ``close=True`` the family is closed under pairwise meets.
    """
    if not contexts:
        raise InvalidPoset("no contexts given")
    dim = contexts[0].dim
    if any(c.dim != dim for c in contexts):
        raise DimensionMismatch("contexts have different dimensions")
    items: list[AbelianContext] = []

    def add(c: AbelianContext) -> bool:
        if any(_same(c, x, tol) for x in items):
            return False
        items.append(c)
        return True

    for c in contexts:
        add(c)
    add(trivial_context(dim))
    if close:
        grew = True
        while grew:
            grew = False
            for a, b in combinations(list(items), 2):
                grew |= add(meet(a, b, tol))
    labels = [c.label for c in items]
    if len(set(labels)) != len(labels):
        raise InvalidPoset(f"context labels are not unique: {labels}")
    return _finish(tuple(items), tol)


def _finish(items: tuple[AbelianContext, ...], tol: Tolerances) -> ContextPoset:
    n = len(items)
    leq = np.zeros((n, n), dtype=bool)
    parent = {}
    for i in range(n):
        for j in range(n):
            m = coarsening_map(items[i], items[j], tol)
            if m is not None:
                leq[i, j] = True
                parent[(i, j)] = m
    _check_order(leq)
    leq.setflags(write=False)
    return ContextPoset(items, leq, parent)


def _check_order(leq: np.ndarray) -> None:
    n = leq.shape[0]
    if not leq.diagonal().all():
        raise InvalidPoset("order is not reflexive")
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i, j] and leq[j, i]:
                raise InvalidPoset(f"contexts {i} and {j} coincide")
    if np.any((leq.astype(int) @ leq.astype(int) > 0) & ~leq):
        raise InvalidPoset("order is not transitive")


def poset_to_dict(poset: ContextPoset) -> dict:
    return {
        "dim": poset.dim,
        "contexts": [{"label": c.label, "atoms": [encode_matrix(a.matrix) for a in c.atoms]} for c in poset.contexts],
        "order": [list(e) for e in poset.edges()],
    }


def poset_from_dict(d: dict, tol: Tolerances = DEFAULT_TOL) -> ContextPoset:
    """Load a serialised poset, recomputing the order and checking it against ``order``."""
    dim = d["dim"]
    items = []
    for c in d["contexts"]:
        atoms = [make_projector(decode_matrix(m, dim, f"atoms of {c['label']}"), tol) for m in c["atoms"]]
        items.append(abelian_context(atoms, c["label"], tol))
    if len({c.label for c in items}) != len(items):
        raise InvalidPoset("context labels are not unique")
    poset = _finish(tuple(items), tol)
    if not any(len(c) == 1 for c in poset.contexts):
        raise InvalidPoset("poset lacks the trivial context")
    declared = sorted(tuple(e) for e in d.get("order", []))
    if declared != sorted(poset.edges()):
        raise InvalidPoset(f"declared order {declared} differs from the computed order {sorted(poset.edges())}")
    return poset


# ---------------------------------------------------------------------------
# subobjects and the measure


@dataclass(frozen=True, eq=False)
class ClopenSubobject:
    poset: ContextPoset
    selection: tuple[frozenset[int], ...]

    def projector_at(self, i: int) -> Projector:
        return _atom_sum(self.poset.contexts[i], self.selection[i])


def validate_subobject(s: ClopenSubobject) -> None:
    """Selections must be closed under coarsening along every poset edge."""
    poset = s.poset
    if len(s.selection) != len(poset.contexts):
        raise InvalidSubobject("selection does not cover every context")
    for (i, j), parent in poset.parent.items():
        for k in s.selection[j]:
            if parent[k] not in s.selection[i]:
                raise InvalidSubobject(
                    f"atom {k} of {poset.contexts[j].label!r} is selected but its coarsening "
                    f"{parent[k]} in {poset.contexts[i].label!r} is not"
                )


def daseinisation_subobject(p: Projector, poset: ContextPoset, tol: Tolerances = DEFAULT_TOL) -> ClopenSubobject:
    if p.dim != poset.dim:
        raise DimensionMismatch(f"projector dimension {p.dim}, poset dimension {poset.dim}")
    return ClopenSubobject(poset, tuple(dasein_atoms(p, v, tol) for v in poset.contexts))


@dataclass(frozen=True, eq=False)
class AntitoneFunction:
    poset: ContextPoset
    values: tuple[float, ...]

    def __getitem__(self, label: str) -> float:
        return self.values[self.poset.index(label)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.poset.labels, self.values))


def check_antitone(poset: ContextPoset, values: Sequence[float], tol: float = DEFAULT_TOL.born) -> None:
    for i, j in poset.edges():
        if values[i] < values[j] - tol:
            raise NotAntitone(
                f"value rises from {poset.contexts[i].label!r} ({values[i]!r}) "
                f"to the finer {poset.contexts[j].label!r} ({values[j]!r})"
            )


def measure(rho: DensityMatrix, s: ClopenSubobject, tol: Tolerances = DEFAULT_TOL) -> AntitoneFunction:
    """Context-wise probability of the selected atoms."""
    if rho.dim != s.poset.dim:
        raise DimensionMismatch(f"state dimension {rho.dim}, poset dimension {s.poset.dim}")
    validate_subobject(s)
    vals = []
    for v, picked in zip(s.poset.contexts, s.selection):
        total = sum(born_value(rho, v.atoms[k], tol) for k in sorted(picked))
        vals.append(min(1.0, float(total)))
    check_antitone(s.poset, vals, tol.born)
    return AntitoneFunction(s.poset, tuple(vals))


@dataclass(frozen=True)
class BornRecovery:
    minimum: float
    attained_at: str
    born: float


def born_recovery(
    rho: DensityMatrix, p: Projector, poset: ContextPoset, tol: Tolerances = DEFAULT_TOL
) -> BornRecovery:
    """Minimum over the poset of the measure of delta(P), reported with Tr(rho P).

    Only meaningful when some context contains P; otherwise the minimum can
    sit strictly above the Born value and PNotInPoset is raised.
    """
    if not any(contains(v, p, tol) for v in poset.contexts):
        raise PNotInPoset("no context in the poset has P as an atom sum")
    mu = measure(rho, daseinisation_subobject(p, poset, tol), tol)
    lo = min(mu.values)
    k = next(i for i, x in enumerate(mu.values) if x <= lo + tol.born)
    return BornRecovery(lo, poset.contexts[k].label, born_value(rho, p, tol))
