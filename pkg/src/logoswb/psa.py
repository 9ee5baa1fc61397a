"""Potential states of affairs: Born valuations over a power graph.

A PSA is the table ``id -> Tr(rho P)`` over every node of a graph. This
module also covers the basis-dependent views of a PSA (quantum
perspectives), the inverse map from a PSA back to a density matrix, convex
mixing, and the three equivalent purity tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    BadWeights,
    DimensionMismatch,
    ImaginaryTrace,
    Inconsistent,
    InconsistentPurityTests,
    MissingNode,
    NoCoefficients,
    NotAResolution,
    NotInformationallyComplete,
    NotRankOneContext,
    PotentiaOutOfRange,
)
from .graph import PowerGraph
from .linalg import (
    DensityMatrix,
    Projector,
    eigen_hermitian,
    frob,
    make_density,
    range_basis,
    vector_to_projector,
)

RankOneContext = Sequence[tuple[str, Projector]]


@dataclass(frozen=True, eq=False)
class PSA:
    table: Mapping[str, float]
    source: DensityMatrix | None = None
    shots: int | None = None
    low_statistics: bool = False

    def __getitem__(self, node_id: str) -> float:
        try:
            return self.table[node_id]
        except KeyError:
            raise MissingNode(f"PSA has no value for {node_id!r}") from None

    def rows(self) -> list[tuple[str, float]]:
        return list(self.table.items())


def clamp_potentia(value: float, tol: Tolerances = DEFAULT_TOL, label: str = "") -> float:
    """Snap rounding noise at the edges of [0, 1]; anything further out is an error."""
    if 0.0 <= value <= 1.0:
        return float(value) + 0.0
    if -tol.eig <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + tol.eig:
        return 1.0
    raise PotentiaOutOfRange(f"potentia {value!r} of {label or 'node'} outside [0, 1]")


def make_psa(
    table: Mapping[str, float] | Sequence[tuple[str, float]],
    source: DensityMatrix | None = None,
    shots: int | None = None,
    low_statistics: bool = False,
    tol: Tolerances = DEFAULT_TOL,
) -> PSA:
    rows = table.items() if isinstance(table, Mapping) else table
    checked = {str(k): clamp_potentia(float(v), tol, str(k)) for k, v in rows}
    return PSA(MappingProxyType(checked), source, shots, low_statistics)


def born_value(rho: DensityMatrix, p: Projector, tol: Tolerances = DEFAULT_TOL, label: str = "") -> float:
    if rho.dim != p.dim:
        raise DimensionMismatch(f"state has dimension {rho.dim}, projector {label} has {p.dim}")
    t = complex(np.sum(rho.matrix * p.matrix.T))
    if abs(t.imag) > tol.born:
        raise ImaginaryTrace(f"Tr(rho P) for {label or 'projector'} has imaginary part {t.imag:.3e}")
    return clamp_potentia(t.real, tol, label)


def evaluate_psa(rho: DensityMatrix, g: PowerGraph, tol: Tolerances = DEFAULT_TOL) -> PSA:
    table = {i: born_value(rho, p, tol, i) for i, p in g.items()}
    return PSA(MappingProxyType(table), rho)


# ---------------------------------------------------------------------------
# quantum perspectives


@dataclass(frozen=True, eq=False)
class QuantumPerspective:
    ids: tuple[str, ...]
    vectors: tuple[np.ndarray, ...]
    potentia: np.ndarray
    coefficients: np.ndarray | None = None

    def superposition(self) -> np.ndarray:
        """The vector sum_i c_i |w_i>; requires coefficients."""
        if self.coefficients is None:
            raise NoCoefficients("perspective of a mixed source has no superposition coefficients")
        return sum(c * w for c, w in zip(self.coefficients, self.vectors))


def resolution_vectors(context: RankOneContext, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Validate a rank-one resolution of identity and return its canonical unit vectors."""
    if not context:
        raise NotAResolution("empty context")
    mats = [p for _, p in context]
    dim = mats[0].dim
    if any(p.dim != dim for p in mats):
        raise DimensionMismatch("context projectors have different dimensions")
    for i, p in context:
        if p.rank != 1:
            raise NotRankOneContext(f"{i!r} has rank {p.rank}")
    for (i, p), (j, q) in combinations(context, 2):
        overlap = frob(p.matrix @ q.matrix)
        if overlap > tol.idem:
            raise NotAResolution(f"{i!r} and {j!r} are not orthogonal (||PQ||_F = {overlap:.3e})")
    defect = frob(sum(p.matrix for p in mats) - np.eye(dim))
    if defect > tol.idem:
        raise NotAResolution(f"projectors do not sum to identity (defect {defect:.3e})")
    return [range_basis(p, tol)[0] for p in mats]


def pure_vector(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Canonical unit vector v with rho = |v><v|, or None if rho is not rank one."""
    lam, u = eigen_hermitian(rho.matrix, tol)
    if abs(lam[-1] - 1.0) > tol.eig:
        return None
    return u[:, -1]


def quantum_perspective(
    rho: DensityMatrix, context: RankOneContext, tol: Tolerances = DEFAULT_TOL
) -> QuantumPerspective:
    vectors = resolution_vectors(context, tol)
    ids = tuple(i for i, _ in context)
    potentia = np.array([born_value(rho, p, tol, i) for i, p in context])
    v = pure_vector(rho, tol)
    coeffs = None if v is None else np.array([np.vdot(w, v) for w in vectors])
    return QuantumPerspective(ids, tuple(vectors), potentia, coeffs)


def change_perspective(
    qp: QuantumPerspective, new_context: RankOneContext, tol: Tolerances = DEFAULT_TOL
) -> QuantumPerspective:
    """Re-express the same vector in another rank-one context (a change of basis)."""
    if qp.coefficients is None:
        raise NoCoefficients("only perspectives of rank-one sources can change basis")
    vectors = resolution_vectors(new_context, tol)
    v = qp.superposition()
    coeffs = np.array([np.vdot(w, v) for w in vectors])
    potentia = np.array([clamp_potentia(abs(c) ** 2, tol) for c in coeffs])
    return QuantumPerspective(tuple(i for i, _ in new_context), tuple(vectors), potentia, coeffs)


# ---------------------------------------------------------------------------
# PSA -> density matrix


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of the real space of dim x dim Hermitian matrices."""
    out = []
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1.0
        out.append(e)
    s = 1 / np.sqrt(2)
    for j, k in combinations(range(dim), 2):
        sym = np.zeros((dim, dim), dtype=complex)
        sym[j, k] = sym[k, j] = s
        anti = np.zeros((dim, dim), dtype=complex)
        anti[j, k], anti[k, j] = -1j * s, 1j * s
        out.extend([sym, anti])
    return out


def design_matrix(projectors: Sequence[Projector]) -> np.ndarray:
    """Rows: Tr(B_m P_i) for the Hermitian basis B_m (always real)."""
    dim = projectors[0].dim
    basis = hermitian_basis(dim)
    return np.array([[np.sum(b * p.matrix.T).real for b in basis] for p in projectors])


def informationally_complete_family(dim: int, tol: Tolerances = DEFAULT_TOL) -> list[tuple[str, Projector]]:
    """dim^2 rank-one projectors whose Born values fix a state.

    Diagonal ``d{j}``, then per pair j<k the projectors onto (e_j+e_k)/sqrt2
    (``x{j}_{k}``) and (e_j+i e_k)/sqrt2 (``y{j}_{k}``).
    """
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    eye = np.eye(dim, dtype=complex)
    out = [(f"d{j}", vector_to_projector(eye[j], tol)) for j in range(dim)]
    s = 1 / np.sqrt(2)
    for j, k in combinations(range(dim), 2):
        out.append((f"x{j}_{k}", vector_to_projector(s * (eye[j] + eye[k]), tol)))
        out.append((f"y{j}_{k}", vector_to_projector(s * (eye[j] + 1j * eye[k]), tol)))
    return out


@dataclass(frozen=True, eq=False)
class Reconstruction:
    rho: DensityMatrix
    residual: float
    clipping: float


def reconstruct_density(
    psa: PSA, family: Sequence[tuple[str, Projector]], dim: int, tol: Tolerances = DEFAULT_TOL
) -> Reconstruction:
    """Linear inversion of a PSA known on ``family``.

    Solves Tr(rho P_i) = psa[i] for the dim^2 real coordinates of a Hermitian
    rho, then clips negative eigenvalues and renormalises the trace.
    ``clipping`` is the Frobenius size of that repair.
    """
    if any(p.dim != dim for _, p in family):
        raise DimensionMismatch(f"family contains projectors outside dimension {dim}")
    n = dim * dim
    if len(family) < n:
        raise NotInformationallyComplete(f"{len(family)} projectors cannot determine {n} real parameters")
    a = design_matrix([p for _, p in family])
    rank = int(np.linalg.matrix_rank(a, tol=1e-10))
    if rank < n:
        raise NotInformationallyComplete(f"design matrix has rank {rank} < {n}")
    b = np.array([psa[i] for i, _ in family])
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ x - b))
    if residual > tol.recon:
        raise Inconsistent(f"no Hermitian matrix reproduces the table (residual {residual:.3e})")
    raw = sum(c * m for c, m in zip(x, hermitian_basis(dim)))
    raw = (raw + raw.conj().T) / 2
    lam, u = np.linalg.eigh(raw)
    if lam[0] >= 0.0 and abs(lam.sum() - 1.0) <= tol.trace:
        # already a state: skip the repair so exact tables round-trip exactly
        fixed = raw
    else:
        clipped = np.clip(lam, 0.0, None)
        if clipped.sum() <= 0.0:
            raise Inconsistent("reconstructed matrix has no positive part")
        clipped /= clipped.sum()
        fixed = (u * clipped) @ u.conj().T
    return Reconstruction(make_density(fixed, tol), residual, frob(fixed - raw))


# ---------------------------------------------------------------------------
# mixtures and purity


def mix(states: Sequence[DensityMatrix], weights: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
    if len(states) != len(weights) or not states:
        raise BadWeights(f"{len(states)} states but {len(weights)} weights")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0.0) or abs(w.sum() - 1.0) > tol.trace:
        raise BadWeights(f"weights must be non-negative and sum to 1, got {w.tolist()}")
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionMismatch(f"states have dimensions {sorted(dims)}")
    return make_density(sum(wi * s.matrix for wi, s in zip(w, states)), tol)


@dataclass(frozen=True)
class PurityReport:
    trace_purity: float
    rank: int
    idempotency_defect: float
    is_pure: bool


def purity_report(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOL) -> PurityReport:
    m = rho.matrix
    sq = m @ m
    trace_purity = float(np.trace(sq).real)
    rank = int(np.count_nonzero(rho.eigenvalues > tol.eig))
    defect = frob(sq - m)
    tests = (abs(trace_purity - 1.0) <= tol.eig, rank == 1, defect <= tol.idem)
    if len(set(tests)) != 1:
        raise InconsistentPurityTests(
            f"purity tests disagree (trace {trace_purity!r}, rank {rank}, defect {defect:.3e}); "
            "check the tolerance configuration"
        )
    return PurityReport(trace_purity, rank, defect, tests[0])
