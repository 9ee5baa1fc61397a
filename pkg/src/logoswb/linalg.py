"""Dense complex linear algebra for small Hilbert spaces (dim 2 to ~8).

Everything here is a pure function over immutable values. Matrices are
plain ``numpy`` complex arrays; ``Projector`` and ``DensityMatrix`` wrap a
read-only copy after validating their defining invariants.

Phase convention: a vector is canonical when its first component of
largest modulus is real and non-negative. Eigenvectors and Gram-Schmidt
completions are always returned canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    InvalidProjector,
    NoConvergence,
    NotFinite,
    NotHermitian,
    NotNormalized,
    NotOrthonormal,
    NotPositive,
    NotSquare,
    TooManyVectors,
    TraceNotOne,
)

# Relative gap below which eigenvalues are treated as one degenerate block
# when choosing canonical eigenvectors. Kept far below tol_recon so that the
# basis rotation inside a block cannot spoil the reconstruction.
_DEGENERACY_GAP = 1e-10
_TIE = 1e-9


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def as_matrix(m) -> np.ndarray:
    """Coerce to a square finite complex array (a ComplexMatrix)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotFinite("matrix has NaN or Inf entries")
    return a


def hermitian_defect(a: np.ndarray) -> float:
    return frob(a - a.conj().T)


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return frob(a @ b - b @ a)


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` by a global phase so its first largest component is real >= 0."""
    v = np.asarray(v, dtype=complex)
    mod = np.abs(v)
    top = mod.max() if mod.size else 0.0
    if top == 0.0:
        return v.copy()
    i = int(np.flatnonzero(mod >= top * (1.0 - _TIE))[0])
    return v * (np.conj(v[i]) / mod[i])


# ---------------------------------------------------------------------------
# validated value types


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray
    rank: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"Projector(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def make_density(m, tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
    """Validate ``m`` as a positive, unit-trace Hermitian matrix."""
    a = as_matrix(m)
    defect = hermitian_defect(a)
    if defect > tol.herm:
        raise NotHermitian(f"not Hermitian: ||M - M^dag||_F = {defect:.3e} > {tol.herm:.1e}")
    a = (a + a.conj().T) / 2
    lam_min = float(np.linalg.eigvalsh(a)[0])
    if lam_min < -tol.eig:
        raise NotPositive(f"not positive: smallest eigenvalue {lam_min:.3e} < -{tol.eig:.1e}")
    tr = complex(np.trace(a)).real
    if abs(tr - 1.0) > tol.trace:
        raise TraceNotOne(f"trace is {tr:.12g}, defect {abs(tr - 1.0):.3e} > {tol.trace:.1e}")
    return DensityMatrix(_frozen(a))


def make_projector(m, tol: Tolerances = DEFAULT_TOL) -> Projector:
    a = as_matrix(m)
    defect = hermitian_defect(a)
    if defect > tol.herm:
        raise InvalidProjector(f"not Hermitian: ||P - P^dag||_F = {defect:.3e}")
    a = (a + a.conj().T) / 2
    idem = frob(a @ a - a)
    if idem > tol.idem:
        raise InvalidProjector(f"not idempotent: ||P^2 - P||_F = {idem:.3e} > {tol.idem:.1e}")
    lam = np.linalg.eigvalsh(a)
    rank = int(np.count_nonzero(np.abs(lam - 1.0) <= tol.eig))
    return Projector(_frozen(a), rank)


def unit_vector(v, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise NotNormalized(f"expected a non-empty 1-d vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotFinite("vector has NaN or Inf components")
    n = float(np.linalg.norm(a))
    if abs(n - 1.0) > tol.norm:
        raise NotNormalized(f"norm is {n:.15g}, defect {abs(n - 1.0):.3e} > {tol.norm:.1e}")
    return a


def vector_to_projector(v, tol: Tolerances = DEFAULT_TOL) -> Projector:
    """The map |v> -> |v><v| onto rank-one projectors."""
    a = unit_vector(v, tol)
    return Projector(_frozen(np.outer(a, a.conj())), 1)


def identity_projector(dim: int) -> Projector:
    return Projector(_frozen(np.eye(dim)), dim)


def zero_projector(dim: int) -> Projector:
    return Projector(_frozen(np.zeros((dim, dim))), 0)


# ---------------------------------------------------------------------------
# eigendecomposition and basis completion


def _pivoted_completion(basis: list[np.ndarray], candidates: np.ndarray, needed: int) -> list[np.ndarray]:
    # Gram-Schmidt against ``basis`` picking, at each step, the candidate
    # column with the largest residual (lowest index on ties).
    out = list(basis)
    for _ in range(needed):
        best, best_norm = None, -1.0
        for j in range(candidates.shape[1]):
            r = candidates[:, j].astype(complex)
            for _pass in range(2):
                for b in out:
                    r = r - b * np.vdot(b, r)
            n = float(np.linalg.norm(r))
            if n > best_norm * (1.0 + _TIE):
                best, best_norm = r, n
        if best is None or best_norm < 1e-6:
            raise NoConvergence("basis completion stalled")
        out.append(canonical_phase(best / best_norm))
    return out[len(basis):]


def eigen_hermitian(h, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal canonical eigenvectors (as columns).

    Degenerate blocks get a basis that depends only on the eigenspace, not on
    LAPACK's arbitrary choice: the projector onto the block is applied to the
    standard basis and orthonormalised with pivoting.
    """
    a = as_matrix(h)
    defect = hermitian_defect(a)
    if defect > tol.herm:
        raise NotHermitian(f"not Hermitian: ||H - H^dag||_F = {defect:.3e} > {tol.herm:.1e}")
    a = (a + a.conj().T) / 2
    try:
        lam, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc

    n = a.shape[0]
    scale = max(1.0, float(np.abs(lam).max()))
    vecs = np.empty_like(u)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[stop] - lam[stop - 1] <= _DEGENERACY_GAP * scale:
            stop += 1
        if stop - start == 1:
            vecs[:, start] = canonical_phase(u[:, start])
        else:
            block = u[:, start:stop]
            q = block @ block.conj().T
            for k, v in enumerate(_pivoted_completion([], q, stop - start)):
                vecs[:, start + k] = v
        start = stop
    return lam.astype(float), vecs


def complete_to_basis(partial: Sequence, dim: int, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Extend an orthonormal list to an orthonormal basis of C^dim.

    The inputs are returned unchanged as the leading vectors; the added ones
    come from Gram-Schmidt over the standard basis and are phase-canonical.
    """
    vecs = [np.asarray(v, dtype=complex) for v in partial]
    if len(vecs) > dim:
        raise TooManyVectors(f"{len(vecs)} vectors do not fit in dimension {dim}")
    for v in vecs:
        if v.shape != (dim,):
            raise NotOrthonormal(f"vector of shape {v.shape} in dimension {dim}")
    if vecs:
        gram = np.array([[np.vdot(x, y) for y in vecs] for x in vecs])
        defect = frob(gram - np.eye(len(vecs)))
        if defect > tol.orth:
            raise NotOrthonormal(f"Gram matrix defect {defect:.3e} > {tol.orth:.1e}")
    added = _pivoted_completion(vecs, np.eye(dim, dtype=complex), dim - len(vecs))
    return vecs + added


def range_basis(p: Projector, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Canonical orthonormal basis of the range of a projector."""
    lam, u = eigen_hermitian(p.matrix, tol)
    return [u[:, i] for i in range(len(lam)) if abs(lam[i] - 1.0) <= tol.eig]
