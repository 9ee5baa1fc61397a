"""JSON workbench documents.

A document has the keys ``dim``, ``rho``, ``projectors``, ``contexts`` and
``metadata``. Complex entries are ``[re, im]`` pairs and matrices are
row-major lists of rows. :func:`dumps_document` writes the canonical form:
fixed key order, sorted metadata, every number as the shortest decimal that
round-trips, one projector per line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DocumentError
from .graph import PowerGraph, build_commutation_graph
from .linalg import DensityMatrix, Projector, make_density, make_projector
from .psa import PSA, make_psa

KEYS = ("dim", "rho", "projectors", "contexts", "metadata")


def _num(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not np.isfinite(x):
        raise DocumentError(f"{where}: non-finite number")
    return x


def decode_matrix(rows: Any, dim: int | None = None, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise DocumentError(f"{where}: expected a non-empty list of rows")
    n = len(rows) if dim is None else dim
    if len(rows) != n:
        raise DocumentError(f"{where}: expected {n} rows, got {len(rows)}")
    out = np.empty((n, n), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise DocumentError(f"{where}: row {r} must have {n} entries")
        for c, z in enumerate(row):
            if not isinstance(z, list) or len(z) != 2:
                raise DocumentError(f"{where}[{r}][{c}]: complex entries are [re, im] pairs")
            out[r, c] = complex(_num(z[0], where), _num(z[1], where))
    return out


def encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


@dataclass(frozen=True, eq=False)
class WorkbenchDocument:
    dim: int
    rho: np.ndarray | None = None
    projectors: tuple[tuple[str, np.ndarray], ...] = ()
    contexts: tuple[tuple[str, ...], ...] | None = None
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorkbenchDocument):
            return NotImplemented
        if (self.dim, self.contexts, dict(self.metadata)) != (other.dim, other.contexts, dict(other.metadata)):
            return False
        if (self.rho is None) != (other.rho is None):
            return False
        if self.rho is not None and not np.array_equal(self.rho, other.rho):
            return False
        if [i for i, _ in self.projectors] != [i for i, _ in other.projectors]:
            return False
        return all(np.array_equal(a, b) for (_, a), (_, b) in zip(self.projectors, other.projectors))

    @property
    def ids(self) -> list[str]:
        return [i for i, _ in self.projectors]

    def density(self, tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
        if self.rho is None:
            raise DocumentError("document has no rho")
        return make_density(self.rho, tol)

    def projector_items(self, tol: Tolerances = DEFAULT_TOL) -> list[tuple[str, Projector]]:
        return [(i, make_projector(m, tol)) for i, m in self.projectors]

    def graph(self, tol: Tolerances = DEFAULT_TOL) -> PowerGraph:
        return build_commutation_graph(self.projector_items(tol), tol)

    def context_items(self, tol: Tolerances = DEFAULT_TOL) -> list[list[tuple[str, Projector]]]:
        """Each declared context as its list of ``(id, Projector)`` pairs."""
        lookup = dict(self.projector_items(tol))
        return [[(i, lookup[i]) for i in ctx] for ctx in self.contexts or ()]


def document_from_dict(d: Any) -> WorkbenchDocument:
    if not isinstance(d, dict):
        raise DocumentError("document must be a JSON object")
    unknown = set(d) - set(KEYS)
    if unknown:
        raise DocumentError(f"unknown keys: {sorted(unknown)}")
    dim = d.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise DocumentError(f"dim must be a positive integer, got {dim!r}")
    rho = None if d.get("rho") is None else decode_matrix(d["rho"], dim, "rho")

    raw = d.get("projectors") or []
    if not isinstance(raw, list):
        raise DocumentError("projectors must be a list")
    projectors = []
    seen: set[str] = set()
    for k, item in enumerate(raw):
        if not isinstance(item, dict) or set(item) != {"id", "matrix"}:
            raise DocumentError(f"projectors[{k}] must be an object with keys id and matrix")
        pid = item["id"]
        if not isinstance(pid, str) or not pid:
            raise DocumentError(f"projectors[{k}].id must be a non-empty string")
        if pid in seen:
            raise DocumentError(f"duplicate projector id {pid!r}")
        seen.add(pid)
        projectors.append((pid, decode_matrix(item["matrix"], dim, f"projectors[{pid}]")))

    contexts = d.get("contexts")
    if contexts is not None:
        if not isinstance(contexts, list):
            raise DocumentError("contexts must be a list of id lists")
        checked = []
        for k, ctx in enumerate(contexts):
            if not isinstance(ctx, list) or not ctx or not all(isinstance(i, str) for i in ctx):
                raise DocumentError(f"contexts[{k}] must be a non-empty list of ids")
            missing = [i for i in ctx if i not in seen]
            if missing:
                raise DocumentError(f"contexts[{k}] references unknown ids {missing}")
            if len(set(ctx)) != len(ctx):
                raise DocumentError(f"contexts[{k}] repeats an id")
            checked.append(tuple(ctx))
        contexts = tuple(checked)

    meta = d.get("metadata") or {}
    if not isinstance(meta, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in meta.items()):
        raise DocumentError("metadata must map strings to strings")
    return WorkbenchDocument(dim, rho, tuple(projectors), contexts, dict(meta))


def document_to_dict(doc: WorkbenchDocument) -> dict:
    return {
        "dim": doc.dim,
        "rho": None if doc.rho is None else encode_matrix(doc.rho),
        "projectors": [{"id": i, "matrix": encode_matrix(m)} for i, m in doc.projectors],
        "contexts": None if doc.contexts is None else [list(c) for c in doc.contexts],
        "metadata": dict(sorted(doc.metadata.items())),
    }


def parse_document(text: str) -> WorkbenchDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return document_from_dict(data)


def dumps_document(doc: WorkbenchDocument) -> str:
    d = document_to_dict(doc)
    lines = ["{", f'  "dim": {d["dim"]},', f'  "rho": {json.dumps(d["rho"])},']
    if d["projectors"]:
        lines.append('  "projectors": [')
        body = [f"    {json.dumps(p)}" for p in d["projectors"]]
        lines.append(",\n".join(body))
        lines.append("  ],")
    else:
        lines.append('  "projectors": [],')
    lines.append(f'  "contexts": {json.dumps(d["contexts"])},')
    lines.append(f'  "metadata": {json.dumps(d["metadata"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_document(path: str | Path) -> WorkbenchDocument:
    return parse_document(Path(path).read_text())


def make_document(
    dim: int,
    rho=None,
    projectors: Sequence[tuple[str, Any]] = (),
    contexts: Sequence[Sequence[str]] | None = None,
    metadata: Mapping[str, str] | None = None,
) -> WorkbenchDocument:
    """Build a document from in-memory values, with the same checks as parsing."""
    mats = [(i, p.matrix if isinstance(p, Projector) else np.asarray(p)) for i, p in projectors]
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    d = {
        "dim": dim,
        "rho": None if rho is None else encode_matrix(rho),
        "projectors": [{"id": i, "matrix": encode_matrix(m)} for i, m in mats],
        "contexts": None if contexts is None else [list(c) for c in contexts],
        "metadata": dict(metadata or {}),
    }
    return document_from_dict(d)


# ---------------------------------------------------------------------------
# PSA tables


def psa_to_dict(psa: PSA) -> dict:
    return {
        "rows": [[i, p] for i, p in psa.rows()],
        "shots": psa.shots,
        "low_statistics": psa.low_statistics,
    }


def psa_from_dict(d: Any, tol: Tolerances = DEFAULT_TOL) -> PSA:
    """Accepts ``{"rows": [[id, p], ...]}`` or a bare ``{id: p}`` object."""
    if isinstance(d, dict) and "rows" in d:
        rows = d["rows"]
        if not isinstance(rows, list) or not all(isinstance(r, list) and len(r) == 2 for r in rows):
            raise DocumentError("rows must be [id, potentia] pairs")
        pairs = [(str(i), _num(p, f"rows[{i}]")) for i, p in rows]
        return make_psa(pairs, shots=d.get("shots"), low_statistics=bool(d.get("low_statistics", False)), tol=tol)
    if isinstance(d, dict):
        return make_psa({str(k): _num(v, k) for k, v in d.items()}, tol=tol)
    raise DocumentError("PSA table must be a JSON object")
