"""Write the small example documents in fixtures/ used by the README and CLI tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from logoswb.document import dumps_document, make_document
from logoswb.linalg import make_projector

OUT = Path(__file__).resolve().parents[1] / "fixtures"

TWO_BASES = [
    ("P0", make_projector(np.diag([1.0, 0.0]))),
    ("P1", make_projector(np.diag([0.0, 1.0]))),
    ("Pp", make_projector(0.5 * np.array([[1.0, 1.0], [1.0, 1.0]]))),
    ("Pm", make_projector(0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]]))),
]
CONTEXTS = [["P0", "P1"], ["Pp", "Pm"]]


def pure_qubit():
    a, b = 0.6, 0.8
    v = make_projector(np.array([[a * a, a * b], [a * b, b * b]]))
    w = make_projector(np.array([[b * b, -a * b], [-a * b, a * a]]))
    return make_document(
        2,
        rho=v.matrix,
        projectors=[*TWO_BASES[:2], ("v", v), ("w", w)],
        contexts=[["P0", "P1"], ["v", "w"]],
        metadata={"description": "pure state v = (0.6, 0.8) with its own and the computational context"},
    )


def main() -> None:
    OUT.mkdir(exist_ok=True)
    docs = {
        "two_basis_dim2.json": make_document(
            2, np.diag([1.0, 0.0]), TWO_BASES, CONTEXTS, {"description": "computational and +/- bases, state |0><0|"}
        ),
        "mixed_dim2.json": make_document(
            2, np.diag([0.5, 0.5]), TWO_BASES, CONTEXTS, {"description": "computational and +/- bases, maximally mixed"}
        ),
        "pure_qubit.json": pure_qubit(),
    }
    for name, doc in docs.items():
        (OUT / name).write_text(dumps_document(doc))
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    main()
