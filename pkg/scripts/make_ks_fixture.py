"""Regenerate src/logoswb/data/ks18.json: the 18-vector, 9-context KS set in C^4.

Each row is one context of four mutually orthogonal {0, +-1} vectors; every
vector appears in exactly two contexts, and nine contexts is odd, so no
exactly-one-per-context {0,1} assignment exists.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from logoswb.document import dumps_document, make_document
from logoswb.linalg import make_projector

CONTEXTS = [
    ["0001", "0010", "1100", "1-100"],
    ["0001", "0100", "1010", "10-10"],
    ["1-11-1", "1-1-11", "1100", "0011"],
    ["1-11-1", "1111", "10-10", "010-1"],
    ["0010", "0100", "1001", "100-1"],
    ["1-1-11", "1111", "100-1", "01-10"],
    ["11-11", "111-1", "1-100", "0011"],
    ["11-11", "-1111", "1010", "010-1"],
    ["111-1", "-1111", "1001", "01-10"],
]


def parse(code: str) -> np.ndarray:
    out, sign = [], 1
    for ch in code:
        if ch == "-":
            sign = -1
            continue
        out.append(sign * int(ch))
        sign = 1
    return np.array(out, dtype=float)


def main(path: str) -> None:
    labels: dict[str, str] = {}
    for ctx in CONTEXTS:
        for code in ctx:
            labels.setdefault(code, f"k{len(labels) + 1:02d}")
    assert len(labels) == 18
    projectors = []
    for code, label in labels.items():
        v = parse(code)
        # entries are exact dyadic fractions this way
        projectors.append((label, make_projector(np.outer(v, v) / (v @ v))))
    contexts = [[labels[c] for c in ctx] for ctx in CONTEXTS]
    for ctx in CONTEXTS:
        vs = [parse(c) for c in ctx]
        gram = np.array([[a @ b for b in vs] for a in vs])
        assert np.allclose(gram, np.diag(np.diag(gram))), ctx
    doc = make_document(
        4,
        projectors=projectors,
        contexts=contexts,
        metadata={"name": "ks18", "vectors": " ".join(f"{labels[c]}={c}" for c in labels)},
    )
    Path(path).write_text(dumps_document(doc))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/logoswb/data/ks18.json")
