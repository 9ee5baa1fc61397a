"""Graphviz DOT export of power graphs."""

from __future__ import annotations

from typing import Sequence

from .errors import MissingNode
from .graph import Context, PowerGraph
from .psa import PSA


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    g: PowerGraph,
    psa: PSA | None = None,
    highlight: Sequence[Context | Sequence[str]] | None = None,
    name: str = "powers",
) -> str:
    """Undirected DOT text: ``id : potentia`` labels, commutation edges, contexts as clusters.

    Loops are left out. The output depends only on the inputs' order.
    """
    lines = [f"graph {_q(name)} {{", "  node [shape=circle];"]
    for i in g.ids:
        if psa is None:
            label = i
        else:
            if i not in psa.table:
                raise MissingNode(f"PSA has no value for {i!r}")
            label = f"{i} : {psa.table[i] + 0.0:.3f}"
        lines.append(f"  {_q(i)} [label={_q(label)}];")
    for k, ctx in enumerate(highlight or ()):
        ids = ctx.ids if isinstance(ctx, Context) else tuple(ctx)
        for i in ids:
            g.index(i)
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f'    label="C{k}";')
        lines.append("    style=dashed;")
        lines.extend(f"    {_q(i)};" for i in ids)
        lines.append("  }")
    lines.extend(f"  {_q(a)} -- {_q(b)};" for a, b in g.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
