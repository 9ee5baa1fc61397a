"""Command-line interface: ``logoswb <command> --input doc.json [...]``.

Exit codes: 0 success, 1 validation failure, 2 computation error, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import dot as dot_mod
from .config import DEFAULT_TOL, Tolerances
from .document import WorkbenchDocument, load_document, psa_from_dict, psa_to_dict
from .errors import ComputationError, DocumentError, ValidationError
from .graph import build_commutation_graph, is_context, maximal_contexts
from .linalg import make_projector
from .psa import (
    evaluate_psa,
    informationally_complete_family,
    purity_report,
    quantum_perspective,
    reconstruct_density,
)
from .sampling import DEFAULT_MIN_SHOTS, estimate_psa, sample_context
from .topos import abelian_context_from, born_recovery, build_poset, daseinisation_subobject, measure
from .valuations import (
    NoneExists,
    check_intensive_valuation,
    find_binary_valuation,
    ks18_problem,
    make_problem,
)

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _matrix_rows(m) -> list[str]:
    return ["  ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in row) for row in m]


def _need_doc(args) -> WorkbenchDocument:
    if not args.input:
        raise UsageError("--input FILE is required for this command")
    try:
        return load_document(args.input)
    except FileNotFoundError:
        raise UsageError(f"no such file: {args.input}") from None


# ---------------------------------------------------------------------------
# commands return (json-able payload, table text, exit code)


def cmd_validate(args, tol: Tolerances):
    doc = _need_doc(args)
    checks: list[tuple[str, bool, str]] = []

    if doc.rho is not None:
        try:
            doc.density(tol)
            checks.append(("rho", True, "density matrix"))
        except ValidationError as exc:
            checks.append(("rho", False, str(exc)))
    items = []
    for pid, m in doc.projectors:
        try:
            items.append((pid, make_projector(m, tol)))
            checks.append((f"projector {pid}", True, f"rank {items[-1][1].rank}"))
        except ValidationError as exc:
            checks.append((f"projector {pid}", False, str(exc)))
    if doc.contexts and len(items) == len(doc.projectors):
        g = build_commutation_graph(items, tol)
        for k, ctx in enumerate(doc.contexts):
            ok = is_context(g, ctx)
            checks.append((f"context {k}", ok, "pairwise commuting" if ok else "contains non-commuting projectors"))
    passed = all(ok for _, ok, _ in checks)
    payload = {"valid": passed, "checks": [{"check": n, "ok": ok, "detail": d} for n, ok, d in checks]}
    text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {n}: {d}" for n, ok, d in checks) or "empty document"
    return payload, text, EXIT_OK if passed else EXIT_INVALID


def cmd_psa(args, tol):
    doc = _need_doc(args)
    psa = evaluate_psa(doc.density(tol), doc.graph(tol), tol)
    text = "\n".join(f"{i}\t{_fmt(p)}" for i, p in psa.rows())
    return psa_to_dict(psa), text, EXIT_OK


def _rank_one_contexts(doc: WorkbenchDocument, tol):
    if doc.contexts:
        return doc.context_items(tol)
    g = doc.graph(tol)
    return [[(i, g.projector(i)) for i in c.ids] for c in maximal_contexts(g)]


def cmd_perspectives(args, tol):
    doc = _need_doc(args)
    rho = doc.density(tol)
    out, lines = [], []
    for ctx in _rank_one_contexts(doc, tol):
        qp = quantum_perspective(rho, ctx, tol)
        entry = {"ids": list(qp.ids), "potentia": qp.potentia.tolist()}
        if qp.coefficients is not None:
            entry["coefficients"] = [_c(z) for z in qp.coefficients]
        out.append(entry)
        lines.append("context " + ", ".join(qp.ids))
        for k, i in enumerate(qp.ids):
            coef = "" if qp.coefficients is None else f"\tc = {qp.coefficients[k]:.6f}"
            lines.append(f"  {i}\t{_fmt(qp.potentia[k])}{coef}")
    return {"perspectives": out}, "\n".join(lines), EXIT_OK


def cmd_purity(args, tol):
    doc = _need_doc(args)
    r = purity_report(doc.density(tol), tol)
    payload = {
        "trace_purity": r.trace_purity,
        "rank": r.rank,
        "idempotency_defect": r.idempotency_defect,
        "is_pure": r.is_pure,
    }
    text = "\n".join(f"{k}\t{v}" for k, v in payload.items())
    return payload, text, EXIT_OK


def cmd_reconstruct(args, tol):
    doc = _need_doc(args)
    family = doc.projector_items(tol) or informationally_complete_family(doc.dim, tol)
    if args.psa:
        psa = psa_from_dict(json.loads(Path(args.psa).read_text()), tol)
    elif doc.rho is not None:
        psa = evaluate_psa(doc.density(tol), build_commutation_graph(family, tol), tol)
    else:
        raise UsageError("reconstruct needs --psa FILE or a document with rho")
    rec = reconstruct_density(psa, family, doc.dim, tol)
    payload = {
        "rho": [[_c(z) for z in row] for row in rec.rho.matrix],
        "residual": rec.residual,
        "clipping": rec.clipping,
    }
    text = "\n".join(_matrix_rows(rec.rho.matrix) + [f"residual\t{rec.residual:.3e}", f"clipping\t{rec.clipping:.3e}"])
    return payload, text, EXIT_OK


def cmd_contexts(args, tol):
    doc = _need_doc(args)
    ctxs = maximal_contexts(doc.graph(tol))
    return {"contexts": [list(c.ids) for c in ctxs]}, "\n".join(" ".join(c.ids) for c in ctxs), EXIT_OK


def cmd_ks(args, tol):
    if args.fixture:
        problem, doc = ks18_problem(tol), None
    else:
        doc = _need_doc(args)
        if not doc.contexts:
            raise UsageError("ks needs declared contexts (or --fixture ks18)")
        problem = make_problem(doc.contexts, doc.projector_items(tol), tol=tol)
    result = find_binary_valuation(problem, tol)
    if isinstance(result, NoneExists):
        payload: dict[str, Any] = {"exists": False, "explored": result.explored}
        text = f"no binary valuation exists (explored {result.explored} search nodes)"
    else:
        payload = {"exists": True, "explored": result.explored, "assignment": dict(result.assignment)}
        text = "\n".join(f"{i}\t{v}" for i, v in result.assignment.items())
    if doc is not None and doc.rho is not None:
        g = build_commutation_graph(list(problem.projectors.items()), tol)
        rep = check_intensive_valuation(evaluate_psa(doc.density(tol), g, tol), problem, tol.born)
        payload["intensive"] = {"passed": rep.passed, "sums": [c.total for c in rep.contexts]}
        text += f"\nintensive valuation: {'pass' if rep.passed else 'FAIL'} (worst defect {rep.worst_defect:.3e})"
    return payload, text, EXIT_OK


def cmd_dasein(args, tol):
    doc = _need_doc(args)
    if not args.projector:
        raise UsageError("dasein needs --projector ID")
    if not doc.contexts:
        raise UsageError("dasein needs declared contexts to build the poset")
    lookup = dict(doc.projector_items(tol))
    if args.projector not in lookup:
        raise UsageError(f"unknown projector id {args.projector!r}")
    p = lookup[args.projector]
    ctxs = [abelian_context_from([lookup[i] for i in c], doc.dim, "+".join(c), tol) for c in doc.contexts]
    poset = build_poset(ctxs, close=args.close, tol=tol)
    sub = daseinisation_subobject(p, poset, tol)
    payload: dict[str, Any] = {
        "contexts": [
            {"label": v.label, "atoms": len(v), "selected": sorted(sub.selection[k])}
            for k, v in enumerate(poset.contexts)
        ]
    }
    lines = [f"{v.label}\tselected {sorted(sub.selection[k])} of {len(v)} atoms" for k, v in enumerate(poset.contexts)]
    if doc.rho is not None:
        rho = doc.density(tol)
        mu = measure(rho, sub, tol)
        rec = born_recovery(rho, p, poset, tol)
        for entry, val in zip(payload["contexts"], mu.values):
            entry["measure"] = val
        lines = [f"{line}\tmu = {_fmt(val)}" for line, val in zip(lines, mu.values)]
        payload["born_recovery"] = {"minimum": rec.minimum, "attained_at": rec.attained_at, "born": rec.born}
        lines.append(f"min mu = {_fmt(rec.minimum)} at {rec.attained_at}; Tr(rho P) = {_fmt(rec.born)}")
    return payload, "\n".join(lines), EXIT_OK


def cmd_sample(args, tol):
    doc = _need_doc(args)
    ctxs = _rank_one_contexts(doc, tol)
    if not 0 <= args.context < len(ctxs):
        raise UsageError(f"--context must be in [0, {len(ctxs)})")
    run = sample_context(doc.density(tol), ctxs[args.context], args.shots, args.seed, tol)
    est = estimate_psa(run, args.min_shots)
    payload = {"shots": run.shots, "seed": run.seed, "counts": dict(run.counts), "estimate": psa_to_dict(est)}
    lines = [f"{i}\t{run.counts[i]}\t{_fmt(est.table[i])}" for i in run.ids]
    if est.low_statistics:
        lines.append(f"warning: {run.shots} shots is below the {args.min_shots}-shot threshold")
    return payload, "\n".join(lines), EXIT_OK


def cmd_dot(args, tol):
    doc = _need_doc(args)
    g = doc.graph(tol)
    psa = evaluate_psa(doc.density(tol), g, tol) if doc.rho is not None else None
    highlight = [h.split(",") for h in args.highlight or ()]
    text = dot_mod.export_dot(g, psa, highlight)
    return {"dot": text}, text.rstrip("\n"), EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, "check a document"),
    "psa": (cmd_psa, "Born potentia of every projector"),
    "perspectives": (cmd_perspectives, "per-context coefficients and potentia"),
    "purity": (cmd_purity, "trace purity, rank and idempotency defect of rho"),
    "reconstruct": (cmd_reconstruct, "density matrix from a PSA table"),
    "contexts": (cmd_contexts, "maximal contexts of the commutation graph"),
    "ks": (cmd_ks, "search for a binary valuation"),
    "dasein": (cmd_dasein, "daseinisation and measure over the declared contexts"),
    "sample": (cmd_sample, "simulate measurements in one context"),
    "dot": (cmd_dot, "export the graph as DOT"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="workbench JSON document")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--tol", type=float, help="set every numerical tolerance to this value")
    common.add_argument("--format", choices=("table", "json"), default="table")

    parser = _Parser(prog="logoswb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        if name == "reconstruct":
            sp.add_argument("--psa", help="PSA table JSON ({'rows': [[id, p], ...]})")
        elif name == "ks":
            sp.add_argument("--fixture", choices=("ks18",), help="use a shipped problem instead of --input")
        elif name == "dasein":
            sp.add_argument("--projector", help="id of the projector to daseinise")
            sp.add_argument("--close", action="store_true", help="close the poset under pairwise meets")
        elif name == "sample":
            sp.add_argument("--shots", type=int, default=1000)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--context", type=int, default=0, help="index of the context to measure")
            sp.add_argument("--min-shots", type=int, default=DEFAULT_MIN_SHOTS)
        elif name == "dot":
            sp.add_argument("--highlight", action="append", help="comma-separated ids of one context (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    tol = DEFAULT_TOL if args.tol is None else Tolerances.uniform(args.tol)
    fn, _ = COMMANDS[args.command]
    try:
        payload, text, code = fn(args, tol)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, DocumentError) as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ComputationError as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    out = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text + "\n"
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
