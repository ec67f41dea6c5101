"""Command-line surface: ingestion, analysis reports, machine-readable output.

Subcommands: analyze | partition | kms | ground | growth | compare | family.
Default output is human text; --json switches to a deterministic machine
schema (stable key order, floats at 15 significant digits, big integers as
decimal strings).  Exit codes: 0 success, 1 comparison refuted, 2 input or
usage error (also --iso mismatch), 3 at-criticality.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings

from . import __version__
from .compare import bratteli_levels, fingerprint, isomorphic, match_vertices
from .covertree import GROWTH_WINDOW, cover_levels, periodic_tree_levels, prune_and_compare
from .errors import AtCriticalityError, KmsGraphError, NearTieWarning
from .families import (
    AffineRule,
    ladder_partition,
    ladder_truncation_check,
    skip_harmonic,
    staircase_bruteforce_identity,
    staircase_summability,
    wild_graph,
)
from .graph import DirectedMultigraph, graph_from_json, parse_graph
from .kms import classify_kms, ground_states, minimal_components, negative_beta_summable_vertices
from .series import partition_closed_form, partition_value, generating_function
from .spectral import (
    MAX_POWER_ITER,
    NEG_INF,
    RADIUS_TOL,
    critical_temperature,
    graph_log_radius,
    scc_decomposition,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2
EXIT_CRITICAL = 3

TOLERANCE_ENV = "KMSGRAPH_TOLERANCE"


# -- deterministic JSON -------------------------------------------------------


def _format_float(x: float) -> str:
    if x != x:
        return '"nan"'
    if x == math.inf:
        return '"inf"'
    if x == NEG_INF:
        return '"-inf"'
    return format(x, ".15g")


def dumps_canonical(value, indent: int = 0) -> str:
    """JSON with insertion-order keys and 15-significant-digit floats, so the
    same input and flags always produce the same bytes."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  "{key}": {dumps_canonical(entry, indent + 1)}'
            for key, entry in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ", ".join(dumps_canonical(entry, indent) for entry in value)
        return "[" + inner + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, int):
        return str(value)
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _float_or_inf(x: float):
    return x  # canonical dumper handles the infinities


# -- report plumbing ----------------------------------------------------------


def _load_graph(path: str) -> DirectedMultigraph:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(text)
    return parse_graph(text)


def _emit(args, command: list[str], g: DirectedMultigraph | None, payload: dict,
          caught: list[str], human: str) -> None:
    if args.json:
        report = {
            "command": command,
            "version": __version__,
            "graph": None
            if g is None
            else {"vertices": g.vertex_count, "edges": g.edge_count},
            "payload": payload,
            "warnings": caught,
        }
        sys.stdout.write(dumps_canonical(report) + "\n")
    else:
        sys.stdout.write(human)
        if not human.endswith("\n"):
            sys.stdout.write("\n")
    for message in caught:
        sys.stderr.write(f"warning: {message}\n")


def _beta_from(args) -> float:
    if getattr(args, "beta_log", None) is not None:
        if args.beta_log <= 0:
            raise KmsGraphError("--beta-log needs a positive argument")
        return math.log(args.beta_log)
    return args.beta


# -- subcommands ----------------------------------------------------------------


def _cmd_analyze(args) -> int:
    g = _load_graph(args.graph)
    report = scc_decomposition(g, max_iter=args.max_iter)
    pmc = minimal_components(g, report, args.tolerance)
    betas = {v: critical_temperature(g, v, report, args.tolerance) for v in g.vertices}

    components = []
    for comp in report.components:
        components.append(
            {
                "vertices": list(comp.vertices),
                "radius": comp.radius,
                "radius_error": comp.radius_error,
                "period": comp.period,
                "trivial": comp.trivial,
                "has_cycle": comp.has_cycle,
            }
        )
    type_three = []
    for i in pmc:
        comp = report.components[i]
        type_three.append(
            {
                "component": i,
                "beta": math.log(comp.radius),
                "lambda": comp.radius ** (-comp.period),
                "period": comp.period,
            }
        )
    payload = {
        "components": components,
        "condensation_edges": sorted(list(e) for e in report.edges),
        "reachable": [sorted(r) for r in report.reachable],
        "betas": {v: betas[v].value for v in g.vertices},
        "log_radius": graph_log_radius(report),
        "pmc": pmc,
        "critical_states": type_three,
        "negative_beta_summable": sorted(negative_beta_summable_vertices(g, report)),
    }

    lines = [f"graph: {g.vertex_count} vertices, {g.edge_count} edges"]
    for i, comp in enumerate(report.components):
        mark = " (pmc)" if i in pmc else ""
        period_text = comp.period if comp.period is not None else "undefined"
        lines.append(
            f"component {i}: {{{', '.join(comp.vertices)}}} radius={comp.radius:.12g} "
            f"period={period_text}{mark}"
        )
    for v in g.vertices:
        lines.append(f"beta[{v}] = {betas[v].value:.12g}")
    for entry in type_three:
        lines.append(
            f"critical state at component {entry['component']}: beta={entry['beta']:.12g} "
            f"lambda={entry['lambda']:.12g} period={entry['period']}"
        )
    return payload, g, "\n".join(lines)


def _cmd_partition(args) -> int:
    g = _load_graph(args.graph)
    if args.all:
        rf = generating_function(g)
        payload = {"generating_function": rf.to_payload()}
        human = f"H(t) = {_poly_text(rf.num)} / {_poly_text(rf.den)}"
        return payload, g, human
    if args.vertex is None:
        raise KmsGraphError("partition needs --vertex or --all")
    if args.closed_form:
        rf = partition_closed_form(g, args.vertex)
        payload = {"vertex": args.vertex, "closed_form": rf.to_payload()}
        human = f"Z[{args.vertex}](t) = {_poly_text(rf.num)} / {_poly_text(rf.den)}"
        return payload, g, human
    if args.series is not None:
        from .graph import path_counts

        totals = path_counts(g, args.vertex, args.series).totals
        payload = {"vertex": args.vertex, "series": [str(c) for c in totals]}
        human = f"counts into {args.vertex}: {', '.join(str(c) for c in totals)}"
        return payload, g, human
    beta = _beta_from(args)
    if beta is None:
        raise KmsGraphError("partition needs one of --beta, --beta-log, --closed-form, --series")
    value = partition_value(g, args.vertex, beta, args.series_tol, radius_tol=args.tolerance)
    payload = {
        "vertex": args.vertex,
        "beta": beta,
        "value": value.value,
        "partial_sum": value.partial_sum,
        "tail_bound": value.tail_bound,
        "terms_used": value.terms_used,
    }
    text = "diverges" if value.diverges else f"{value.value:.12g}"
    human = f"Z[{args.vertex}]({beta:.12g}) = {text}"
    return payload, g, human


def _poly_text(coeffs) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}*t")
        else:
            terms.append(f"{c}*t^{i}")
    return "(" + (" + ".join(terms) if terms else "0") + ")"


def _cmd_kms(args) -> int:
    g = _load_graph(args.graph)
    beta = _beta_from(args)
    if beta is None:
        raise KmsGraphError("kms needs --beta or --beta-log")
    result = classify_kms(g, beta, tol=args.tolerance, max_iter=args.max_iter)
    payload = {
        "beta": result.beta,
        "type_I": [{"vertex": v, "Z": z} for v, z in result.type_I],
        "type_III": [
            {
                "component": list(state.component),
                "lambda": state.lam,
                "period": state.period,
                "chi": {v: x for v, x in state.chi.entries.items() if x > 0.0},
            }
            for state in result.type_III
        ],
        "all_type_I": result.all_type_I,
        "at_criticality": [list(c) for c in result.at_criticality],
    }
    lines = [f"beta = {beta:.12g}"]
    for v, z in result.type_I:
        lines.append(f"type I state at {v}: Z = {z:.12g}")
    for state in result.type_III:
        lines.append(
            f"type III state at {{{', '.join(state.component)}}}: "
            f"lambda = {state.lam:.12g}, period = {state.period}"
        )
    lines.append(f"all states type I: {'yes' if result.all_type_I else 'no'}")
    return payload, g, "\n".join(lines)


def _cmd_ground(args) -> int:
    g = _load_graph(args.graph)
    states = ground_states(g, args.depth)
    payload = {
        "depth": states[0].depth if states else 0,
        "states": [
            {
                "vertex": s.vertex,
                "rows": {w: [str(c) for c in row] for w, row in s.rows.items()},
            }
            for s in states
        ],
    }
    lines = []
    for s in states:
        lines.append(f"ground state at {s.vertex}:")
        for w, row in s.rows.items():
            lines.append(f"  from {w}: {', '.join(str(c) for c in row)}")
    return payload, g, "\n".join(lines)


def _cmd_growth(args) -> int:
    g = _load_graph(args.graph)
    levels = cover_levels(g, args.vertex, args.depth, args.window)
    comparison = prune_and_compare(g, args.vertex, args.depth, args.window)
    payload = {
        "vertex": args.vertex,
        "depth": args.depth,
        "levels": [str(c) for c in levels.levels],
        "upper_rate": levels.upper_rate,
        "lower_rate": levels.lower_rate,
        "log_upper_rate": math.log(levels.upper_rate) if levels.upper_rate > 0 else NEG_INF,
        "pruned_upper_rate": comparison.pruned.upper_rate,
        "rates_agree": comparison.agrees,
    }
    human = (
        f"levels at {args.vertex} to depth {args.depth}: upper rate "
        f"{levels.upper_rate:.12g}, lower rate {levels.lower_rate:.12g}, "
        f"pruned upper rate {comparison.pruned.upper_rate:.12g} "
        f"({'agree' if comparison.agrees else 'disagree'})"
    )
    return payload, g, human


def _cmd_compare(args) -> tuple:
    g = _load_graph(args.graph)
    h = _load_graph(args.other)
    depth = args.depth if args.depth is not None else 2 * max(g.vertex_count, h.vertex_count)
    result = match_vertices(g, h, depth)
    iso = None
    if args.iso and not result.refuted:
        iso = isomorphic(g, h)
    payload = {
        "depth": depth,
        "refuted": result.refuted,
        "refuted_at": result.refuted_at,
        "classes": [
            {"series": [str(c) for c in s], "left": list(lv), "right": list(rv)}
            for s, lv, rv in result.classes
        ],
        "bijections": result.bijection_count,
        "isomorphic": iso,
    }
    if result.refuted:
        human = f"REFUTED at depth {result.refuted_at}: fingerprint multisets differ"
        return payload, g, human, EXIT_REFUTED
    human = f"not refuted to depth {depth}; {result.bijection_count} compatible bijections"
    if iso is not None:
        human += f"; isomorphic: {'yes' if iso else 'no'}"
        if not iso:
            return payload, g, human, EXIT_INPUT
    return payload, g, human, EXIT_OK


def _cmd_family(args) -> int:
    if args.kind == "ladder":
        beta = _beta_from(args)
        if beta is None:
            raise KmsGraphError("family ladder needs --beta or --beta-log")
        result = ladder_partition(args.n, beta)
        residual = ladder_truncation_check(args.n, beta, args.depth)
        payload = {
            "kind": "ladder",
            "n": args.n,
            "beta": beta,
            "value": result.value,
            "sup_finite": result.sup_finite,
            "truncation_residual": residual,
        }
        human = (
            f"Z[v{args.n}]({beta:.12g}) = {result.value:.12g}; sup over n is "
            f"{'finite' if result.sup_finite else 'infinite'}"
        )
        return payload, None, human
    if args.kind == "staircase":
        steps = _parse_steps(args)
        result = staircase_summability(steps, args.beta, args.levels)
        payload = {
            "kind": "staircase",
            "beta": args.beta,
            "partial_products": list(result.partial_products),
            "verdict": result.verdict,
            "last_increment": result.last_increment,
        }
        human = (
            f"verdict: {result.verdict}; last partial product "
            f"{result.partial_products[-1]:.12g}"
        )
        return payload, None, human
    if args.kind == "skip":
        result = skip_harmonic(args.beta)
        payload = {
            "kind": "skip",
            "beta": args.beta,
            "ratio": result.ratio,
            "amplitude": result.amplitude,
            "residual": result.residual,
        }
        human = (
            f"chi_n = {result.amplitude:.12g} * {result.ratio:.12g}^n, "
            f"residual {result.residual:.3g}"
        )
        return payload, None, human
    if args.kind == "wild":
        exponents = [float(tok) for tok in args.d.split(",") if tok]
        family = wild_graph(exponents, args.depth)
        payload = {
            "kind": "wild",
            "depth": args.depth,
            "branches": [
                {
                    "exponent": exponents[b],
                    "predicted_beta": math.log(exponents[b]),
                    "multiplicities": list(family.sequences[f"b{b}"]),
                }
                for b in range(len(exponents))
            ],
            "vertices": family.graph.vertex_count,
        }
        human = "\n".join(
            f"branch {b}: predicted beta {math.log(exponents[b]):.12g}, "
            f"multiplicities {list(family.sequences[f'b{b}'])}"
            for b in range(len(exponents))
        ) or "hub-only graph"
        return payload, None, human
    raise KmsGraphError(f"unknown family kind {args.kind!r}")


def _parse_steps(args):
    if args.affine is not None:
        parts = args.affine.split(",")
        if len(parts) != 2:
            raise KmsGraphError("--affine needs 'slope,offset'")
        return AffineRule(int(parts[0]), int(parts[1]))
    if args.a is None:
        raise KmsGraphError("family staircase needs --a or --affine")
    return tuple(int(tok) for tok in args.a.split(",") if tok)


# -- argument parsing -----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmsgraph",
        description="Spectral and combinatorial invariants of directed multigraphs.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help=f"relative tolerance for radius comparisons (default {RADIUS_TOL}; "
        f"env {TOLERANCE_ENV})",
    )
    parser.add_argument(
        "--max-iter", type=int, default=MAX_POWER_ITER, help="power iteration cap"
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", help="components, radii, periods, critical temperatures")
    p.add_argument("graph")

    p = sub.add_parser("partition", help="partition function of a vertex")
    p.add_argument("graph")
    p.add_argument("--vertex")
    p.add_argument("--all", action="store_true", help="total generating function")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--beta-log", type=float, default=None, help="beta = ln(x), hits critical values exactly")
    p.add_argument("--closed-form", action="store_true")
    p.add_argument("--series", type=int, default=None, metavar="N", help="emit counts to depth N")
    p.add_argument("--series-tol", type=float, default=1e-12)

    p = sub.add_parser("kms", help="equilibrium-state classification at an inverse temperature")
    p.add_argument("graph")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--beta-log", type=float, default=None)

    p = sub.add_parser("ground", help="ground-state fingerprints")
    p.add_argument("graph")
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("growth", help="cover-tree level counts and growth rates")
    p.add_argument("graph")
    p.add_argument("--vertex", required=True)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--window", type=int, default=GROWTH_WINDOW)

    p = sub.add_parser("compare", help="fingerprint comparison of two graphs")
    p.add_argument("graph")
    p.add_argument("other")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--iso", action="store_true", help="also run the isomorphism search")

    p = sub.add_parser("family", help="parametrized family computations")
    p.add_argument("kind", choices=["ladder", "staircase", "skip", "wild"])
    p.add_argument("--n", type=int, default=0, help="ladder vertex index")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--beta-log", type=float, default=None)
    p.add_argument("--a", default=None, help="staircase steps, comma separated")
    p.add_argument("--affine", default=None, help="staircase rule 'slope,offset'")
    p.add_argument("--levels", type=int, default=60)
    p.add_argument("--d", default="", help="wild exponents, comma separated")
    p.add_argument("--depth", type=int, default=60)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.tolerance is None:
        env = os.environ.get(TOLERANCE_ENV)
        args.tolerance = float(env) if env else RADIUS_TOL

    handlers = {
        "analyze": _cmd_analyze,
        "partition": _cmd_partition,
        "kms": _cmd_kms,
        "ground": _cmd_ground,
        "growth": _cmd_growth,
        "family": _cmd_family,
    }

    try:
        with warnings.catch_warnings(record=True) as caught_warnings:
            warnings.simplefilter("always", NearTieWarning)
            if args.cmd == "compare":
                payload, g, human, code = _cmd_compare(args)
            else:
                payload, g, human = handlers[args.cmd](args)
                code = EXIT_OK
            caught = list(dict.fromkeys(str(w.message) for w in caught_warnings))
        _emit(args, [args.cmd] + [a for a in argv if a != args.cmd], g, payload, caught, human)
        return code
    except AtCriticalityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CRITICAL
    except (KmsGraphError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
