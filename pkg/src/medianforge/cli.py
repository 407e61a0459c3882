"""Command-line front end: parse JSON inputs, dispatch, emit deterministic
reports.

Exit codes: 0 success (median for ``check``), 2 non-median, 3 medianness
unknown (condition 1 undecided and the oracle skipped), 64 usage, 65
data/parse, 70 internal assertion, 71 resource ceiling.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .actions import invariant_cube, parse_action
from .core import FAMILIES, Graph, generate, medianness_oracle
from .cubes import enumerate_cubes, verylocal_check
from .cubulation import Wallspace, dualize, wall_distance_check
from .errors import (
    HalfspaceError,
    InputError,
    InternalError,
    MedianForgeError,
    ResourceLimitError,
)
from .hyperplanes import canonical_embedding, edge_class_map, hyperplanes
from .plcircle import PLCircleHomeo, growth_profile

EXIT_OK = 0
EXIT_NON_MEDIAN = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70
EXIT_RESOURCE = 71


class UsageError(MedianForgeError):
    pass


@dataclass
class Report:
    """Machine-readable body plus exit code; rendered as canonical JSON
    (byte-identical across runs) or as indented text."""

    body: object
    exit_code: int = EXIT_OK
    raw_text: str | None = None

    def render(self, fmt="json"):
        if self.raw_text is not None:
            return self.raw_text
        if fmt == "json":
            return json.dumps(self.body, sort_keys=True, separators=(",", ":")) + "\n"
        return _render_text(self.body) + "\n"


def _render_text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if not obj:
            return f"{pad}[]"
        return "\n".join(
            _render_text(v, indent) if isinstance(v, (dict, list))
            else f"{pad}- {v}"
            for v in obj
        )
    return f"{pad}{obj}"


def _sorted_names(vs):
    return sorted(vs)


def export_dot(g: Graph, coloring=None) -> str:
    """DOT text of the 1-skeleton; with ``coloring`` (a hyperplane list),
    the edges of each hyperplane share one color."""
    edge_color = {}
    if coloring:
        total = len(coloring)
        cls = edge_class_map(g)
        hue = {h.id: i / total for i, h in enumerate(coloring)}
        for e in g.edges:
            edge_color[e] = f"{hue[cls[e].id]:.3f} 0.700 0.900"
    lines = ["graph G {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for u, v in g.edges:
        if (u, v) in edge_color:
            lines.append(f'  "{u}" -- "{v}" [color="{edge_color[u, v]}"];')
        else:
            lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- input helpers ----------------------------------------------------------


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _load_graph(path):
    return Graph.from_json_obj(_load_json(path))


def _hyperplane_obj(h):
    return {
        "id": list(h.id),
        "edges": [list(e) for e in sorted(h.edges)],
        "halfspaces": [_sorted_names(h.side_a), _sorted_names(h.side_b)],
    }


def _local_report_obj(rep):
    return {
        "condition1": rep.condition1,
        "condition1_note": rep.condition1_note,
        "condition1_witness": list(rep.condition1_witness)
        if rep.condition1_witness
        else None,
        "condition2": rep.condition2,
        "condition2_witness": _cond2_obj(rep.condition2_witness),
        "condition3": rep.condition3,
        "condition3_witness": _cond3_obj(rep.condition3_witness),
    }


def _cond2_obj(w):
    if w is None:
        return None
    v, a, b, mates = w
    return {"vertex": v, "edges_to": [a, b], "squares_via": list(mates)}


def _cond3_obj(w):
    if w is None:
        return None
    v, triple = w
    return {"vertex": v, "edges_to": list(triple)}


# -- verb handlers ------------------------------------------------------------


def _cmd_gen(args):
    if args.family in ("random_tree",) and args.seed is None:
        raise UsageError(f"family {args.family} requires --seed")
    g = generate(args.family, args.params, args.seed)
    if args.dot:
        return Report(g.to_json_obj(), raw_text=export_dot(g))
    return Report(g.to_json_obj())


def _cmd_check(args):
    g = _load_graph(args.graph)
    local = verylocal_check(g, contraction_budget=args.contraction_budget)
    run_oracle = (
        args.oracle
        if args.oracle is not None
        else g.num_vertices < 1000
    )
    oracle_obj = None
    if run_oracle:
        oracle = medianness_oracle(g, jobs=args.jobs)
        oracle_obj = {
            "verdict": oracle.verdict,
            "witness": list(oracle.witness) if oracle.witness else None,
            "candidates": _sorted_names(oracle.candidates)
            if oracle.candidates
            else None,
        }
        median = oracle.verdict
    elif local.all_yes:
        median = True
    elif not local.condition2 or not local.condition3 or local.condition1 == "no":
        median = False
    else:
        median = None
    body = {
        "median": median,
        "oracle": oracle_obj,
        "local": _local_report_obj(local),
    }
    if median is None:
        return Report(body, EXIT_UNKNOWN)
    return Report(body, EXIT_OK if median else EXIT_NON_MEDIAN)


def _cmd_hyperplanes(args):
    g = _load_graph(args.graph)
    hps = hyperplanes(g)
    return Report({"hyperplanes": [_hyperplane_obj(h) for h in hps]})


def _cmd_cubes(args):
    g = _load_graph(args.graph)
    complex_ = enumerate_cubes(g)
    if args.dot:
        return Report(
            complex_.to_json_obj(), raw_text=export_dot(g, hyperplanes(g))
        )
    return Report(complex_.to_json_obj())


def _cmd_embed(args):
    g = _load_graph(args.graph)
    basepoint = args.basepoint if args.basepoint is not None else g.vertices[0]
    table = canonical_embedding(g, basepoint)
    return Report(
        {
            "basepoint": table.basepoint,
            "hyperplanes": [list(h.id) for h in table.hyperplanes],
            "coordinates": {v: table.bits(v) for v in g.vertices},
        }
    )


def _cmd_dualize(args):
    ws = Wallspace.from_json_obj(_load_json(args.wallspace))
    graph, point_map = dualize(ws)
    check = wall_distance_check(ws, graph, point_map)
    return Report(
        {
            "graph": graph.to_json_obj(),
            "point_map": dict(sorted(point_map.items())),
            "wall_distance": {
                "ok": check.ok,
                "pairs_checked": check.pairs_checked,
                "violations": [list(v) for v in check.violations],
            },
        }
    )


def _cmd_fixed_cube(args):
    g = _load_graph(args.graph)
    gens = parse_action(g, _load_json(args.action))
    cube = invariant_cube(g, gens)
    return Report(
        {"dimension": cube.dimension, "vertices": list(cube.vertices)}
    )


def _cmd_pl_growth(args):
    homeo = PLCircleHomeo.from_json_obj(_load_json(args.homeo))
    report = growth_profile(homeo, args.n_max)
    return Report(
        {
            "sing_counts": list(report.sing_counts),
            "classification": report.classification,
            "translation_length": report.translation_length,
        }
    )


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(
        prog="medianforge",
        description="Median graphs, cube completions, wallspace duals, "
        "group actions, and PL circle growth.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument(
        "--format",
        choices=("json", "text"),
        default="json",
        help="output rendering (default json; json output is byte-stable)",
    )
    common.add_argument("-o", "--output", help="write the report to a file")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_verb(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_verb("gen", help="write a corpus graph")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("params", type=int, nargs="+")
    p.add_argument("--seed", type=int)
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    p.set_defaults(func=_cmd_gen)

    p = add_verb("check", help="medianness oracle plus local criterion")
    p.add_argument("graph")
    oracle = p.add_mutually_exclusive_group()
    oracle.add_argument("--oracle", dest="oracle", action="store_true", default=None)
    oracle.add_argument("--no-oracle", dest="oracle", action="store_false")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--contraction-budget", type=int, default=20000)
    p.set_defaults(func=_cmd_check)

    p = add_verb("hyperplanes", help="edge classes and halfspaces")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_hyperplanes)

    p = add_verb("cubes", help="cube completion cells and f-vector")
    p.add_argument("graph")
    p.add_argument(
        "--dot", action="store_true", help="emit hyperplane-colored DOT"
    )
    p.set_defaults(func=_cmd_cubes)

    p = add_verb("embed", help="canonical Hamming-cube embedding")
    p.add_argument("graph")
    p.add_argument("--basepoint")
    p.set_defaults(func=_cmd_embed)

    p = add_verb("dualize", help="dual median graph of a wallspace")
    p.add_argument("wallspace")
    p.set_defaults(func=_cmd_dualize)

    p = add_verb("fixed-cube", help="cube stabilised by a finite automorphism action"
    )
    p.add_argument("graph")
    p.add_argument("action")
    p.set_defaults(func=_cmd_fixed_cube)

    p = add_verb("pl-growth", help="growth of Sing(g^n) for a PL circle map")
    p.add_argument("homeo")
    p.add_argument("--n-max", type=int, default=64)
    p.set_defaults(func=_cmd_pl_growth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report = args.func(args)
    except UsageError as exc:
        print(f"medianforge: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, HalfspaceError) as exc:
        print(f"medianforge: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"medianforge: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ResourceLimitError as exc:
        print(f"medianforge: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InternalError, AssertionError) as exc:
        print(f"medianforge: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    text = report.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


def entrypoint():
    sys.exit(main())
