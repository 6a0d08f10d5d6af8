"""Command line front end.

Deterministic JSON (or DOT) on stdout; exit 0 on success, exit 1 with
an error object on bad input or module errors, exit 2 when a
certification that theory says must succeed fails (surfaced on stderr
as well, since that would be a genuine finding).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .breakdiv import (
    all_break_divisors,
    break_divisor,
    certify_complete,
    charge_from_signature,
    external_orientations,
    generalized_break_divisors,
)
from .exactlp import LpError
from .graphs import Graph, GraphError
from .lawrence import (
    COGRAPHIC,
    GRAPHIC,
    LawrencePolytope,
    SimplexSet,
    dual_matrix,
    graphic_matrix,
    heights_for_signature_weights,
    regular_triangulation,
    triangulation_of_atlas,
    verify_triangulation,
)
from .orientations import BACKWARD, FORWARD
from .signatures import (
    CIRCUIT,
    COCIRCUIT,
    atlas_from_signature,
    is_acyclic,
    is_triangulating_signature,
    reference_signature,
    signature_from_weights,
)
from .stability import (
    Polarization,
    chamber_certificate,
    flip_path,
    is_generic,
    phi_pcan,
    vstability_from_charge,
    vstability_from_polarization,
)

__all__ = ["main"]


class FindingError(Exception):
    """A certification that theory guarantees has failed."""

    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def _load_graph(spec: str) -> Graph:
    named = {
        "kite": fixtures.kite,
        "triangle": fixtures.triangle,
        "theta": fixtures.theta,
    }
    if spec in named:
        return named[spec]()
    return Graph.parse(Path(spec).read_text())


def _fraction(text) -> Fraction:
    if isinstance(text, str):
        return Fraction(text)
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    raise GraphError(f"expected an integer or 'p/q' string, got {text!r}")


def _numbers_from_file(path: str, expected: int, what: str) -> list[Fraction]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list) or len(data) != expected:
        raise GraphError(f"{what} file must hold a JSON list of {expected} numbers")
    return [_fraction(x) for x in data]


def _weights(graph: Graph, spec: str) -> list:
    if spec.startswith("seed:"):
        return fixtures.seeded_weights(graph, int(spec[5:]))
    if spec.startswith("file:"):
        return _numbers_from_file(spec[5:], graph.n_edges, "weights")
    raise GraphError("weights must be seed:<n> or file:<path>")


def _heights(p: LawrencePolytope, spec: str) -> list:
    if spec.startswith("seed:"):
        return fixtures.seeded_heights(2 * p.n_slots, int(spec[5:]))
    if spec.startswith("file:"):
        return _numbers_from_file(spec[5:], 2 * p.n_slots, "heights")
    raise GraphError("heights must be seed:<n> or file:<path>")


def _signature(graph: Graph, args):
    if args.weights is None:
        raise GraphError("this command needs --weights seed:<n> or file:<path>")
    flavor = CIRCUIT if getattr(args, "flavor", "cocircuit") == "circuit" else COCIRCUIT
    return signature_from_weights(graph, flavor, _weights(graph, args.weights))


def _need_q(graph: Graph, args):
    if args.q is None:
        raise GraphError("this command needs --q <vertex>")
    graph.vertex_index(args.q)
    return args.q


def _polytope(graph: Graph, kind: str) -> LawrencePolytope:
    return LawrencePolytope.of_graph(graph, kind)


def _divisor_rows(divisors) -> list[list[int]]:
    return [list(d.values) for d in divisors]


# -- panels ----------------------------------------------------------------


def _panel(graph: Graph, name: str, labels: dict, tree_mask: int, arcs: dict) -> str:
    """DOT panel: bold tree edges, external arcs directed, rest dashed."""
    lines = [f"digraph {name} {{"]
    for v in graph.vertices:
        lines.append(f'  "{v}" [label="{v}:{labels[v]}"];')
    for e, (t, h) in enumerate(graph.edges):
        if tree_mask >> e & 1:
            lines.append(f'  "{t}" -> "{h}" [dir=none, penwidth=2];')
        elif e in arcs:
            a, b = (t, h) if arcs[e] == FORWARD else (h, t)
            lines.append(f'  "{a}" -> "{b}";')
        else:
            lines.append(f'  "{t}" -> "{h}" [dir=none, style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _write(outdir: Path, name: str, text: str, written: list) -> None:
    path = outdir / name
    path.write_text(text)
    written.append(str(path))


# -- subcommands -----------------------------------------------------------


def _cmd_info(args) -> int:
    g = _load_graph(args.graph)
    if args.format == "dot":
        sys.stdout.write(g.to_dot())
        return 0
    _emit(
        {
            "vertices": g.n_vertices,
            "edges": g.n_edges,
            "genus": g.genus,
            "spanning_trees": g.spanning_tree_count(),
            "vertex_order": list(g.vertices),
        }
    )
    return 0


def _cmd_trees(args) -> int:
    g = _load_graph(args.graph)
    trees = g.spanning_trees()
    _emit(
        {
            "count": len(trees),
            "trees": [sorted(t.edge_indices) for t in trees],
        }
    )
    return 0


def _cmd_breakdiv(args) -> int:
    g = _load_graph(args.graph)
    rset = all_break_divisors(g, certify=False)
    cert = certify_complete(rset)
    out = {
        "vertex_order": list(g.vertices),
        "divisors": _divisor_rows(rset.divisors),
        "count": len(rset),
        "certificate": cert.to_json_obj(),
    }
    if not cert.complete:
        raise FindingError("break divisor certification failed", out)
    _emit(out)
    return 0


def _cmd_signature(args) -> int:
    g = _load_graph(args.graph)
    sig = _signature(g, args)
    _emit(
        {
            "flavor": sig.flavor,
            "signature": sig.to_json_obj(),
            "acyclic": is_acyclic(sig),
            "triangulating": is_triangulating_signature(sig),
            "provenance": {"weights": args.weights},
        }
    )
    return 0


def _cmd_atlas(args) -> int:
    g = _load_graph(args.graph)
    sig = _signature(g, args)
    atlas = atlas_from_signature(sig)
    if args.format == "dot":
        if args.out is None:
            for i, b in enumerate(atlas.bases):
                sys.stdout.write(b.four.to_dot(name=f"base_{i}"))
            return 0
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        written: list[str] = []
        for i, b in enumerate(atlas.bases):
            _write(outdir, f"base-{i}.dot", b.four.to_dot(name=f"base_{i}"), written)
        _emit({"written": sorted(written)})
        return 0
    _emit(
        {
            "flavor": atlas.flavor,
            "bases": atlas.to_json_obj(),
            "provenance": {"weights": args.weights},
        }
    )
    return 0


def _cmd_charge(args) -> int:
    g = _load_graph(args.graph)
    q = _need_q(g, args)
    sig = _signature(g, args)
    charge = charge_from_signature(sig, q)
    _emit(
        {
            "q": str(q),
            "vertex_order": list(g.vertices),
            "charges": [
                {"tree": sorted(t.edge_indices), "charge": list(charge.charge(t).values)}
                for t in g.spanning_trees()
            ],
            "provenance": {"weights": args.weights},
        }
    )
    return 0


def _cmd_gbd(args) -> int:
    g = _load_graph(args.graph)
    q = _need_q(g, args)
    sig = _signature(g, args)
    rset = generalized_break_divisors(charge_from_signature(sig, q))
    _emit(
        {
            "q": str(q),
            "vertex_order": list(g.vertices),
            "divisors": _divisor_rows(rset.divisors),
            "count": len(rset),
            "provenance": {"weights": args.weights},
        }
    )
    return 0


def _cmd_certify(args) -> int:
    g = _load_graph(args.graph)
    q = _need_q(g, args)
    sig = _signature(g, args)
    charge = charge_from_signature(sig, q)
    rset = generalized_break_divisors(charge)
    cert = certify_complete(rset)
    out = {
        "graph": g.to_json_obj(),
        "q": str(q),
        "provenance": {"weights": args.weights},
        "signature": sig.to_json_obj(),
        "acyclic": is_acyclic(sig),
        "divisors": _divisor_rows(rset.divisors),
        "representatives": cert.to_json_obj(),
    }
    if not cert.complete:
        raise FindingError("representative-set certification failed", out)
    stab = vstability_from_charge(charge)
    cls = chamber_certificate(stab)
    out["stability"] = stab.to_json_obj()
    out["classical"] = cls.to_json_obj()
    if out["acyclic"] and not cls.is_classical:
        raise FindingError(
            "acyclic signature produced a non-classical stability condition", out
        )
    _emit(out)
    return 0


def _cmd_stability(args) -> int:
    g = _load_graph(args.graph)
    if args.action == "pcan":
        phi = phi_pcan(g)
        stab = vstability_from_polarization(phi)
        _emit(
            {
                "phi": phi.to_json_obj(),
                "degree": phi.degree,
                "generic": is_generic(phi),
                "vstability": stab.to_json_obj(),
            }
        )
        return 0
    if args.action == "from-phi":
        if args.phi is None:
            raise GraphError("stability from-phi needs --phi v1,v2,...")
        vals = [Fraction(x.strip()) for x in args.phi.split(",")]
        phi = Polarization.from_values(g, vals)
        out = {"phi": phi.to_json_obj(), "degree": phi.degree, "generic": is_generic(phi)}
        stab = vstability_from_polarization(phi)  # names a wall when non-generic
        out["vstability"] = stab.to_json_obj()
        _emit(out)
        return 0
    if args.action == "certify-classical":
        q = _need_q(g, args)
        sig = _signature(g, args)
        charge = charge_from_signature(sig, q)
        stab = vstability_from_charge(charge)
        cls = chamber_certificate(stab)
        out = {
            "q": str(q),
            "provenance": {"weights": args.weights},
            "acyclic": is_acyclic(sig),
            "vstability": stab.to_json_obj(),
            "certificate": cls.to_json_obj(),
        }
        if out["acyclic"] and not cls.is_classical:
            raise FindingError(
                "acyclic signature produced a non-classical stability condition", out
            )
        _emit(out)
        return 0
    if args.action == "flip-path":
        if args.weights is None or args.to_weights is None:
            raise GraphError("flip-path needs --weights and --to-weights")
        s1 = signature_from_weights(g, COCIRCUIT, _weights(g, args.weights))
        s2 = signature_from_weights(g, COCIRCUIT, _weights(g, args.to_weights))
        path = flip_path(s1, s2, acyclic_only=args.acyclic_only)
        _emit(
            {
                "provenance": {"weights": args.weights, "to_weights": args.to_weights},
                "acyclic_only": bool(args.acyclic_only),
                "path": None if path is None else [sorted(s) for s in path],
                "length": None if path is None else len(path),
            }
        )
        return 0
    raise GraphError(f"unknown stability action {args.action!r}")


def _cmd_lawrence(args) -> int:
    g = _load_graph(args.graph)
    if args.action == "matrix":
        mm = graphic_matrix(g)
        if args.kind == COGRAPHIC:
            mm = dual_matrix(mm)
        _emit(
            {
                "kind": mm.kind,
                "rows": [list(r) for r in mm.rows],
                "edge_order": list(mm.edge_order),
                "tree": sorted(
                    e for e in range(g.n_edges) if mm.tree_mask >> e & 1
                ),
            }
        )
        return 0
    p = _polytope(g, args.kind)
    if args.heights is not None:
        heights = _heights(p, args.heights)
        prov = {"heights": args.heights}
    elif args.weights is not None:
        heights = heights_for_signature_weights(p, _weights(g, args.weights))
        prov = {"weights": args.weights}
    else:
        raise GraphError("this command needs --heights or --weights")
    if args.action == "triangulate":
        sset = regular_triangulation(p, heights)
        _emit(
            {
                "kind": p.kind,
                "count": len(sset),
                "volume": sset.total_volume(),
                "simplices": sset.to_json_obj(),
                "provenance": prov,
            }
        )
        return 0
    if args.action == "verify":
        if args.simplices is not None:
            data = json.loads(Path(args.simplices).read_text())
            sset = SimplexSet(p, tuple(frozenset(s) for s in data))
            from_heights = False
        else:
            sset = regular_triangulation(p, heights)
            from_heights = True
        res = verify_triangulation(sset, budget_edges=args.budget_edges)
        out = {"kind": p.kind, "result": res.to_json_obj(), "provenance": prov}
        if from_heights and res.verdict != "triangulation":
            raise FindingError("regular triangulation failed verification", out)
        _emit(out)
        return 0
    raise GraphError(f"unknown lawrence action {args.action!r}")


def _cmd_reproduce(args) -> int:
    g = fixtures.kite()
    q = "b"
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[str] = []
    _write(outdir, "kite.dot", g.to_dot(name="kite"), written)

    # break divisor panels, one per distinct divisor, lex-first witness
    witnesses = {}
    for tree in g.spanning_trees():
        for ext in external_orientations(tree):
            d = break_divisor(tree, ext)
            key = d.values
            cand = (tree.mask, ext.encoding)
            if key not in witnesses or cand < witnesses[key][:2]:
                witnesses[key] = (tree.mask, ext.encoding, tree, ext, d)
    for k, key in enumerate(sorted(witnesses)):
        _, _, tree, ext, d = witnesses[key]
        labels = {v: d.at(v) for v in g.vertices}
        arcs = {e: ext.state(e) for e in tree.external_indices}
        _write(outdir, f"break-{k}.dot", _panel(g, f"break_{k}", labels, tree.mask, arcs), written)

    # internal atlas panels: reference signature flipped at the bond around t
    ref = reference_signature(g, q)
    top_bond = frozenset(g.incident_edges(g.vertex_index("t")))
    sig = ref.flip(top_bond)
    atlas = atlas_from_signature(sig)
    for i, b in enumerate(atlas.bases):
        _write(outdir, f"base-{i}.dot", b.four.to_dot(name=f"base_{i}"), written)

    # charge and shifted-divisor panels
    charge = charge_from_signature(sig, q)
    for i, tree in enumerate(g.spanning_trees()):
        c = charge.charge(tree)
        labels = {v: c.at(v) for v in g.vertices}
        _write(outdir, f"charge-{i}.dot", _panel(g, f"charge_{i}", labels, tree.mask, {}), written)
    rset = generalized_break_divisors(charge)
    for k, d in enumerate(rset.divisors):
        labels = {v: d.at(v) for v in g.vertices}
        _write(outdir, f"gbd-{k}.dot", _panel(g, f"gbd_{k}", labels, 0, {}), written)

    summary = {
        "q": q,
        "vertex_order": list(g.vertices),
        "break_divisors": sorted(list(key) for key in witnesses),
        "atlas": atlas.to_json_obj(),
        "charges": [
            {"tree": sorted(t.edge_indices), "charge": list(charge.charge(t).values)}
            for t in g.spanning_trees()
        ],
        "generalized_break_divisors": _divisor_rows(rset.divisors),
    }
    _write(
        outdir,
        "summary.json",
        json.dumps(summary, sort_keys=True, indent=2) + "\n",
        written,
    )
    _emit({"written": sorted(written)})
    return 0


# -- parser ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 through the normal error path, not 2
        raise GraphError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbdiv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def flags(p):
        p.add_argument("--q", default=None, help="base vertex")
        p.add_argument("--weights", default=None, help="seed:<n> or file:<path>")
        p.add_argument("--heights", default=None, help="seed:<n> or file:<path>")
        p.add_argument("--budget-edges", type=int, default=6, dest="budget_edges")
        p.add_argument("--format", choices=["json", "dot"], default="json")
        p.add_argument("--out", default=None, help="output directory for files")

    def add(name, func, help_text, action_choices=None):
        p = sub.add_parser(name, help=help_text)
        if action_choices:
            p.add_argument("action", choices=action_choices)
        p.add_argument("graph", help="graph file (JSON or edge list) or kite/triangle/theta")
        flags(p)
        p.set_defaults(func=func)
        return p

    add("info", _cmd_info, "graph summary")
    add("trees", _cmd_trees, "list spanning trees")
    add("breakdiv", _cmd_breakdiv, "all break divisors, certified")
    psig = add("signature", _cmd_signature, "signature induced by generic weights")
    psig.add_argument("--flavor", choices=["circuit", "cocircuit"], default="cocircuit")
    patl = add("atlas", _cmd_atlas, "atlas of the weight signature")
    patl.add_argument("--flavor", choices=["circuit", "cocircuit"], default="cocircuit")
    add("charge", _cmd_charge, "tree charge of the weight signature")
    add("gbd", _cmd_gbd, "generalized break divisors of the weight signature")
    add("certify", _cmd_certify, "end-to-end certificates for the weight signature")

    pst = add(
        "stability",
        _cmd_stability,
        "stability condition operations",
        action_choices=["pcan", "from-phi", "certify-classical", "flip-path"],
    )
    pst.add_argument("--phi", default=None, help="comma-separated rational values")
    pst.add_argument("--to-weights", default=None, dest="to_weights")
    pst.add_argument("--acyclic-only", action="store_true", dest="acyclic_only")

    plaw = add(
        "lawrence",
        _cmd_lawrence,
        "Lawrence polytope operations",
        action_choices=["matrix", "triangulate", "verify"],
    )
    plaw.add_argument("--kind", choices=[GRAPHIC, COGRAPHIC], default=COGRAPHIC)
    plaw.add_argument("--simplices", default=None, help="JSON file with point index lists")

    prep = sub.add_parser("reproduce-figures", help="emit DOT panels for the bundled kite")
    prep.add_argument("--out", default="figures")
    prep.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except FindingError as exc:
        _emit(exc.payload)
        print(f"FINDING: {exc}", file=sys.stderr)
        return 2
    except (GraphError, LpError, ValueError, OSError) as exc:
        _emit({"error": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
