"""JSON schemas for every artifact type, plus the DOT exporter.

Rationals cross interfaces as "p/q" strings; half-edges as "e+" / "e-";
signed path steps as "e" (forward) / "-e" (backward).  Loaders accept
either inline objects or file paths (resolved relative to the referring
file).  All schemas are documented in docs/formats.md.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .branched_graph import BranchedGraph, CellularMap
from .coverings import CoveringTower, Graph, GraphCovering, GraphMap, cyclic_tower
from .inverse_system import InverseSystem
from .local_model import BranchTree, HalfSpace, Sector
from .subshift import LanguageOracle, Substitution
from .transversal import ClopenSet, Cylinder


# -- rationals -------------------------------------------------------------

def parse_fraction(text: str) -> Fraction:
    return Fraction(str(text))


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def parse_point(text: str) -> tuple[Fraction, ...]:
    """Comma-separated rationals: "1/2,-1/2"."""
    return tuple(parse_fraction(part.strip()) for part in text.split(","))


# -- half-edges and path steps ----------------------------------------------

def parse_half_edge(text: str) -> tuple:
    if len(text) < 2 or text[-1] not in "+-":
        raise ValueError(f"half-edge must look like 'e+' or 'e-': {text!r}")
    return (text[:-1], text[-1])


def format_half_edge(h: tuple) -> str:
    return f"{h[0]}{h[1]}"


def parse_step(text: str) -> tuple:
    if text.startswith("-"):
        return (text[1:], -1)
    return (text, 1)


def format_step(step: tuple) -> str:
    e, s = step
    return str(e) if s == 1 else f"-{e}"


# -- branch trees ------------------------------------------------------------

def branch_tree_from_json(data: dict) -> BranchTree:
    n = int(data["dimension"])
    sectors = {}
    for v in data["vertices"]:
        normals = data.get("sectors", {}).get(v, [])
        sectors[v] = Sector(
            n, tuple(HalfSpace(tuple(parse_fraction(c) for c in normal))
                     for normal in normals)
        )
    return BranchTree(
        n, tuple(data["vertices"]),
        tuple((s, t) for s, t in data["edges"]),
        sectors,
    )


def branch_tree_to_json(tree: BranchTree) -> dict:
    return {
        "dimension": tree.dimension,
        "vertices": list(tree.vertices),
        "edges": [list(e) for e in tree.edges],
        "sectors": {
            v: [[format_fraction(c) for c in h.normal] for h in sec.halfspaces]
            for v, sec in tree.sector_of.items()
        },
    }


# -- branched graphs and cellular maps ---------------------------------------

def branched_graph_from_json(data: dict) -> BranchedGraph:
    edges = {e["id"]: (e["src"], e["dst"]) for e in data["edges"]}
    sides = {
        v: (
            {parse_half_edge(h) for h in ab.get("A", [])},
            {parse_half_edge(h) for h in ab.get("B", [])},
        )
        for v, ab in data["sides"].items()
    }
    return BranchedGraph(set(data["vertices"]), edges, sides)


def branched_graph_to_json(g: BranchedGraph) -> dict:
    return {
        "vertices": sorted(g.vertices, key=repr),
        "edges": [
            {"id": e, "src": s, "dst": t}
            for e, (s, t) in sorted(g.edges.items(), key=lambda kv: repr(kv[0]))
        ],
        "sides": {
            v: {
                "A": sorted(format_half_edge(h) for h in a),
                "B": sorted(format_half_edge(h) for h in b),
            }
            for v, (a, b) in sorted(g.sides.items(), key=lambda kv: repr(kv[0]))
        },
    }


def cellular_map_from_json(data: dict, domain: BranchedGraph,
                           codomain: BranchedGraph) -> CellularMap:
    return CellularMap(
        domain,
        codomain,
        dict(data["vertex_map"]),
        {e: tuple(parse_step(s) for s in path)
         for e, path in data["edge_map"].items()},
    )


def cellular_map_to_json(f: CellularMap) -> dict:
    return {
        "vertex_map": {v: w for v, w in sorted(f.vertex_map.items(), key=lambda kv: repr(kv[0]))},
        "edge_map": {
            e: [format_step(s) for s in path]
            for e, path in sorted(f.edge_map.items(), key=lambda kv: repr(kv[0]))
        },
    }


# -- inverse systems ----------------------------------------------------------

def _resolve(node: Union[str, dict], base_dir: Optional[Path]) -> dict:
    if isinstance(node, str):
        path = Path(node)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        return json.loads(path.read_text())
    return node


def system_from_json(data: dict, base_dir: Optional[Path] = None) -> InverseSystem:
    if "stationary" in data:
        graph = branched_graph_from_json(_resolve(data["stationary"]["graph"], base_dir))
        bond = cellular_map_from_json(
            _resolve(data["stationary"]["map"], base_dir), graph, graph
        )
        return InverseSystem.stationary(bond)
    levels = [branched_graph_from_json(_resolve(node, base_dir))
              for node in data["levels"]]
    bonds = [
        cellular_map_from_json(_resolve(node, base_dir), levels[i + 1], levels[i])
        for i, node in enumerate(data["bonds"])
    ]
    return InverseSystem.from_lists(levels, bonds)


def load_system(path: Union[str, Path]) -> InverseSystem:
    path = Path(path)
    return system_from_json(json.loads(path.read_text()), path.parent)


# -- subshift inputs -----------------------------------------------------------

def oracle_from_json(data: dict) -> LanguageOracle:
    alphabet = data["alphabet"]
    if "rules" in data:
        return LanguageOracle.from_substitution(Substitution(alphabet, data["rules"]))
    if "forbidden" in data:
        return LanguageOracle.from_forbidden(alphabet, data["forbidden"])
    return LanguageOracle.full_shift(alphabet)


def load_oracle(path: Union[str, Path]) -> LanguageOracle:
    return oracle_from_json(json.loads(Path(path).read_text()))


# -- clopen sets ----------------------------------------------------------------

def clopen_from_json(data: dict, oracle: LanguageOracle) -> ClopenSet:
    cylinders = [Cylinder.parse(text) for text in data["cylinders"]]
    out = ClopenSet.from_cylinders(oracle, cylinders)
    from .transversal import canonicalize

    radius = int(data.get("radius", out.radius))
    return canonicalize(out, max(radius, out.radius))


def clopen_to_json(s: ClopenSet) -> dict:
    return {"radius": s.radius, "cylinders": [str(c) for c in s.cylinders()]}


# -- plain graphs, coverings, towers ----------------------------------------------

def plain_graph_from_json(data: dict) -> Graph:
    edges = {e["id"]: (e["src"], e["dst"]) for e in data["edges"]}
    return Graph.from_edges(data["vertices"], edges)


def plain_graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertex_ids),
        "edges": [
            {"id": g.edge_ids[i], "src": g.vertex_ids[int(g.esrc[i])],
             "dst": g.vertex_ids[int(g.edst[i])]}
            for i in range(g.ne)
        ],
    }


def _keyed(mapping: dict, key):
    """JSON object keys are strings; tolerate integer cell ids."""
    if key in mapping:
        return mapping[key]
    return mapping[str(key)]


def covering_from_json(data: dict, base: Graph,
                       base_dir: Optional[Path] = None) -> GraphCovering:
    total = plain_graph_from_json(_resolve(data["total"], base_dir))
    vertex_map = {v: _keyed(data["vertex_map"], v) for v in total.vertex_ids}
    edge_map = {e: _keyed(data["edge_map"], e) for e in total.edge_ids}
    gmap = GraphMap.from_dicts(total, base, vertex_map, edge_map)
    return GraphCovering(gmap)


def covering_to_json(c: GraphCovering) -> dict:
    total, base, m = c.total, c.base, c.map
    return {
        "total": plain_graph_to_json(total),
        "vertex_map": {
            str(total.vertex_ids[i]): base.vertex_ids[int(m.vmap[i])]
            for i in range(total.nv)
        },
        "edge_map": {
            str(total.edge_ids[i]): base.edge_ids[int(m.emap[i])]
            for i in range(total.ne)
        },
    }


def tower_from_json(data: dict, base_dir: Optional[Path] = None) -> CoveringTower:
    if "circle_degrees" in data:
        return cyclic_tower(list(data["circle_degrees"]))
    base = plain_graph_from_json(_resolve(data["base"], base_dir))
    coverings = []
    current = base
    for node in data["levels"]:
        cov = covering_from_json(_resolve(node, base_dir), current, base_dir)
        coverings.append(cov)
        current = cov.total
    kwargs = {}
    if "base_vertex" in data:
        kwargs["base_vertex"] = data["base_vertex"]
    return CoveringTower(coverings, **kwargs)


def load_tower(path: Union[str, Path]) -> CoveringTower:
    path = Path(path)
    return tower_from_json(json.loads(path.read_text()), path.parent)


def parse_loop(text: str, base: Graph) -> tuple:
    """Space-separated signed edge tokens, resolved against the base graph."""
    steps = []
    known = set(map(repr, base.edge_ids))
    for token in text.split():
        edge, sign = (token[1:], -1) if token.startswith("-") else (token, 1)
        resolved = edge
        if repr(edge) not in known:
            try:
                as_int = int(edge)
            except ValueError:
                as_int = None
            if as_int is not None and repr(as_int) in known:
                resolved = as_int
            else:
                raise ValueError(f"unknown base edge {edge!r}")
        steps.append((resolved, sign))
    return tuple(steps)


# -- DOT export --------------------------------------------------------------------

def export_dot(g: BranchedGraph, name: str = "laminate") -> str:
    """Graphviz digraph; branch points render double-circled."""
    lines = [f"digraph {json.dumps(name)} {{"]
    lines.append("  node [shape=circle];")
    for v in sorted(g.vertices, key=repr):
        shape = " [shape=doublecircle]" if g.is_branch_point(v) else ""
        lines.append(f"  {json.dumps(str(v))}{shape};")
    for e, (s, t) in sorted(g.edges.items(), key=lambda kv: repr(kv[0])):
        lines.append(
            f"  {json.dumps(str(s))} -> {json.dumps(str(t))} [label={json.dumps(str(e))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
