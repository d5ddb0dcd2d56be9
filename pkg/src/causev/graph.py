"""Directed causal network assembly, cycle detection, and export."""

from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePair


@dataclass(frozen=True)
class CausalEdge:
    source: str
    target: str
    score: float
    lower: float
    upper: float

    def __post_init__(self):
        if not 0.5 < self.score <= 1.0:
            raise ValueError("edge score must lie in (0.5, 1]")


@dataclass(frozen=True)
class CausalNetwork:
    nodes: tuple
    edges: tuple


def assemble(nodes, pair_results):
    """Build the network of significant causal links.

    `pair_results` maps each analyzed unordered pair to a record with
    keys station_a, station_b, score (for a -> b), lower, upper,
    significant.  Only significant pairs yield an edge, pointing from
    the cause to the effect.
    """
    seen = set()
    edges = []
    for rec in pair_results:
        a, b = rec["station_a"], rec["station_b"]
        key = frozenset((a, b))
        if key in seen:
            raise DuplicatePair(f"pair {a}/{b} appears twice")
        seen.add(key)
        if not rec["significant"]:
            continue
        score = rec["score"]
        if score > 0.5:
            edges.append(CausalEdge(a, b, score, rec["lower"], rec["upper"]))
        else:
            edges.append(CausalEdge(b, a, 1.0 - score,
                                    1.0 - rec["upper"], 1.0 - rec["lower"]))
    return CausalNetwork(tuple(nodes), tuple(edges))


def detect_cycles(net):
    """Enumerate directed cycles by depth-first search; empty iff a DAG.

    Returns each elementary cycle once, as a list of nodes in order.
    """
    succ = {n: [] for n in net.nodes}
    for e in net.edges:
        succ.setdefault(e.source, []).append(e.target)
        succ.setdefault(e.target, [])
    cycles = []
    seen_cycles = set()
    state = {n: 0 for n in succ}  # 0 unvisited, 1 on stack, 2 done
    stack = []

    def visit(node):
        state[node] = 1
        stack.append(node)
        for nxt in succ[node]:
            if state[nxt] == 1:
                cyc = stack[stack.index(nxt):]
                key = frozenset(cyc)
                if key not in seen_cycles:
                    seen_cycles.add(key)
                    cycles.append(list(cyc))
            elif state[nxt] == 0:
                visit(nxt)
        stack.pop()
        state[node] = 2

    for node in sorted(succ):
        if state[node] == 0:
            visit(node)
    return cycles


def _dot_id(name):
    """Quote a node name unless it is already a bare DOT identifier."""
    name = str(name)
    if name and all(ch.isalnum() or ch == "_" for ch in name) \
            and not name[0].isdigit():
        return name
    return '"' + name.replace('"', '\\"') + '"'


def export_dot(net):
    """Standard DOT text; edge labels carry the score to three decimals."""
    lines = ["digraph causev {"]
    edge_nodes = {e.source for e in net.edges} | {e.target for e in net.edges}
    for node in net.nodes:
        if node not in edge_nodes:
            lines.append(f"    {_dot_id(node)};")
    for e in net.edges:
        lines.append(f'    {_dot_id(e.source)} -> {_dot_id(e.target)} '
                     f'[label="{e.score:.3f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def edges_json(net):
    """JSON-ready edge list."""
    return [{"from": e.source, "to": e.target, "score": e.score,
             "lower": e.lower, "upper": e.upper} for e in net.edges]
