"""Crystal graphs and their DOT rendering."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from qcompletion.algebra.actions import Kashiwara
from qcompletion.crystal.basis import CrystalBasis, apply_kashiwara, residue_slot

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class CrystalNode:
    index: int
    component: Optional[int]
    tag: Optional[str]
    k: Optional[int]
    weight: int

    @property
    def label(self) -> str:
        if self.component is None:
            return f"(b{self.index}, {self.weight})"
        return f"({self.component}, {self.tag}, {self.k}, {self.weight})"


@dataclass(frozen=True)
class CrystalGraph:
    """Basis classes and the f~-edges between them.

    Attributes:
        nodes: One node per basis class within the window.
        edges: (source index, target index) for f~ b_source = b_target mod qL.
    """

    nodes: Tuple[CrystalNode, ...]
    edges: Tuple[Tuple[int, int], ...]


def _node_order(node: CrystalNode) -> Tuple[int, str, int, int]:
    if node.component is None:
        return (-1, "", 0, node.index)
    return (node.component, node.tag or "", node.k or 0, node.index)


def crystal_graph(basis: CrystalBasis) -> CrystalGraph:
    """The f~-graph of a crystal basis; node order follows slot order."""
    lattice = basis.lattice
    shape = lattice.shape
    nodes = []
    for i, rep in enumerate(basis.basis_reps):
        slot = residue_slot(basis, i)
        w = rep.weight(shape)
        if slot is None:
            nodes.append(CrystalNode(i, None, None, None, w))
        else:
            nodes.append(CrystalNode(i, slot.component, slot.tag, slot.k, w))
    nodes.sort(key=_node_order)

    edges = []
    for node in nodes:
        target_weight = node.weight - 2
        if not lattice.covers(target_weight):
            continue
        image = apply_kashiwara(Kashiwara.F_TILDE, basis.basis_reps[node.index], lattice)
        if not image:
            continue
        residue = lattice.residue(image, target_weight)
        if residue is None or not any(residue):
            continue
        for j, other in basis.reps_at(target_weight):
            if lattice.residue(other, target_weight) == residue:
                edges.append((node.index, j))
                break
    log.debug(f"Crystal graph of {shape}: {len(nodes)} nodes, {len(edges)} edges")
    return CrystalGraph(tuple(nodes), tuple(edges))


def to_dot(graph: CrystalGraph, name: str = "G") -> str:
    """Render the graph as a DOT digraph with edges labelled f~."""
    lines: List[str] = [f"digraph {name} {{"]
    for node in graph.nodes:
        lines.append(f'   b{node.index} [label="{node.label}"];')
    for a, b in graph.edges:
        lines.append(f'   b{a} -> b{b} [label = "f̃"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
