"""Tree export to DOT and JSON."""

import enum
from pathlib import Path
from typing import Optional, Union

import pydot

from models.reports import TreeExport, VertexExport
from models.state import InitialMemory, render_memory, render_stack
from models.symbolic import render
from core.executor.tree import SymExecTree, Vertex
from core.solver.base import Verdict
from utils.logging import LogEvent, LogRecord, info

SUMMARY_WIDTH = 48


class ExportFormat(str, enum.Enum):
    DOT = "dot"
    JSON = "json"

    @classmethod
    def from_path(cls, path: Union[str, Path]) -> "ExportFormat":
        suffix = Path(path).suffix.lstrip(".").lower()
        try:
            return cls(suffix)
        except ValueError:
            raise ValueError(f"Cannot export a tree as .{suffix}; use .dot or .json") from None


def _summary(text: str) -> str:
    return text if len(text) <= SUMMARY_WIDTH else text[: SUMMARY_WIDTH - 1] + "…"


def _quoted(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _vertex_export(vertex: Vertex, theta0: Optional[InitialMemory]) -> VertexExport:
    return VertexExport(
        id=vertex.id,
        parent=vertex.parent,
        location=vertex.state.location,
        memory=render_memory(vertex.state.memory, theta0),
        condition=render(vertex.state.condition),
        stack=render_stack(vertex.state.stack, theta0),
        edge_label=render(vertex.label) if vertex.label is not None else None,
        verdict=vertex.verdict.value if vertex.verdict is not None else None,
        depth=vertex.depth,
        classic_depth=str(vertex.classic_depth),
    )


def tree_to_model(tree: SymExecTree, theta0: Optional[InitialMemory] = None) -> TreeExport:
    return TreeExport(mode=tree.mode, vertices=[_vertex_export(v, theta0) for v in tree])


def _to_dot(tree: SymExecTree) -> str:
    graph = pydot.Dot("tree", graph_type="digraph", rankdir="TB")
    graph.set_node_defaults(shape="box", fontname="monospace")
    for vertex in tree:
        node = pydot.Node(f"v{vertex.id}")
        node.set_label(_quoted(f"{vertex.state.location} | {_summary(render(vertex.state.condition))}"))
        if vertex.verdict is Verdict.UNKNOWN:
            node.set_color("orange")
        graph.add_node(node)
    for vertex in tree:
        if vertex.parent is None:
            continue
        edge = pydot.Edge(f"v{vertex.parent}", f"v{vertex.id}")
        if vertex.label is not None:
            edge.set_label(_quoted(_summary(render(vertex.label))))
        graph.add_edge(edge)
    return graph.to_string()


def export_tree(
    tree: SymExecTree,
    fmt: ExportFormat = ExportFormat.DOT,
    theta0: Optional[InitialMemory] = None,
) -> str:
    """Text of ``tree`` in ``fmt``; the same tree always yields the same bytes.

    With ``theta0`` given, memory renderings leave out variables still holding
    their initial symbol.
    """
    if fmt is ExportFormat.DOT:
        return _to_dot(tree)
    return tree_to_model(tree, theta0).model_dump_json(indent=2) + "\n"


def write_tree(tree: SymExecTree, path: Union[str, Path], theta0: Optional[InitialMemory] = None) -> Path:
    target = Path(path)
    fmt = ExportFormat.from_path(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(export_tree(tree, fmt, theta0), encoding="utf-8")
    info(LogRecord(
        event=LogEvent.EXPORT_WRITTEN.value,
        message=f"Wrote {len(tree)} vertices to {target}",
        data={"path": str(target), "format": fmt.value},
    ))
    return target


def load_tree_json(text: str) -> TreeExport:
    """Parse a JSON export back; pydantic rejects other schema versions."""
    return TreeExport.model_validate_json(text)
