"""Labeled directed multigraphs with DOT and JSON export."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable


@dataclass(frozen=True)
class LabeledGraph:
    """Ordered vertices and labeled directed edges; loops and parallel edges allowed."""

    vertices: tuple
    edges: tuple  # of (source, target, label)

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex keys")
        for s, t, _ in self.edges:
            if s not in known or t not in known:
                raise ValueError(f"edge ({s!r}, {t!r}) has an endpoint outside the vertex list")

    @classmethod
    def build(cls, vertices: Iterable[Hashable], edges: Iterable[tuple]) -> "LabeledGraph":
        return cls(tuple(vertices), tuple((s, t, str(lab)) for s, t, lab in edges))

    def edge_multiset(self) -> Counter:
        return Counter(self.edges)

    def out_edges(self, vertex) -> list[tuple]:
        return [e for e in self.edges if e[0] == vertex]

    def components(self) -> list[list]:
        """Weakly connected components, each in vertex order; ordered by first vertex."""
        from .kernels import components

        index = {v: i for i, v in enumerate(self.vertices)}
        labels = components(
            len(self.vertices),
            [index[s] for s, _, _ in self.edges],
            [index[t] for _, t, _ in self.edges],
        )
        groups: dict[int, list] = {}
        for v, lab in zip(self.vertices, labels):
            groups.setdefault(int(lab), []).append(v)
        return [groups[k] for k in sorted(groups)]

    def to_dot(self, name: str = "G", clusters: dict | None = None) -> str:
        lines = [f"digraph {_dot_id(name)} {{"]
        clustered = set()
        if clusters:
            for i, (cname, members) in enumerate(clusters.items()):
                lines.append(f"  subgraph cluster_{i} {{")
                lines.append(f"    label={_dot_id(str(cname))};")
                for v in members:
                    lines.append(f"    {_dot_id(str(v))};")
                    clustered.add(v)
                lines.append("  }")
        for v in self.vertices:
            if v not in clustered:
                lines.append(f"  {_dot_id(str(v))};")
        for s, t, lab in self.edges:
            lines.append(f"  {_dot_id(str(s))} -> {_dot_id(str(t))} [label={_dot_id(lab)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [str(v) for v in self.vertices],
            "edges": [{"source": str(s), "target": str(t), "label": lab} for s, t, lab in self.edges],
        }


def _dot_id(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'
