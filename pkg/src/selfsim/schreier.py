"""Schreier graphs on the levels of the tree, the maps between consecutive
levels, and the tile partitions cut out by critical edges.

Vertices are words ``a1...an`` written as strings (letters joined without a
separator when the alphabet has at most ten letters, with commas otherwise)
and ordered lexicographically. A tile of level ``n`` inside level ``m`` is
the set of words sharing a suffix of length ``n``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from collections import Counter

import numpy as np

from .automaton import Automaton, AutomatonError, dual, graph_of, is_invertible, power
from .graph import LabeledGraph
from .kernels import components
from .permgroup import LEVEL_CAP, check_level, index_word, level_action, word_index


class ProjectionError(AutomatonError):
    code = "projection-label"


def vertex_key(word, k: int) -> str:
    return ("" if k <= 10 else ",").join(str(a) for a in word)


def parse_vertex(text: str, k: int) -> tuple:
    text = text.strip()
    if k > 10 or "," in text:
        return tuple(int(t) for t in text.split(",") if t)
    return tuple(int(ch) for ch in text)


def _keys(k: int, n: int) -> list[str]:
    return [vertex_key(index_word(x, k, n), k) for x in range(k ** n)]


def _generators(automaton: Automaton, include_identity: bool, generators=None) -> list[int]:
    if generators is not None:
        return [automaton.index(q) for q in generators]
    trivial = automaton.trivial_states
    return [q for q in range(automaton.num_states) if include_identity or q not in trivial]


@dataclass(frozen=True)
class SchreierLevel:
    level: int
    graph: LabeledGraph
    generator_set: tuple


def schreier_graph(automaton: Automaton, n: int, include_identity: bool = False,
                   generators=None, cap: int = LEVEL_CAP) -> SchreierLevel:
    """Edges ``w -> q(w)`` labeled ``q``; identity states are left out unless asked for."""
    if not is_invertible(automaton):
        raise AutomatonError("Schreier graphs need an invertible automaton")
    k = automaton.alphabet_size
    perm, _ = level_action(automaton, n, cap)
    gens = _generators(automaton, include_identity, generators)
    keys = _keys(k, n)
    names = automaton.states
    edges = [(keys[x], keys[perm[q, x]], names[q]) for x in range(len(keys)) for q in gens]
    return SchreierLevel(n, LabeledGraph(tuple(keys), tuple(edges)), tuple(names[q] for q in gens))


def dual_power_graph(automaton: Automaton, n: int, include_identity: bool = True,
                     cap: int = LEVEL_CAP) -> LabeledGraph:
    """The graph of the ``n``-th power of the dual, with its states read as words.

    Edge labels keep only the input part, so the result is comparable
    edge-for-edge with :func:`schreier_graph`.
    """
    if n < 1:
        raise AutomatonError("dual power needs n >= 1")
    check_level(automaton, n, cap)
    k = automaton.alphabet_size
    big = graph_of(power(dual(automaton), n))
    # power states are ordered with the first factor most significant
    rename = {name: key for name, key in zip(big.vertices, _keys(k, n))}
    keep = set(_generators(automaton, include_identity))
    edges = []
    for s, t, label in big.edges:
        q = int(label.split("/")[0])
        if q in keep:
            edges.append((rename[s], rename[t], automaton.states[q]))
    return LabeledGraph(tuple(rename[v] for v in big.vertices), tuple(edges))


@dataclass(frozen=True)
class GraphMap:
    source: LabeledGraph
    target: LabeledGraph
    vertex_map: dict
    edge_map: tuple  # target edge index for each source edge

    def is_morphism(self) -> bool:
        for (s, t, _), j in zip(self.source.edges, self.edge_map):
            ts, tt, _ = self.target.edges[j]
            if self.vertex_map[s] != ts or self.vertex_map[t] != tt:
                return False
        return set(self.vertex_map.values()) <= set(self.target.vertices)

    def fiber_sizes(self) -> Counter:
        return Counter(self.vertex_map[v] for v in self.source.vertices)

    def unique_lifts(self) -> bool:
        """Each target edge has exactly one lift at each preimage of its source."""
        lifts = Counter((s, j) for (s, _, _), j in zip(self.source.edges, self.edge_map))
        fibers: dict = {}
        for v in self.source.vertices:
            fibers.setdefault(self.vertex_map[v], []).append(v)
        for j, (ts, _, _) in enumerate(self.target.edges):
            if any(lifts[(v, j)] != 1 for v in fibers.get(ts, ())):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "vertex_map": {str(k): str(v) for k, v in self.vertex_map.items()},
            "edge_map": [
                {"source_edge": list(map(str, e)), "target_edge": list(map(str, self.target.edges[j]))}
                for e, j in zip(self.source.edges, self.edge_map)
            ],
        }


def _edge_lookup(graph: LabeledGraph) -> dict:
    return {(s, lab): i for i, (s, _, lab) in enumerate(graph.edges)}


def covering_map(automaton: Automaton, n: int, include_identity: bool = False,
                 cap: int = LEVEL_CAP) -> GraphMap:
    """Level ``n+1`` onto level ``n`` by dropping the last letter; labels are kept."""
    upper = schreier_graph(automaton, n + 1, include_identity, cap=cap).graph
    lower = schreier_graph(automaton, n, include_identity, cap=cap).graph
    k = automaton.alphabet_size
    vmap = {v: vertex_key(parse_vertex(v, k)[:-1], k) for v in upper.vertices}
    lookup = _edge_lookup(lower)
    emap = tuple(lookup[vmap[s], lab] for s, _, lab in upper.edges)
    return GraphMap(upper, lower, vmap, emap)


def projection_map(automaton: Automaton, n: int, labels=None, include_identity: bool = True,
                   cap: int = LEVEL_CAP) -> GraphMap:
    """Level ``n+1`` to level ``n`` by dropping the first letter.

    The edge labeled ``q`` at ``a1...`` goes to the edge labeled by the
    restriction of ``q`` at ``a1``. The lower graph carries ``labels``
    (default: every state, identity included); a restriction outside that
    set raises :class:`ProjectionError`.
    """
    k = automaton.alphabet_size
    upper = schreier_graph(automaton, n + 1, include_identity, cap=cap).graph
    label_set = tuple(automaton.states) if labels is None else tuple(labels)
    lower = schreier_graph(automaton, n, generators=label_set, cap=cap).graph
    vmap = {}
    lookup = _edge_lookup(lower)
    emap = []
    for s, _, lab in upper.edges:
        word = parse_vertex(s, k)
        rest = automaton.states[automaton.tau[word[0]][automaton.index(lab)]]
        image = vertex_key(word[1:], k)
        vmap[s] = image
        if (image, rest) not in lookup:
            raise ProjectionError(
                f"restriction {rest!r} of {lab!r} at {word[0]} is not among the labels {list(label_set)}"
            )
        emap.append(lookup[image, rest])
    for v in upper.vertices:
        vmap.setdefault(v, vertex_key(parse_vertex(v, k)[1:], k))
    return GraphMap(upper, lower, vmap, tuple(emap))


@dataclass(frozen=True)
class TilePartition:
    ambient_level: int
    tile_level: int
    graph: LabeledGraph
    classes: dict  # suffix -> vertex keys
    critical_edges: tuple
    components: dict  # suffix -> list of vertex-key lists

    def connected(self) -> dict:
        return {w: len(parts) == 1 for w, parts in self.components.items()}

    def suffix_of(self, vertex: str) -> str:
        for w, members in self.classes.items():
            if vertex in members:
                return w
        raise KeyError(vertex)

    def to_json(self) -> dict:
        return {
            "ambient_level": self.ambient_level,
            "tile_level": self.tile_level,
            "classes": self.classes,
            "critical_edges": [list(e) for e in self.critical_edges],
            "components": self.components,
        }

    def to_dot(self) -> str:
        return self.graph.to_dot(f"tiles_{self.ambient_level}_{self.tile_level}", clusters=self.classes)


def _tile_data(automaton: Automaton, m: int, n: int, cap: int):
    if not 0 <= n <= m:
        raise AutomatonError("tile level must lie between 0 and the ambient level")
    if not is_invertible(automaton):
        raise AutomatonError("tiles need an invertible automaton")
    k = automaton.alphabet_size
    perm, _ = level_action(automaton, m, cap)
    _, prefix_restr = level_action(automaton, m - n, cap)
    gens = _generators(automaton, include_identity=False)
    size, block = k ** m, k ** n
    x = np.arange(size)
    trivial = np.zeros(automaton.num_states, dtype=bool)
    trivial[list(automaton.trivial_states)] = True
    rows = []
    for q in gens:
        restricted = prefix_restr[q, x // block]
        rows.append((q, perm[q], restricted, ~trivial[restricted]))
    return k, size, block, rows


def tile_partition(automaton: Automaton, m: int, n: int, cap: int = LEVEL_CAP) -> TilePartition:
    """Classes by suffix of length ``n``; an edge is critical when the restriction
    of its label along the first ``m-n`` letters is not the identity."""
    from .nucleus import is_nuclear

    if not is_nuclear(automaton):
        warnings.warn("tile partitions are meant for nuclear automata", stacklevel=2)
    k, size, block, rows = _tile_data(automaton, m, n, cap)
    keys = _keys(k, m)
    suffix_keys = _keys(k, n)
    names = automaton.states
    classes = {w: [] for w in suffix_keys}
    for xi in range(size):
        classes[suffix_keys[xi % block]].append(keys[xi])
    edges, critical = [], []
    src, dst = [], []
    for xi in range(size):
        for q, p, _, crit in rows:
            e = (keys[xi], keys[p[xi]], names[q])
            edges.append(e)
            if crit[xi]:
                critical.append(e)
            else:
                src.append(xi)
                dst.append(int(p[xi]))
    labels = components(size, src, dst)
    comps: dict = {w: {} for w in suffix_keys}
    for xi in range(size):
        comps[suffix_keys[xi % block]].setdefault(int(labels[xi]), []).append(keys[xi])
    parts = {w: [c[i] for i in sorted(c)] for w, c in comps.items()}
    graph = LabeledGraph(tuple(keys), tuple(edges))
    return TilePartition(m, n, graph, classes, tuple(critical), parts)


def tile_adjacency(automaton: Automaton, m: int, n: int, cap: int = LEVEL_CAP) -> LabeledGraph:
    """Which level-``n`` tiles meet inside level ``m``, labeled by the restricted generator."""
    if m <= n:
        raise AutomatonError("tile adjacency needs an ambient level above the tile level")
    k, size, block, rows = _tile_data(automaton, m, n, cap)
    suffix_keys = _keys(k, n)
    names = automaton.states
    seen = set()
    edges = []
    for xi in range(size):
        for q, p, restricted, crit in rows:
            if not crit[xi]:
                continue
            e = (suffix_keys[xi % block], suffix_keys[int(p[xi]) % block], names[restricted[xi]])
            if e not in seen:
                seen.add(e)
                edges.append(e)
    edges.sort(key=lambda e: (word_index(parse_vertex(e[0], k), k), e[2], e[1]))
    return LabeledGraph(tuple(suffix_keys), tuple(edges))


def tile_connectivity(automaton: Automaton, m: int, n: int, cap: int = LEVEL_CAP) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return tile_partition(automaton, m, n, cap).connected()


def orbit_schreier(automaton: Automaton, base, include_identity: bool = False,
                   cap: int = LEVEL_CAP) -> LabeledGraph:
    """The connected component of ``base`` in its level's Schreier graph."""
    k = automaton.alphabet_size
    word = parse_vertex(base, k) if isinstance(base, str) else tuple(base)
    if any(not 0 <= a < k for a in word):
        raise AutomatonError(f"base word {base!r} has letters outside the alphabet")
    graph = schreier_graph(automaton, len(word), include_identity, cap=cap).graph
    key = vertex_key(word, k)
    for comp in graph.components():
        if key in comp:
            members = set(comp)
            return LabeledGraph(
                tuple(v for v in graph.vertices if v in members),
                tuple(e for e in graph.edges if e[0] in members),
            )
    raise AssertionError("base vertex missing from its level")
