from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import networkx as nx
import numpy as np

from spectra.errors import SelfLoopError, StructureError
from spectra.models.formula import EDGE, Vocabulary


@dataclass(frozen=True)
class Structure:
    """A finite structure over binary relations with domain {1..size}."""

    size: int
    relations: Mapping[str, frozenset[tuple[int, int]]]

    def __post_init__(self):
        if self.size < 1:
            raise StructureError(f"structure size must be positive, got {self.size}")
        normalized = {}
        for symbol, pairs in self.relations.items():
            frozen = frozenset((int(a), int(b)) for a, b in pairs)
            for a, b in frozen:
                if not (1 <= a <= self.size and 1 <= b <= self.size):
                    raise StructureError(f"pair ({a},{b}) of {symbol} lies outside 1..{self.size}")
            normalized[symbol] = frozen
        object.__setattr__(self, "relations", normalized)

    @classmethod
    def empty(cls, vocab: Vocabulary, size: int) -> Structure:
        return cls(size, {symbol: frozenset() for symbol in vocab})

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple(self.relations))

    def holds(self, symbol: str, a: int, b: int) -> bool:
        return (a, b) in self.relations[symbol]

    def self_loops(self) -> list[tuple[str, int]]:
        return sorted((symbol, a) for symbol, pairs in self.relations.items() for a, b in pairs if a == b)

    def matrix(self, symbol: str) -> np.ndarray:
        table = np.zeros((self.size, self.size), dtype=bool)
        for a, b in self.relations[symbol]:
            table[a - 1, b - 1] = True
        return table

    def matrices(self) -> dict[str, np.ndarray]:
        return {symbol: self.matrix(symbol) for symbol in self.relations}


@dataclass(frozen=True)
class Graph:
    """Finite undirected loop-free graph on vertices {1..size}.

    Edges are stored as sorted pairs, so E is symmetric by construction.
    """

    size: int
    edges: frozenset[tuple[int, int]]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise StructureError(f"graph size must be positive, got {self.size}")
        normalized = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise SelfLoopError(f"self-loop at vertex {a} is not allowed in a graph")
            if not (1 <= a <= self.size and 1 <= b <= self.size):
                raise StructureError(f"edge {a}-{b} lies outside 1..{self.size}")
            normalized.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(normalized))
        object.__setattr__(self, "labels", dict(self.labels))

    @property
    def vertices(self) -> range:
        return range(1, self.size + 1)

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        neighbours = {v: set() for v in self.vertices}
        for a, b in self.edges:
            neighbours[a].add(b)
            neighbours[b].add(a)
        return {v: frozenset(ns) for v, ns in neighbours.items()}

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def matrix(self) -> np.ndarray:
        table = np.zeros((self.size, self.size), dtype=bool)
        for a, b in self.edges:
            table[a - 1, b - 1] = True
            table[b - 1, a - 1] = True
        return table

    def matrices(self) -> dict[str, np.ndarray]:
        return {EDGE: self.matrix()}

    def toggled(self, a: int, b: int) -> Graph:
        """Copy with the pair {a, b} added if absent and removed if present."""
        pair = (min(a, b), max(a, b))
        return Graph(self.size, self.edges ^ {pair}, self.labels)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def label(self, v: int) -> str:
        return self.labels.get(v, str(v))


def graph_view(g: Graph) -> Structure:
    """The graph as a structure over {E} holding both orientations of each edge."""
    pairs = set()
    for a, b in g.edges:
        pairs.add((a, b))
        pairs.add((b, a))
    return Structure(g.size, {EDGE: frozenset(pairs)})
