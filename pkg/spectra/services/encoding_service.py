"""Structures to graphs and back.

``encode_structure`` lays out the line gadget followed by one element block
per domain element. ``classify_vertices`` recognises that shape in an
arbitrary graph by direct graph computation: it evaluates the same
predicates the structural sentence Ψ0 ∧ P6 states, in the same way, and
raises on the first property that fails.
"""
import logging
import random
from itertools import combinations

import networkx as nx

from spectra.errors import ClassificationError, EmptyDomainError, ParamsError, SelfLoopError, VocabularyError
from spectra.models.formula import Vocabulary
from spectra.models.reduction import ReductionParams, RoleClassification, relation_role
from spectra.models.structure import Graph, Structure
from spectra.services.gadget_service import build_gadget_c, gadget_d_edges, line_vertex
from spectra.services.psi_service import middle_role

logger = logging.getLogger(__name__)


def block_vertex(params: ReductionParams, i: int, role: str) -> int:
    """Vertex number of the ``role`` port of element ``i``."""
    return params.q + (i - 1) * params.p + params.roles.index(role) + 1


def _relation_order(structure: Structure, params: ReductionParams, vocab: Vocabulary | None) -> list[str]:
    symbols = list(vocab) if vocab is not None else list(structure.relations)
    if vocab is not None and set(structure.relations) != set(vocab):
        raise VocabularyError(
            f"structure interprets {sorted(structure.relations)}, the reduction expects {list(vocab)}"
        )
    if len(symbols) != params.m:
        raise ParamsError(f"structure has {len(symbols)} relations, the reduction expects m={params.m}")
    return symbols


def encode_structure(
    structure: Structure,
    params: ReductionParams,
    vocab: Vocabulary | None = None,
) -> tuple[Graph, RoleClassification]:
    """Graph of ``structure``: the line gadget plus one block per element.

    Every port attaches towards the end u_1. The l-th relation of ``vocab``
    (or of the structure when no vocabulary is given) becomes the R_l edges
    i^{R_l} - j^S.
    """
    loops = structure.self_loops()
    if loops:
        symbol, a = loops[0]
        raise SelfLoopError(f"structure has the self-loop ({a},{a}) in {symbol}; encode needs loop-free input")
    symbols = _relation_order(structure, params, vocab)
    gadget = build_gadget_c(params)
    edges = set(gadget.edges)
    labels = dict(gadget.labels)
    n = structure.size
    blocks = []
    for i in range(1, n + 1):
        block = {role: block_vertex(params, i, role) for role in params.roles}
        for role, v in block.items():
            labels[v] = f"{i}^{role}"
            edges.add((line_vertex(params, params.distance(role) + 1), v))
        edges.update((block[a], block[b]) for a, b in gadget_d_edges(params))
        blocks.append(block)
    for l, symbol in enumerate(symbols, start=1):
        port = relation_role(l)
        edges.update((blocks[i - 1][port], blocks[j - 1]["S"]) for i, j in structure.relations[symbol])
    graph = Graph(params.vertex_count(n), frozenset(edges), labels)
    length = params.line_length
    classification = RoleClassification(
        n=n,
        line=tuple(range(1, length + 1)),
        pendants=tuple(range(length + 1, 2 * length + 1)),
        blocks=tuple(blocks),
    )
    logger.debug("Encoded a size-%d structure as %d vertices and %d edges", n, graph.size, len(graph.edges))
    return graph, classification


class _Shape:
    """Pendant, line and role sets of a graph, computed the way the formulas define them."""

    def __init__(self, g: Graph, params: ReductionParams):
        self.g = g
        self.params = params
        self.adj = g.adjacency
        self.pendants = {v for v in g.vertices if len(self.adj[v]) == 1}
        self.line = {v for v in g.vertices if v not in self.pendants and len(self.adj[v] & self.pendants) == 1}
        self.ends = sorted(v for v in self.line if len(self.adj[v] & self.line) == 1)
        self.roles: dict[str, set[int]] = {}

    def distances(self) -> dict[int, dict[int, int]]:
        inner = self.g.to_networkx().subgraph(self.line)
        return dict(nx.all_pairs_shortest_path_length(inner))

    def layer(self, dist, e: int, d: int) -> set[int]:
        return {s for s, k in dist[e].items() if k == d}

    def assign_roles(self, dist) -> None:
        for alpha in self.params.roles:
            d = self.params.distance(alpha)
            layers = [self.layer(dist, e, d) for e in self.ends]
            members = set()
            for v in self.g.vertices:
                if v in self.pendants or v in self.line:
                    continue
                touching = self.adj[v] & self.line
                if touching and any(touching == layer for layer in layers):
                    members.add(v)
            self.roles[alpha] = members

    def neighbours(self, v: int, alpha: str) -> set[int]:
        return self.adj[v] & self.roles[alpha]

    def partners(self, alpha: str, beta: str, a: int) -> set[int]:
        """All b with pair(alpha, beta)(a, b)."""
        if a not in self.roles[alpha]:
            return set()
        gamma = middle_role(alpha, beta)
        found = set()
        for c in self.neighbours(a, gamma):
            found |= self.neighbours(c, beta)
        return found

    def is_element(self, v: int) -> bool:
        return any(v in members for members in self.roles.values())

    def same_component(self, a: int, b: int) -> bool:
        mine = [alpha for alpha in self.params.roles if a in self.roles[alpha]]
        theirs = [beta for beta in self.params.roles if b in self.roles[beta]]
        return any(self._pattern(alpha, beta, a, b) for alpha in mine for beta in theirs)

    def _pattern(self, alpha: str, beta: str, a: int, b: int) -> bool:
        if alpha == beta:
            return a == b
        kinds = {alpha[0], beta[0]}
        if kinds in ({"P", "Q"}, {"Q", "S"}, {"P", "R"}):
            return b in self.adj[a]
        if kinds == {"S", "R"}:
            s, r, port = (a, b, beta) if alpha == "S" else (b, a, alpha)
            return any(r in self.partners("Q", port, z) for z in self.neighbours(s, "Q"))
        return b in self.partners(alpha, beta, a)


def _fail(prop: str, detail: str):
    raise ClassificationError(prop, detail)


def _only(found: set[int], prop: str, what: str) -> int:
    if len(found) != 1:
        _fail(prop, f"{what}: found {len(found)}, expected exactly one")
    return next(iter(found))


def _unique_apart(shape: _Shape, alpha: str, beta: str, x: int) -> None:
    partners = shape.partners(alpha, beta, x)
    partner = _only(partners, "P5", f"{alpha}-vertex {x} and its {beta} partners through a middle vertex")
    if partner in shape.adj[x]:
        _fail("P5", f"{alpha}-vertex {x} is adjacent to its {beta} partner {partner}")


def _check_p5(shape: _Shape) -> None:
    relations = [relation_role(l) for l in range(1, shape.params.m + 1)]
    for x in sorted(shape.roles["P"]):
        _only(shape.neighbours(x, "Q"), "P5", f"Q-neighbours of P-vertex {x}")
        for r in relations:
            _only(shape.neighbours(x, r), "P5", f"{r}-neighbours of P-vertex {x}")
        _unique_apart(shape, "P", "S", x)
        ports = ["Q"] + relations
        for k, beta in enumerate(ports):
            for delta in ports[k + 1:]:
                for y in shape.neighbours(x, beta):
                    if shape.adj[y] & shape.neighbours(x, delta):
                        _fail("P5", f"{beta} and {delta} neighbours of P-vertex {x} are adjacent")
    for x in sorted(shape.roles["Q"]):
        _only(shape.neighbours(x, "P"), "P5", f"P-neighbours of Q-vertex {x}")
        _only(shape.neighbours(x, "S"), "P5", f"S-neighbours of Q-vertex {x}")
        for r in relations:
            _unique_apart(shape, "Q", r, x)
    for x in sorted(shape.roles["S"]):
        _only(shape.neighbours(x, "Q"), "P5", f"Q-neighbours of S-vertex {x}")
        _unique_apart(shape, "S", "P", x)
        for y in shape.neighbours(x, "Q"):
            for r in relations:
                if shape.partners("Q", r, y) & shape.adj[x]:
                    _fail("P5", f"S-vertex {x} is adjacent to the {r} partner of its Q-neighbour {y}")
    for r in relations:
        for x in sorted(shape.roles[r]):
            _only(shape.neighbours(x, "P"), "P5", f"P-neighbours of {r}-vertex {x}")
            _unique_apart(shape, r, "Q", x)
            for y in shape.neighbours(x, "P"):
                if shape.partners("P", "S", y) & shape.adj[x]:
                    _fail("P5", f"{r}-vertex {x} is adjacent to the S partner of its P-neighbour {y}")


def _check_p6(shape: _Shape) -> None:
    relations = [relation_role(l) for l in range(1, shape.params.m + 1)]
    for a, b in sorted(shape.g.edges):
        if not (shape.is_element(a) and shape.is_element(b)) or shape.same_component(a, b):
            continue
        allowed = any(
            (a in shape.roles["S"] and b in shape.roles[r]) or (a in shape.roles[r] and b in shape.roles["S"])
            for r in relations
        )
        if not allowed:
            _fail("P6", f"edge {a}-{b} joins two element blocks but is not an R-S edge")


def classify_vertices(g: Graph, params: ReductionParams) -> RoleClassification:
    """Partition ``g`` into the line gadget and element blocks, or raise ``ClassificationError``."""
    shape = _Shape(g, params)
    span = 4 * params.m
    for v in sorted(shape.pendants):
        if not shape.adj[v] & shape.line:
            _fail("P1", f"degree-1 vertex {v} has no line neighbour")
    if len(shape.ends) != 2:
        _fail("P2", f"{len(shape.ends)} line vertices have exactly one line neighbour, expected 2")
    dist = shape.distances()
    for a in sorted(shape.line):
        far = sorted(b for b in shape.line if dist[a].get(b, span + 1) > span)
        if far:
            _fail("P3", f"line vertices {a} and {far[0]} are more than {span} apart inside the line")
    layered = False
    for e in shape.ends:
        crowded = [d for d in range(span + 1) if len(shape.layer(dist, e, d)) > 1]
        if not crowded:
            layered = True
            break
    if not layered:
        _fail("P3", f"two line vertices at line distance {crowded[0]} from end {shape.ends[-1]}")
    first, last = shape.ends
    if dist[first].get(last) != span:
        _fail("P4", f"the line ends {first} and {last} are not at line distance {span}")
    shape.assign_roles(dist)
    for v in g.vertices:
        if v not in shape.pendants and v not in shape.line and not shape.is_element(v):
            _fail("totality", f"vertex {v} is neither a pendant, a line vertex nor an element port")
    _check_p5(shape)
    _check_p6(shape)
    return _assemble(shape, dist, first)


def _assemble(shape: _Shape, dist, origin: int) -> RoleClassification:
    params = shape.params
    line = tuple(sorted(shape.line, key=lambda v: dist[origin][v]))
    pendants = tuple(next(iter(shape.adj[u] & shape.pendants)) for u in line)
    blocks = []
    for p in sorted(shape.roles["P"]):
        block = {"P": p}
        block["Q"] = next(iter(shape.neighbours(p, "Q")))
        block["S"] = next(iter(shape.partners("P", "S", p)))
        for l in range(1, params.m + 1):
            block[relation_role(l)] = next(iter(shape.neighbours(p, relation_role(l))))
        blocks.append({role: block[role] for role in params.roles})
    covered = [v for block in blocks for v in block.values()] + list(line) + list(pendants)
    if len(covered) != len(set(covered)) or len(covered) != shape.g.size:
        _fail("P5", "element blocks do not partition the vertices off the line gadget")
    return RoleClassification(n=len(blocks), line=line, pendants=pendants, blocks=tuple(blocks))


def decode_graph(g: Graph, params: ReductionParams, vocab: Vocabulary | None = None) -> Structure:
    """Structure whose elements are the blocks of ``g``, numbered by P-vertex."""
    classification = classify_vertices(g, params)
    if classification.n == 0:
        raise EmptyDomainError()
    symbols = list(vocab) if vocab is not None else [relation_role(l) for l in range(1, params.m + 1)]
    if len(symbols) != params.m:
        raise ParamsError(f"vocabulary has {len(symbols)} relations, the reduction expects m={params.m}")
    element_of_s = {block["S"]: i for i, block in enumerate(classification.blocks, start=1)}
    relations = {}
    for l, symbol in enumerate(symbols, start=1):
        pairs = set()
        for i, block in enumerate(classification.blocks, start=1):
            for v in g.adjacency[block[relation_role(l)]]:
                if v in element_of_s:
                    pairs.add((i, element_of_s[v]))
        relations[symbol] = frozenset(pairs)
    return Structure(classification.n, relations)


def cross_pairs(classification: RoleClassification, params: ReductionParams) -> list[tuple[int, int]]:
    """Every vertex pair i^{R_l} - j^S, the edges a relation tuple can add."""
    return [
        (a[relation_role(l)], b["S"])
        for a in classification.blocks
        for b in classification.blocks
        for l in range(1, params.m + 1)
    ]


def single_edge_mutations(
    g: Graph,
    rng: random.Random,
    count: int,
    include=(),
) -> list[tuple[tuple[int, int], Graph]]:
    """Copies of ``g`` with one vertex pair toggled: every pair in ``include``, then ``count`` random others."""
    chosen = [(min(a, b), max(a, b)) for a, b in include]
    rest = sorted(set(combinations(g.vertices, 2)) - set(chosen))
    chosen += rng.sample(rest, min(count, len(rest)))
    return [((a, b), g.toggled(a, b)) for a, b in chosen]
