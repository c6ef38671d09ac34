"""
Tests for the structural graph formulas against direct graph computation
"""

import networkx as nx
import pytest

from spectra.errors import ClassificationError, ParamsError, UndefinedPairError, UnknownRoleError
from spectra.models.structure import Graph, Structure
from spectra.services.encoding_service import classify_vertices, encode_structure
from spectra.services.evaluation_service import ModelChecker
from spectra.services.gadget_service import build_gadget_c
from spectra.services.psi_service import (
    build_base_predicates,
    build_dist,
    build_P5,
    build_P6,
    build_pair,
    build_psi0,
    build_role,
    build_same_component,
    build_structural_axioms,
    psi0_parts,
)

from conftest import VOCAB, random_graph, random_structure


def line_vertices(g):
    pendants = {v for v in g.vertices if g.degree(v) == 1}
    return {v for v in g.vertices if v not in pendants and len(g.adjacency[v] & pendants) == 1}


def with_line(g, rng):
    """``g`` plus a short path whose vertices each carry one pendant."""
    n = g.size
    k = rng.randint(1, 3)
    size = n + 2 * k
    edges = set(g.edges)
    for i in range(k):
        u, w = n + 1 + i, n + 1 + k + i
        edges.add((u, w))
        if i:
            edges.add((u - 1, u))
    if n:
        edges.add((rng.randint(1, n), n + 1))
    return Graph(size, frozenset(edges))


def line_distances(g):
    line = line_vertices(g)
    return dict(nx.all_pairs_shortest_path_length(g.to_networkx().subgraph(line)))


class TestBasePredicates:
    """Pendants, line vertices and line ends"""

    def test_on_the_line_gadget(self, params):
        g, _ = encode_structure(Structure.empty(VOCAB, 1), params, VOCAB)
        checker = ModelChecker.for_model(g)
        predicates = build_base_predicates(params)
        length = params.line_length
        assert checker.satisfying_elements(predicates["in_line"]) == list(range(1, length + 1))
        assert checker.satisfying_elements(predicates["end"]) == [1, length]
        pendants = checker.satisfying_elements(predicates["deg1"])
        assert set(range(length + 1, 2 * length + 1)) <= set(pendants)

    def test_distance_matches_bfs_oracle(self, params, rng):
        checker_vars = params.work_vars[:2]
        formulas = {n: build_dist(params, n) for n in range(0, 6)}
        for _ in range(200):
            g = random_graph(rng, rng.randint(1, 10), density=rng.choice([0.15, 0.3]))
            if rng.random() < 0.5:
                g = with_line(g, rng)
            distances = line_distances(g)
            checker = ModelChecker.for_model(g)
            for n, formula in formulas.items():
                for a in g.vertices:
                    for b in g.vertices:
                        expected = distances.get(a, {}).get(b) == n
                        assert checker.holds(formula, dict(zip(checker_vars, (a, b)))) == expected

    def test_at_most_mode(self, params):
        g, _ = encode_structure(Structure.empty(VOCAB, 1), params, VOCAB)
        checker = ModelChecker.for_model(g)
        x, y, _ = params.work_vars
        assert checker.holds(build_dist(params, 3, "at-most"), {x: 1, y: 3})
        assert not checker.holds(build_dist(params, 3, "exactly"), {x: 1, y: 3})

    def test_distance_out_of_range(self, params):
        with pytest.raises(ParamsError):
            build_dist(params, 4 * params.m + 1)
        with pytest.raises(ParamsError):
            build_dist(params, 2, "roughly")


class TestRoles:
    """Role, pair and component formulas on encoded graphs"""

    @pytest.fixture
    def encoded(self, params):
        structure = Structure(2, {"R1": {(1, 2)}, "R2": set(), "R3": {(2, 1)}})
        return encode_structure(structure, params, VOCAB)

    def test_roles_pick_out_the_ports(self, params, encoded):
        g, classification = encoded
        checker = ModelChecker.for_model(g)
        for role in params.roles:
            assert checker.satisfying_elements(build_role(params, role)) == classification.vertices_with_role(role)

    def test_pairs_stay_inside_blocks(self, params, encoded):
        g, classification = encoded
        checker = ModelChecker.for_model(g)
        x, y, _ = params.work_vars
        formula = build_pair(params, "P", "S")
        for i, a in enumerate(classification.blocks):
            for j, b in enumerate(classification.blocks):
                assert checker.holds(formula, {x: a["P"], y: b["S"]}) == (i == j)

    def test_same_component(self, params, encoded):
        g, classification = encoded
        checker = ModelChecker.for_model(g)
        x, y, _ = params.work_vars
        formula = build_same_component(params)
        first, second = classification.blocks
        for a in first.values():
            for b in first.values():
                assert checker.holds(formula, {x: a, y: b})
            for b in second.values():
                assert not checker.holds(formula, {x: a, y: b})

    def test_structural_sentences_hold(self, params, encoded):
        g, _ = encoded
        checker = ModelChecker.for_model(g)
        for name, part in psi0_parts(params).items():
            assert checker.holds(part), name
        assert checker.holds(build_psi0(params))
        assert checker.holds(build_P6(params))

    def test_block_conditions(self, params, encoded):
        g, classification = encoded
        formula = build_P5(params)
        assert ModelChecker.for_model(g).holds(formula)
        block = classification.blocks[0]
        for a, b in ((block["Q"], block["R1"]), (block["Q"], block["S"])):
            assert not ModelChecker.for_model(g.toggled(a, b)).holds(formula), (a, b)

    def test_axioms_fail_on_a_bare_path(self, params):
        path = Graph(10, frozenset((i, i + 1) for i in range(1, 10)))
        checker = ModelChecker.for_model(path)
        axioms = build_structural_axioms(params)
        assert not checker.holds(axioms["P2"])
        assert not checker.holds(axioms["P4"])

    def test_undefined_pair(self, params):
        with pytest.raises(UndefinedPairError):
            build_pair(params, "P", "Q")

    def test_unknown_role(self, params):
        with pytest.raises(UnknownRoleError):
            build_role(params, "T")


class TestStructuralAxioms:
    """The structural sentence on the bare line gadget and on broken graphs"""

    @pytest.fixture
    def gadget(self, params):
        return build_gadget_c(params)

    def test_line_gadget_alone(self, params, gadget):
        assert ModelChecker.for_model(gadget).holds(build_psi0(params))

    def test_isolated_vertex(self, params, gadget):
        checker = ModelChecker.for_model(Graph(gadget.size + 1, gadget.edges))
        assert not checker.holds(psi0_parts(params)["totality"])
        assert not checker.holds(build_psi0(params))

    def test_chord_on_the_line(self, params, gadget):
        checker = ModelChecker.for_model(gadget.toggled(2, 4))
        assert not checker.holds(psi0_parts(params)["P3"])
        assert not checker.holds(build_psi0(params))

    def test_four_cycle(self, params):
        square = Graph(4, frozenset({(1, 2), (2, 3), (3, 4), (1, 4)}))
        assert not ModelChecker.for_model(square).holds(build_psi0(params))
        with pytest.raises(ClassificationError):
            classify_vertices(square, params)

    def test_every_vertex_has_one_kind(self, params, gadget, rng):
        models = [gadget]
        models += [encode_structure(random_structure(rng, VOCAB, n), params, VOCAB)[0] for n in (1, 2, 3)]
        predicates = build_base_predicates(params)
        kinds = [predicates["deg1"], predicates["in_line"]] + [build_role(params, role) for role in params.roles]
        for g in models:
            checker = ModelChecker.for_model(g)
            assert checker.holds(build_psi0(params))
            counts = {v: 0 for v in g.vertices}
            for kind in kinds:
                for v in checker.satisfying_elements(kind):
                    counts[v] += 1
            assert set(counts.values()) == {1}, g.size
