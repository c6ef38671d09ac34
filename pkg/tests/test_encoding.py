"""
Tests for encoding structures as graphs and decoding them back
"""

import random

import pytest

from spectra.errors import ClassificationError, EmptyDomainError, ParamsError, SelfLoopError, VocabularyError
from spectra.models.formula import Vocabulary
from spectra.models.reduction import ReductionParams
from spectra.models.structure import Graph, Structure
from spectra.services.encoding_service import (
    block_vertex,
    classify_vertices,
    cross_pairs,
    decode_graph,
    encode_structure,
    single_edge_mutations,
)
from spectra.services.evaluation_service import is_bipartite
from spectra.services.gadget_service import build_gadget_c

from conftest import VOCAB, random_structure


def vocabulary(m: int) -> Vocabulary:
    return Vocabulary(tuple(f"R{l}" for l in range(1, m + 1)))


class TestEncoding:
    """Shape and size of encoded graphs"""

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_size_law(self, m, rng):
        params = ReductionParams(m)
        vocab = vocabulary(m)
        for _ in range(100):
            n = rng.randint(1, 5)
            g, _ = encode_structure(random_structure(rng, vocab, n), params, vocab)
            assert g.size == params.p * n + params.q
            assert g.size == params.vertex_count(n)

    def test_edge_count(self, params):
        structure = Structure(2, {"R1": {(1, 2)}, "R2": set(), "R3": {(2, 1), (1, 2)}})
        g, _ = encode_structure(structure, params, VOCAB)
        gadget_edges = 2 * params.line_length - 1
        block_edges = params.p - 1 + params.p
        assert len(g.edges) == gadget_edges + 2 * block_edges + 3

    def test_block_layout(self, params):
        g, classification = encode_structure(Structure.empty(VOCAB, 2), params, VOCAB)
        assert block_vertex(params, 1, "P") == params.q + 1
        assert block_vertex(params, 2, "R3") == params.q + 2 * params.p
        assert classification.blocks[1]["Q"] == block_vertex(params, 2, "Q")
        assert g.label(block_vertex(params, 2, "S")) == "2^S"
        assert str(classification.role_of(1)) == "u1"

    def test_relation_becomes_cross_edge(self, params):
        structure = Structure(2, {"R1": set(), "R2": {(2, 1)}, "R3": set()})
        g, classification = encode_structure(structure, params, VOCAB)
        assert g.has_edge(classification.blocks[1]["R2"], classification.blocks[0]["S"])
        assert not g.has_edge(classification.blocks[0]["R2"], classification.blocks[1]["S"])

    def test_parity_encoding_is_bipartite(self, params, rng):
        for _ in range(20):
            structure = random_structure(rng, VOCAB, rng.randint(1, 4))
            g, classification = encode_structure(structure, params, VOCAB)
            first, second = is_bipartite(g)
            expected = {v for i, v in enumerate(classification.line, start=1) if i % 2}
            expected |= {v for i, v in enumerate(classification.pendants, start=1) if not i % 2}
            expected |= set(classification.vertices_with_role("P")) | set(classification.vertices_with_role("S"))
            assert first == expected
            assert second == set(g.vertices) - expected

    def test_sequential_encoding_has_odd_cycles(self):
        params = ReductionParams(3, "sequential")
        g, _ = encode_structure(Structure.empty(VOCAB, 1), params, VOCAB)
        assert is_bipartite(g) is None

    def test_rejects_self_loops(self, params):
        with pytest.raises(SelfLoopError):
            encode_structure(Structure(2, {"R1": {(1, 1)}, "R2": set(), "R3": set()}), params, VOCAB)

    def test_rejects_other_vocabulary(self, params):
        with pytest.raises(VocabularyError):
            encode_structure(Structure.empty(Vocabulary(("A", "B", "C")), 1), params, VOCAB)

    def test_rejects_wrong_relation_count(self):
        with pytest.raises(ParamsError):
            encode_structure(Structure.empty(VOCAB, 1), ReductionParams(4))


class TestDecoding:
    """Recognising and decoding encoded graphs"""

    @pytest.mark.parametrize("scheme", ["parity", "sequential"])
    def test_roundtrip(self, scheme, rng):
        params = ReductionParams(3, scheme)
        for _ in range(100):
            structure = random_structure(rng, VOCAB, rng.randint(1, 4), density=rng.choice([0.1, 0.3, 0.6]))
            g, _ = encode_structure(structure, params, VOCAB)
            assert decode_graph(g, params, VOCAB) == structure

    def test_classification_matches_the_layout(self, params, rng):
        structure = random_structure(rng, VOCAB, 3)
        g, expected = encode_structure(structure, params, VOCAB)
        assert classify_vertices(g, params) == expected

    def test_relabelled_graph_decodes_to_an_isomorphic_copy(self, params, rng):
        structure = Structure(3, {"R1": {(1, 2), (2, 3)}, "R2": set(), "R3": {(3, 1)}})
        g, _ = encode_structure(structure, params, VOCAB)
        order = list(g.vertices)
        random.Random(7).shuffle(order)
        rename = dict(zip(g.vertices, order))
        shuffled = Graph(g.size, frozenset((rename[a], rename[b]) for a, b in g.edges))
        decoded = decode_graph(shuffled, params, VOCAB)
        assert decoded.size == 3
        assert sorted(len(decoded.relations[s]) for s in VOCAB) == [0, 1, 2]
        assert len(decoded.relations["R1"]) == 2

    def test_default_symbols(self, params):
        g, _ = encode_structure(Structure(1, {"A": set(), "B": set(), "C": set()}), params)
        assert decode_graph(g, params) == Structure.empty(VOCAB, 1)

    def test_gadget_alone_has_no_elements(self, params):
        with pytest.raises(EmptyDomainError):
            decode_graph(build_gadget_c(params), params)

    def test_path_is_rejected(self, params):
        path = Graph(12, frozenset((i, i + 1) for i in range(1, 12)))
        with pytest.raises(ClassificationError) as info:
            classify_vertices(path, params)
        assert info.value.property_name == "P2"

    def test_missing_pendant(self, params):
        g, _ = encode_structure(Structure.empty(VOCAB, 1), params, VOCAB)
        broken = g.toggled(5, 5 + params.line_length)
        with pytest.raises(ClassificationError):
            classify_vertices(broken, params)

    def test_same_block_edge_between_ports(self, params):
        g, classification = encode_structure(Structure.empty(VOCAB, 1), params, VOCAB)
        block = classification.blocks[0]
        with pytest.raises(ClassificationError) as info:
            classify_vertices(g.toggled(block["Q"], block["R1"]), params)
        assert info.value.property_name == "P5"


class TestMutations:
    """Candidate edge toggles around an encoded graph"""

    def test_cross_pairs(self, params):
        _, classification = encode_structure(Structure.empty(VOCAB, 2), params, VOCAB)
        pairs = cross_pairs(classification, params)
        assert len(pairs) == 2 * 2 * params.m
        assert (classification.blocks[0]["R1"], classification.blocks[1]["S"]) in pairs

    def test_single_edge_mutations(self, params, rng):
        g, classification = encode_structure(Structure.empty(VOCAB, 1), params, VOCAB)
        include = cross_pairs(classification, params)
        mutations = single_edge_mutations(g, rng, 10, include)
        assert len(mutations) == len(include) + 10
        for (a, b), mutated in mutations:
            assert mutated.has_edge(a, b) != g.has_edge(a, b)
            assert len(mutated.edges ^ g.edges) == 1
