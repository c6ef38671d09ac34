"""
Tests for the line gadget C, the element gadget D and reduction parameters
"""

import pytest

from spectra.errors import ParamsError, UnknownRoleError
from spectra.models.reduction import ReductionParams
from spectra.services.evaluation_service import is_bipartite
from spectra.services.gadget_service import build_gadget_c, build_gadget_d, gadget_d_edges, pendant_vertex


class TestGadgets:
    """Vertex and edge counts of C and D"""

    @pytest.mark.parametrize("m, c_vertices, c_edges, d_vertices, d_edges", [
        (3, 26, 25, 6, 5),
        (5, 42, 41, 8, 7),
    ])
    def test_counts(self, m, c_vertices, c_edges, d_vertices, d_edges):
        params = ReductionParams(m)
        c = build_gadget_c(params)
        d = build_gadget_d(params)
        assert (c.size, len(c.edges)) == (c_vertices, c_edges)
        assert (d.size, len(d.edges)) == (d_vertices, d_edges)

    def test_line_with_pendants(self, params):
        c = build_gadget_c(params)
        for i in range(1, params.line_length + 1):
            assert c.degree(pendant_vertex(params, i)) == 1
            assert c.has_edge(i, pendant_vertex(params, i))
        assert c.degree(1) == 2 and c.degree(params.line_length) == 2
        assert c.degree(2) == 3
        assert c.label(1) == "u1" and c.label(pendant_vertex(params, 1)) == "w1"

    def test_element_gadget_is_a_tree(self, params):
        d = build_gadget_d(params)
        assert ("P", "Q") in gadget_d_edges(params)
        assert d.label(1) == "d^P"
        assert d.degree(1) == 1 + params.m
        assert is_bipartite(d) is not None


class TestParams:
    """Constants and attachment tables"""

    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_constants(self, m):
        params = ReductionParams(m)
        assert params.p == m + 3
        assert params.q == 8 * m + 2
        assert params.vertex_count(2) == 2 * (m + 3) + 8 * m + 2

    def test_parity_table(self, params):
        assert params.attachment == {"P": 1, "Q": 0, "S": 3, "R1": 2, "R2": 4, "R3": 6}

    def test_sequential_table(self):
        params = ReductionParams(3, "sequential")
        assert params.attachment == {"P": 0, "Q": 1, "S": 2, "R1": 3, "R2": 4, "R3": 5}

    @pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
    @pytest.mark.parametrize("scheme", ["parity", "sequential"])
    def test_attachment_is_reflection_safe(self, m, scheme):
        params = ReductionParams(m, scheme)
        seen = set()
        for d in params.attachment.values():
            assert 0 <= d <= 4 * m
            assert d not in seen and 4 * m - d not in seen
            seen.add(d)

    def test_too_few_relations(self):
        with pytest.raises(ParamsError):
            ReductionParams(2)

    def test_unknown_scheme(self):
        with pytest.raises(ParamsError):
            ReductionParams(3, "spiral")

    def test_unknown_role(self, params):
        with pytest.raises(UnknownRoleError):
            params.distance("R4")
