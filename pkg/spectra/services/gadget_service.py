"""The two building blocks of encoded graphs.

The line gadget C has line vertices u_1..u_{4m+1} numbered 1..4m+1 and their
pendants w_1..w_{4m+1} numbered 4m+2..8m+2. The element gadget D numbers its
vertices in role order P, Q, S, R1..Rm.
"""
from spectra.models.reduction import ReductionParams, relation_role
from spectra.models.structure import Graph


def line_vertex(params: ReductionParams, i: int) -> int:
    return i


def pendant_vertex(params: ReductionParams, i: int) -> int:
    return params.line_length + i


def build_gadget_c(params: ReductionParams) -> Graph:
    length = params.line_length
    edges = {(line_vertex(params, i), pendant_vertex(params, i)) for i in range(1, length + 1)}
    edges |= {(i, i + 1) for i in range(1, length)}
    labels = {line_vertex(params, i): f"u{i}" for i in range(1, length + 1)}
    labels.update({pendant_vertex(params, i): f"w{i}" for i in range(1, length + 1)})
    return Graph(params.q, frozenset(edges), labels)


def gadget_d_edges(params: ReductionParams) -> list[tuple[str, str]]:
    """Edges of D as role pairs: P-Q, Q-S and P-R_l for every l."""
    edges = [("P", "Q"), ("Q", "S")]
    edges.extend(("P", relation_role(l)) for l in range(1, params.m + 1))
    return edges


def build_gadget_d(params: ReductionParams) -> Graph:
    number = {role: k for k, role in enumerate(params.roles, start=1)}
    edges = frozenset((number[a], number[b]) for a, b in gadget_d_edges(params))
    labels = {k: f"d^{role}" for role, k in number.items()}
    return Graph(params.p, edges, labels)
