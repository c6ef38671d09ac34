"""Exhaustive enumeration of structures and graphs of a fixed size.

Candidate number c encodes one model: bit j of c decides the j-th ground
atom, atoms being ordered relation by relation and, within a relation, by
the ordered pairs (1,1), (1,2), ... of the domain. Batches of consecutive
candidates are produced as stacked relation tables for vectorized checking.
"""
from itertools import combinations
from typing import Iterator

import numpy as np

from spectra.models.formula import EDGE, Vocabulary
from spectra.models.structure import Graph, Structure


def structure_pairs(n: int, loop_free: bool) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if not (loop_free and a == b)]


def graph_pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


def structure_atom_count(vocab: Vocabulary, n: int, loop_free: bool) -> int:
    return len(vocab) * len(structure_pairs(n, loop_free))


def graph_atom_count(n: int) -> int:
    return n * (n - 1) // 2


def enumerate_structures(vocab: Vocabulary, n: int, loop_free: bool) -> Iterator[Structure]:
    """Every structure of size ``n`` over ``vocab`` exactly once, in candidate order."""
    pairs = structure_pairs(n, loop_free)
    bits = len(vocab) * len(pairs)
    for code in range(2 ** bits):
        relations = {}
        for r, symbol in enumerate(vocab):
            offset = r * len(pairs)
            relations[symbol] = frozenset(p for j, p in enumerate(pairs) if code >> (offset + j) & 1)
        yield Structure(n, relations)


def enumerate_graphs(n: int) -> Iterator[Graph]:
    pairs = graph_pairs(n)
    for code in range(2 ** len(pairs)):
        yield Graph(n, frozenset(p for j, p in enumerate(pairs) if code >> j & 1))


def _bit_matrix(start: int, stop: int, bits: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, None] >> np.arange(bits, dtype=np.int64)) & 1).astype(bool)


def structure_batch(vocab: Vocabulary, n: int, loop_free: bool, start: int, stop: int) -> dict[str, np.ndarray]:
    """Relation tables of candidates ``start..stop-1``, each of shape (stop - start, n, n)."""
    pairs = structure_pairs(n, loop_free)
    bits = _bit_matrix(start, stop, len(vocab) * len(pairs))
    rows = np.array([a - 1 for a, _ in pairs], dtype=np.intp)
    cols = np.array([b - 1 for _, b in pairs], dtype=np.intp)
    tables = {}
    for r, symbol in enumerate(vocab):
        table = np.zeros((stop - start, n, n), dtype=bool)
        if pairs:
            table[:, rows, cols] = bits[:, r * len(pairs):(r + 1) * len(pairs)]
        tables[symbol] = table
    return tables


def graph_batch(n: int, start: int, stop: int) -> dict[str, np.ndarray]:
    pairs = graph_pairs(n)
    bits = _bit_matrix(start, stop, len(pairs))
    table = np.zeros((stop - start, n, n), dtype=bool)
    if pairs:
        rows = np.array([a - 1 for a, _ in pairs], dtype=np.intp)
        cols = np.array([b - 1 for _, b in pairs], dtype=np.intp)
        table[:, rows, cols] = bits
        table[:, cols, rows] = bits
    return {EDGE: table}


def structure_from_code(vocab: Vocabulary, n: int, loop_free: bool, code: int) -> Structure:
    pairs = structure_pairs(n, loop_free)
    relations = {}
    for r, symbol in enumerate(vocab):
        offset = r * len(pairs)
        relations[symbol] = frozenset(p for j, p in enumerate(pairs) if code >> (offset + j) & 1)
    return Structure(n, relations)


def graph_from_code(n: int, code: int) -> Graph:
    return Graph(n, frozenset(p for j, p in enumerate(graph_pairs(n)) if code >> j & 1))
