"""Model checking.

``ModelChecker`` evaluates a formula bottom-up as a boolean table over its
free variables. Variable number i (counting from 1 in order of first use)
lives on array axis -(i+1); axis -1 is reserved for a batch of models of the
same size, so one pass can check many graphs at once. Tables of different
shape broadcast against each other because unused axes have size one.
"""
import logging
from typing import Mapping

import networkx as nx
import numpy as np

from spectra import config
from spectra.errors import StructureError, UnassignedVariableError, UninterpretedSymbolError
from spectra.models.formula import (
    EDGE,
    And,
    Atom,
    Equality,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    TruthConstant,
)
from spectra.models.structure import Graph, Structure
from spectra.services.formula_service import free_variables

logger = logging.getLogger(__name__)

BATCH_AXIS_LABEL = 0


class VariableAxes:
    """Assigns each variable name a label; label i is laid out on axis -(i+1)."""

    def __init__(self):
        self._labels: dict[str, int] = {}

    def label(self, var: str) -> int:
        if var not in self._labels:
            self._labels[var] = len(self._labels) + 1
        return self._labels[var]

    def axis(self, var: str) -> int:
        return -(self.label(var) + 1)

    @staticmethod
    def place(array: np.ndarray, labels: list[int]) -> np.ndarray:
        """Lay out ``array``, whose axes carry the distinct ``labels``, on the shared axes."""
        depth = max(labels) + 1
        order = sorted(range(len(labels)), key=lambda k: -labels[k])
        array = np.transpose(array, order)
        sizes = {labels[k]: array.shape[pos] for pos, k in enumerate(order)}
        shape = tuple(sizes.get(depth - 1 - p, 1) for p in range(depth))
        return array.reshape(shape)

    def place_pair(self, matrix: np.ndarray, left: str, right: str, batched: bool) -> np.ndarray:
        """Lay out an n x n (or batch x n x n) relation table for the atom R(left, right)."""
        prefix = [BATCH_AXIS_LABEL] if batched else []
        if left == right:
            diagonal = np.diagonal(matrix, axis1=-2, axis2=-1)
            return self.place(diagonal, prefix + [self.label(left)])
        return self.place(matrix, prefix + [self.label(left), self.label(right)])

    def quantified_axis(self, table: np.ndarray, var: str) -> int | None:
        label = self.label(var)
        return -(label + 1) if table.ndim > label else None


class ModelChecker:
    """Memoized evaluation of formulas on one model or on a batch of equally sized models.

    Only tables for subformulas with at most ``config.MEMO_MAX_FREE_VARS`` free
    variables are memoized. Those are evaluated once per checker however often
    they are shared. Wider tables (n^3 entries per model and up) are recomputed
    on every use and then dropped.
    """

    def __init__(self, relations: Mapping[str, np.ndarray], size: int, batch: int | None = None):
        self.relations = dict(relations)
        self.size = size
        self.batch = batch
        self.axes = VariableAxes()
        self._memo: dict[Formula, np.ndarray] = {}

    @classmethod
    def for_model(cls, model: Structure | Graph) -> "ModelChecker":
        return cls(model.matrices(), model.size)

    @classmethod
    def for_graphs(cls, graphs: list[Graph]) -> "ModelChecker":
        sizes = {g.size for g in graphs}
        if len(sizes) != 1:
            raise StructureError(f"a batch needs graphs of one size, got sizes {sorted(sizes)}")
        stacked = np.stack([g.matrix() for g in graphs])
        return cls({EDGE: stacked}, sizes.pop(), batch=len(graphs))

    @classmethod
    def for_structures(cls, structures: list[Structure]) -> "ModelChecker":
        sizes = {s.size for s in structures}
        if len(sizes) != 1:
            raise StructureError(f"a batch needs structures of one size, got sizes {sorted(sizes)}")
        symbols = list(structures[0].relations)
        stacked = {symbol: np.stack([s.matrix(symbol) for s in structures]) for symbol in symbols}
        return cls(stacked, sizes.pop(), batch=len(structures))

    @property
    def batched(self) -> bool:
        return self.batch is not None

    def table(self, formula: Formula) -> np.ndarray:
        cached = self._memo.get(formula)
        if cached is not None:
            return cached
        result = self._compute(formula)
        if len(free_variables(formula)) <= config.MEMO_MAX_FREE_VARS:
            self._memo[formula] = result
        return result

    def _compute(self, node: Formula) -> np.ndarray:
        if isinstance(node, TruthConstant):
            return np.array(node.value)
        if isinstance(node, Atom):
            matrix = self.relations.get(node.rel)
            if matrix is None:
                raise UninterpretedSymbolError(node.rel)
            return self.axes.place_pair(matrix, node.left, node.right, self.batched)
        if isinstance(node, Equality):
            if node.left == node.right:
                return np.array(True)
            return self.axes.place(np.eye(self.size, dtype=bool), [self.axes.label(node.left), self.axes.label(node.right)])
        if isinstance(node, Not):
            return ~self.table(node.child)
        if isinstance(node, And):
            return self.table(node.left) & self.table(node.right)
        if isinstance(node, Or):
            return self.table(node.left) | self.table(node.right)
        if isinstance(node, Implies):
            return ~self.table(node.left) | self.table(node.right)
        if isinstance(node, Iff):
            return self.table(node.left) == self.table(node.right)
        child = self.table(node.child)
        axis = self.axes.quantified_axis(child, node.var)
        if axis is None:
            return child
        if isinstance(node, Exists):
            return child.any(axis=axis, keepdims=True)
        if isinstance(node, Forall):
            return child.all(axis=axis, keepdims=True)
        raise TypeError(f"unsupported formula node {type(node).__name__}")

    def _index(self, formula: Formula, table: np.ndarray, asg: Mapping[str, int]) -> tuple:
        free = free_variables(formula)
        missing = free - set(asg)
        if missing:
            raise UnassignedVariableError(missing)
        for var in sorted(free):
            if not 1 <= asg[var] <= self.size:
                raise StructureError(f"element {asg[var]} assigned to {var} lies outside 1..{self.size}")
        labels = {self.axes.label(var): var for var in free}
        index = []
        for pos in range(table.ndim):
            label = table.ndim - 1 - pos
            if label == BATCH_AXIS_LABEL and self.batched:
                index.append(slice(None))
            elif label in labels and table.shape[pos] > 1:
                index.append(asg[labels[label]] - 1)
            else:
                index.append(0)
        return tuple(index)

    def holds(self, formula: Formula, asg: Mapping[str, int] | None = None) -> bool:
        """Truth of ``formula`` under ``asg`` on the single checked model."""
        if self.batched:
            raise StructureError("holds() needs a single model, use holds_all() on a batch")
        table = self.table(formula)
        return bool(table[self._index(formula, table, asg or {})])

    def holds_all(self, formula: Formula, asg: Mapping[str, int] | None = None) -> np.ndarray:
        """Truth of ``formula`` on each model of the batch, as a boolean vector."""
        table = self.table(formula)
        values = np.asarray(table[self._index(formula, table, asg or {})])
        return np.broadcast_to(values, (self.batch or 1,)).copy()

    def satisfying_elements(self, formula: Formula, var: str | None = None) -> list[int]:
        """Elements a formula with (at most) one free variable holds on."""
        free = sorted(free_variables(formula))
        var = var or (free[0] if free else "x")
        return [a for a in range(1, self.size + 1) if self.holds(formula, {var: a})]


def evaluate(formula: Formula, model: Structure | Graph, asg: Mapping[str, int] | None = None) -> bool:
    return ModelChecker.for_model(model).holds(formula, asg)


def _lookup(model: Structure | Graph):
    if isinstance(model, Graph):
        def holds(symbol, a, b):
            if symbol != EDGE:
                raise UninterpretedSymbolError(symbol)
            return model.has_edge(a, b)
    else:
        def holds(symbol, a, b):
            if symbol not in model.relations:
                raise UninterpretedSymbolError(symbol)
            return (a, b) in model.relations[symbol]
    return holds


def evaluate_naive(formula: Formula, model: Structure | Graph, asg: Mapping[str, int] | None = None) -> bool:
    """Reference evaluator: plain Tarskian recursion with no memoization."""
    asg = dict(asg or {})
    missing = free_variables(formula) - set(asg)
    if missing:
        raise UnassignedVariableError(missing)
    holds = _lookup(model)
    domain = range(1, model.size + 1)

    def walk(node: Formula, env: dict[str, int]) -> bool:
        if isinstance(node, TruthConstant):
            return node.value
        if isinstance(node, Atom):
            return holds(node.rel, env[node.left], env[node.right])
        if isinstance(node, Equality):
            return env[node.left] == env[node.right]
        if isinstance(node, Not):
            return not walk(node.child, env)
        if isinstance(node, And):
            return walk(node.left, env) and walk(node.right, env)
        if isinstance(node, Or):
            return walk(node.left, env) or walk(node.right, env)
        if isinstance(node, Implies):
            return (not walk(node.left, env)) or walk(node.right, env)
        if isinstance(node, Iff):
            return walk(node.left, env) == walk(node.right, env)
        quantifier = any if isinstance(node, Exists) else all
        return quantifier(walk(node.child, {**env, node.var: a}) for a in domain)

    return walk(formula, asg)


def is_bipartite(g: Graph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Two-colouring of ``g`` checked edge by edge, or None when an odd cycle exists.

    The first side is the colour class of vertex 1.
    """
    colour = {}
    graph = g.to_networkx()
    for start in g.vertices:
        if start in colour:
            continue
        colour[start] = 0
        for parent, child in nx.bfs_edges(graph, start):
            colour[child] = 1 - colour[parent]
    for a, b in g.edges:
        if colour[a] == colour[b]:
            return None
    first = frozenset(v for v, c in colour.items() if c == colour[1])
    return first, frozenset(g.vertices) - first
