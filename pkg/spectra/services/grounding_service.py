"""Grounding sentences over a fixed domain into CNF.

A formula is ground bottom-up into a table of literal codes laid out on the
same variable axes ``ModelChecker`` uses. A code is a DIMACS literal, or one
of the constants ``TRUE``/``FALSE`` (``FALSE == -TRUE``, so negation is
always arithmetic). Connectives fold constants away and introduce Tseitin
gate variables only for entries that stay symbolic.
"""
import logging
from itertools import combinations
from pathlib import Path
from typing import Mapping

import numpy as np

from spectra.errors import (
    IncompleteAssignmentError,
    ModelFileError,
    StructureError,
    UnassignedVariableError,
    UninterpretedSymbolError,
)
from spectra.models.cnf import AndGates, Cnf, OrGates
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
    Vocabulary,
)
from spectra.models.structure import Graph, Structure
from spectra.services.evaluation_service import VariableAxes
from spectra.services.formula_service import free_variables, is_sentence

logger = logging.getLogger(__name__)

TRUE = np.int64(2 ** 62)
FALSE = -TRUE

GRAPH = "graph"
STRUCTURE = "structure"


class _Grounder:
    def __init__(self, n: int, kind: str, vocab: Vocabulary | None):
        self.n = n
        self.kind = kind
        self.axes = VariableAxes()
        self.variable_map: dict[tuple[str, int, int], int] = {}
        self.atoms: dict[str, np.ndarray] = {}
        self.next_var = 1
        if kind == GRAPH:
            table = np.full((n, n), FALSE, dtype=np.int64)
            for a, b in combinations(range(1, n + 1), 2):
                var = self._new_atom(EDGE, a, b)
                table[a - 1, b - 1] = table[b - 1, a - 1] = var
            self.atoms[EDGE] = table
        else:
            for symbol in vocab or ():
                table = np.empty((n, n), dtype=np.int64)
                for a in range(1, n + 1):
                    for b in range(1, n + 1):
                        table[a - 1, b - 1] = self._new_atom(symbol, a, b)
                self.atoms[symbol] = table
        self.num_original = self.next_var - 1
        self.gates: list[AndGates | OrGates] = []
        self._memo: dict[Formula, np.ndarray] = {}

    def _new_atom(self, symbol: str, a: int, b: int) -> int:
        var = self.next_var
        self.variable_map[(symbol, a, b)] = var
        self.next_var += 1
        return var

    def _allocate(self, count: int) -> np.ndarray:
        out = np.arange(self.next_var, self.next_var + count, dtype=np.int64)
        self.next_var += count
        return out

    def conj(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        left, right = np.broadcast_arrays(left, right)
        a, b = left.ravel(), right.ravel()
        result = np.where(a == TRUE, b, np.where(b == TRUE, a, a))
        false = (a == FALSE) | (b == FALSE) | (a == -b)
        symbolic = ~false & (a != TRUE) & (b != TRUE) & (a != b)
        result = np.where(false, FALSE, result)
        if symbolic.any():
            pairs = np.stack([np.minimum(a[symbolic], b[symbolic]), np.maximum(a[symbolic], b[symbolic])], axis=1)
            unique, inverse = np.unique(pairs, axis=0, return_inverse=True)
            out = self._allocate(len(unique))
            self.gates.append(AndGates(out, unique[:, 0].copy(), unique[:, 1].copy()))
            result = result.copy()
            result[symbolic] = out[inverse.ravel()]
        return result.reshape(left.shape)

    def disj(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        return -self.conj(-left, -right)

    def exists(self, table: np.ndarray, axis: int) -> np.ndarray:
        moved = np.moveaxis(table, axis, -1)
        rows = moved.reshape(-1, moved.shape[-1])
        live = rows != FALSE
        counts = live.sum(axis=1)
        result = np.full(len(rows), FALSE, dtype=np.int64)
        has_true = (rows == TRUE).any(axis=1)
        single = (counts == 1) & ~has_true
        if single.any():
            result[single] = rows[single][live[single]]
        result[has_true] = TRUE
        symbolic = (counts > 1) & ~has_true
        if symbolic.any():
            block = np.where(live[symbolic], rows[symbolic], 0)
            block = np.sort(block, axis=1)
            block = np.take_along_axis(block, np.argsort(block == 0, axis=1, kind="stable"), axis=1)
            block = block[:, : int(counts[symbolic].max())]
            unique, inverse = np.unique(block, axis=0, return_inverse=True)
            out = self._allocate(len(unique))
            self.gates.append(OrGates(out, unique))
            result[symbolic] = out[inverse.ravel()]
        shape = moved.shape[:-1] + (1,)
        return np.moveaxis(result.reshape(shape), -1, axis)

    def table(self, formula: Formula) -> np.ndarray:
        cached = self._memo.get(formula)
        if cached is not None:
            return cached
        result = self._compute(formula)
        if len(free_variables(formula)) <= 2:
            self._memo[formula] = result
        return result

    def _compute(self, node: Formula) -> np.ndarray:
        if isinstance(node, TruthConstant):
            return np.array(TRUE if node.value else FALSE, dtype=np.int64)
        if isinstance(node, Atom):
            codes = self.atoms.get(node.rel)
            if codes is None:
                raise UninterpretedSymbolError(node.rel)
            return self.axes.place_pair(codes, node.left, node.right, batched=False)
        if isinstance(node, Equality):
            if node.left == node.right:
                return np.array(TRUE, dtype=np.int64)
            eye = np.where(np.eye(self.n, dtype=bool), TRUE, FALSE)
            return self.axes.place(eye, [self.axes.label(node.left), self.axes.label(node.right)])
        if isinstance(node, Not):
            return -self.table(node.child)
        if isinstance(node, And):
            return self.conj(self.table(node.left), self.table(node.right))
        if isinstance(node, Or):
            return self.disj(self.table(node.left), self.table(node.right))
        if isinstance(node, Implies):
            return self.disj(-self.table(node.left), self.table(node.right))
        if isinstance(node, Iff):
            left, right = self.table(node.left), self.table(node.right)
            return self.conj(self.disj(-left, right), self.disj(left, -right))
        child = self.table(node.child)
        axis = self.axes.quantified_axis(child, node.var)
        if axis is None or child.shape[axis] == 1:
            return child
        if isinstance(node, Exists):
            return self.exists(child, axis)
        if isinstance(node, Forall):
            return -self.exists(-child, axis)
        raise TypeError(f"unsupported formula node {type(node).__name__}")


def ground_to_cnf(formula: Formula, n: int, kind: str = GRAPH, vocab: Vocabulary | None = None) -> Cnf:
    """Expand ``formula`` over the domain {1..n} into an equisatisfiable clause set.

    With ``kind="graph"`` there is one variable per unordered vertex pair and
    E(a, a) is false; with ``kind="structure"`` one variable per ordered pair
    of every relation in ``vocab``.
    """
    if n < 1:
        raise StructureError(f"domain size must be positive, got {n}")
    if not is_sentence(formula):
        raise UnassignedVariableError(free_variables(formula))
    grounder = _Grounder(n, kind, vocab)
    top = int(np.asarray(grounder.table(formula)).reshape(-1)[0])
    if top == TRUE:
        roots = []
    elif top == FALSE:
        roots = [[]]
    else:
        roots = [[top]]
    cnf = Cnf(
        num_vars=grounder.next_var - 1,
        num_original=grounder.num_original,
        variable_map=grounder.variable_map,
        roots=roots,
        gates=grounder.gates,
    )
    logger.info("Ground at n=%d: %d atoms, %d variables, %d clauses", n, cnf.num_original, cnf.num_vars, cnf.clause_count())
    return cnf


def assignment_from_graph(cnf: Cnf, g: Graph) -> dict[int, bool]:
    return {var: g.has_edge(a, b) for (_, a, b), var in cnf.variable_map.items()}


def assignment_from_structure(cnf: Cnf, structure: Structure) -> dict[int, bool]:
    return {var: structure.holds(symbol, a, b) for (symbol, a, b), var in cnf.variable_map.items()}


def _literal_values(values: np.ndarray, literals: np.ndarray) -> np.ndarray:
    truth = values[np.abs(literals)]
    return np.where(literals < 0, ~truth, truth) & (literals != 0)


def complete_assignment(cnf: Cnf, asg: Mapping[int, bool]) -> np.ndarray:
    """Truth values of all variables (index 0 unused), auxiliaries computed gate by gate."""
    missing = [v for v in range(1, cnf.num_original + 1) if v not in asg]
    if missing:
        raise IncompleteAssignmentError(f"{len(missing)} original variables unassigned, first v{missing[0]}")
    values = np.zeros(cnf.num_vars + 1, dtype=bool)
    for var, value in asg.items():
        if 1 <= var <= cnf.num_vars:
            values[var] = bool(value)
    for block in cnf.gates:
        if isinstance(block, AndGates):
            values[block.out] = _literal_values(values, block.left) & _literal_values(values, block.right)
        else:
            values[block.out] = _literal_values(values, block.rows).any(axis=1)
    return values


def check_assignment(cnf: Cnf, asg: Mapping[int, bool]) -> bool:
    """True when ``asg``, completed over the auxiliary variables, satisfies every clause."""
    values = complete_assignment(cnf, asg)
    for clause in cnf.roots:
        if not any(values[abs(lit)] == (lit > 0) for lit in clause):
            return False
    for block in cnf.gates:
        if isinstance(block, AndGates):
            expected = _literal_values(values, block.left) & _literal_values(values, block.right)
        else:
            expected = _literal_values(values, block.rows).any(axis=1)
        if not np.array_equal(values[block.out], expected):
            return False
    return True


def format_dimacs(cnf: Cnf, comment: str | None = None) -> str:
    lines = [f"c {line}" for line in (comment or "").splitlines()]
    lines.append(f"p cnf {cnf.num_vars} {cnf.clause_count()}")
    lines.extend(" ".join(str(lit) for lit in clause + [0]) for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def format_variable_map(cnf: Cnf) -> str:
    names = cnf.atom_names()
    return "".join(f"v{var} = {names[var]}\n" for var in sorted(names))


def parse_dimacs(text: str) -> Cnf:
    header = None
    clauses, current = [], []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ModelFileError(f"line {number}: malformed DIMACS header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ModelFileError(f"line {number}: clause before the 'p cnf' header")
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ModelFileError("missing 'p cnf' header")
    if current:
        clauses.append(current)
    if len(clauses) != header[1]:
        raise ModelFileError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return Cnf.from_clauses(header[0], clauses)


def write_dimacs(path: str | Path, cnf: Cnf, comment: str | None = None) -> Path:
    """Write ``path`` and the sidecar ``<path>.map``; returns the sidecar path."""
    path = Path(path)
    path.write_text(format_dimacs(cnf, comment), encoding="utf-8")
    sidecar = path.with_name(path.name + ".map")
    sidecar.write_text(format_variable_map(cnf), encoding="utf-8")
    logger.info("Wrote %s and %s", path, sidecar)
    return sidecar
