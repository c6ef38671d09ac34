from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np


@dataclass(frozen=True, eq=False)
class AndGates:
    """Auxiliary variables defined as ``out <-> left & right``."""

    out: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def clauses(self):
        for g, a, b in zip(self.out.tolist(), self.left.tolist(), self.right.tolist()):
            yield [-g, a]
            yield [-g, b]
            yield [g, -a, -b]

    def clause_count(self) -> int:
        return 3 * len(self.out)


@dataclass(frozen=True, eq=False)
class OrGates:
    """Auxiliary variables defined as the disjunction of a row of literals (0 pads a row)."""

    out: np.ndarray
    rows: np.ndarray

    def clauses(self):
        for g, row in zip(self.out.tolist(), self.rows.tolist()):
            literals = [lit for lit in row if lit]
            yield [-g] + literals
            for lit in literals:
                yield [g, -lit]

    def clause_count(self) -> int:
        return len(self.out) + int(np.count_nonzero(self.rows))


@dataclass
class Cnf:
    """Propositional clause set produced by grounding.

    Variables ``1..num_original`` stand for ground atoms (see ``variable_map``);
    the rest are auxiliary gate outputs, defined in creation order by ``gates``.
    ``roots`` holds the plain clauses that are not gate definitions.
    """

    num_vars: int
    num_original: int
    variable_map: Mapping[tuple[str, int, int], int]
    roots: list[list[int]] = field(default_factory=list)
    gates: list[AndGates | OrGates] = field(default_factory=list)

    @property
    def clauses(self) -> list[list[int]]:
        result = [list(clause) for clause in self.roots]
        for block in self.gates:
            result.extend(block.clauses())
        return result

    def clause_count(self) -> int:
        return len(self.roots) + sum(block.clause_count() for block in self.gates)

    def atom_names(self) -> dict[int, str]:
        return {var: f"{symbol}({a},{b})" for (symbol, a, b), var in self.variable_map.items()}

    @classmethod
    def from_clauses(cls, num_vars: int, clauses, variable_map=None) -> Cnf:
        """A plain clause set: every variable counts as original."""
        return cls(num_vars=num_vars, num_original=num_vars,
                   variable_map=dict(variable_map or {}), roots=[list(c) for c in clauses])


@dataclass(frozen=True)
class SolveResult:
    status: str
    assignment: Mapping[int, bool] | None = None
    decisions: int = 0
    conflicts: int = 0

    @property
    def satisfiable(self) -> bool | None:
        if self.status == "sat":
            return True
        if self.status == "unsat":
            return False
        return None
