"""A small DPLL solver: unit propagation over two watched literals and
chronological backtracking. Answers ``unknown`` once the decision plus
conflict budget is spent; every model it returns is re-checked first.
"""
import logging

from spectra import config
from spectra.errors import SolverError
from spectra.models.cnf import Cnf, SolveResult

logger = logging.getLogger(__name__)


class _Search:
    def __init__(self, num_vars: int, clauses: list[list[int]]):
        self.num_vars = num_vars
        self.value = [0] * (num_vars + 1)
        self.trail: list[int] = []
        self.head = 0
        # (trail length before the decision, decision literal, already flipped)
        self.levels: list[tuple[int, int, bool]] = []
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.units: list[int] = []
        self.empty = False
        for clause in clauses:
            literals = list(dict.fromkeys(clause))
            if any(-lit in literals for lit in literals):
                continue
            if not literals:
                self.empty = True
            elif len(literals) == 1:
                self.units.append(literals[0])
            else:
                index = len(self.clauses)
                self.clauses.append(literals)
                self.watches.setdefault(literals[0], []).append(index)
                self.watches.setdefault(literals[1], []).append(index)
        self.next_free = 1

    def lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def assign(self, lit: int) -> bool:
        current = self.lit_value(lit)
        if current == 1:
            return True
        if current == -1:
            return False
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)
        return True

    def propagate(self) -> bool:
        while self.head < len(self.trail):
            false_lit = -self.trail[self.head]
            self.head += 1
            watching = self.watches.get(false_lit, [])
            kept = []
            conflict = False
            for k, index in enumerate(watching):
                if conflict:
                    kept.append(index)
                    continue
                clause = self.clauses[index]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self.lit_value(clause[0]) == 1:
                    kept.append(index)
                    continue
                for j in range(2, len(clause)):
                    if self.lit_value(clause[j]) != -1:
                        clause[1], clause[j] = clause[j], clause[1]
                        self.watches.setdefault(clause[1], []).append(index)
                        break
                else:
                    kept.append(index)
                    if not self.assign(clause[0]):
                        conflict = True
            self.watches[false_lit] = kept
            if conflict:
                return False
        return True

    def undo_to(self, size: int) -> None:
        for lit in self.trail[size:]:
            self.value[abs(lit)] = 0
        del self.trail[size:]
        self.head = size
        self.next_free = 1

    def pick(self) -> int | None:
        while self.next_free <= self.num_vars and self.value[self.next_free] != 0:
            self.next_free += 1
        return self.next_free if self.next_free <= self.num_vars else None

    def backtrack(self) -> bool:
        """Flip the deepest unflipped decision; False when none is left."""
        while self.levels:
            size, lit, flipped = self.levels.pop()
            self.undo_to(size)
            if not flipped:
                self.levels.append((size, -lit, True))
                self.assign(-lit)
                return True
        return False


def solve_cnf(cnf: Cnf, budget: int | None = None) -> SolveResult:
    """Search for a model of ``cnf``; status is ``sat``, ``unsat`` or ``unknown``."""
    budget = config.SOLVER_BUDGET if budget is None else budget
    clauses = cnf.clauses
    search = _Search(cnf.num_vars, clauses)
    if search.empty:
        return SolveResult("unsat")
    for lit in search.units:
        if not search.assign(lit):
            return SolveResult("unsat")
    decisions = conflicts = 0
    while True:
        if not search.propagate():
            conflicts += 1
            if not search.backtrack():
                return SolveResult("unsat", decisions=decisions, conflicts=conflicts)
            if decisions + conflicts > budget:
                logger.info("Solver budget of %d exhausted", budget)
                return SolveResult("unknown", decisions=decisions, conflicts=conflicts)
            continue
        var = search.pick()
        if var is None:
            break
        decisions += 1
        if decisions + conflicts > budget:
            logger.info("Solver budget of %d exhausted", budget)
            return SolveResult("unknown", decisions=decisions, conflicts=conflicts)
        search.levels.append((len(search.trail), -var, False))
        search.assign(-var)
    assignment = {v: search.value[v] == 1 for v in range(1, cnf.num_vars + 1)}
    for clause in clauses:
        if not any(assignment[abs(lit)] == (lit > 0) for lit in clause):
            raise SolverError(f"solver produced an assignment violating clause {clause}")
    logger.debug("Solved with %d decisions and %d conflicts", decisions, conflicts)
    return SolveResult("sat", assignment, decisions, conflicts)
