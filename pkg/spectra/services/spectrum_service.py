"""Model existence per size and spectra, by brute force or by grounding."""
import logging
from typing import Iterator

import numpy as np

from spectra import config
from spectra.errors import InfeasibleSearchError, ParamsError, StructureError
from spectra.models.formula import EDGE, Formula, Vocabulary
from spectra.models.spectrum import AUTO, BRUTE_FORCE, GROUNDING, METHODS, SpectrumResult
from spectra.models.structure import Graph, Structure
from spectra.services.enumeration_service import (
    graph_atom_count,
    graph_batch,
    graph_from_code,
    structure_atom_count,
    structure_batch,
    structure_from_code,
)
from spectra.services.evaluation_service import ModelChecker
from spectra.services.formula_service import formula_digest
from spectra.services.grounding_service import GRAPH, STRUCTURE, ground_to_cnf
from spectra.services.parser_service import relation_symbols
from spectra.services.solver_service import solve_cnf

logger = logging.getLogger(__name__)

# upper bound on batch * n**3 booleans per evaluated table
BATCH_CELLS = 4_000_000


class SearchSpace:
    """The candidate models of one size: graphs, or structures over a vocabulary."""

    def __init__(self, formula: Formula, n: int, vocab: Vocabulary | None = None, loop_free: bool = False):
        if n < 1:
            raise StructureError(f"domain size must be positive, got {n}")
        self.n = n
        self.loop_free = loop_free
        if vocab is None:
            symbols = relation_symbols(formula)
            if symbols <= {EDGE}:
                self.kind, self.vocab = GRAPH, None
            else:
                self.kind, self.vocab = STRUCTURE, Vocabulary(tuple(sorted(symbols)))
        else:
            self.kind, self.vocab = STRUCTURE, vocab

    @property
    def atoms(self) -> int:
        if self.kind == GRAPH:
            return graph_atom_count(self.n)
        return structure_atom_count(self.vocab, self.n, self.loop_free)

    def batch(self, start: int, stop: int) -> dict[str, np.ndarray]:
        if self.kind == GRAPH:
            return graph_batch(self.n, start, stop)
        return structure_batch(self.vocab, self.n, self.loop_free, start, stop)

    def model(self, code: int) -> Graph | Structure:
        if self.kind == GRAPH:
            return graph_from_code(self.n, code)
        return structure_from_code(self.vocab, self.n, self.loop_free, code)


def _check_feasible(space: SearchSpace, force: bool) -> None:
    if space.atoms > config.BRUTE_FORCE_MAX_ATOMS and not force:
        raise InfeasibleSearchError(
            f"brute force at size {space.n} ranges over {space.atoms} ground atoms, "
            f"above the limit of {config.BRUTE_FORCE_MAX_ATOMS}; pass force to override"
        )


def _chunks(formula: Formula, space: SearchSpace, force: bool) -> Iterator[tuple[int, np.ndarray]]:
    _check_feasible(space, force)
    total = 2 ** space.atoms
    chunk = max(1, min(total, BATCH_CELLS // space.n ** 3))
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        checker = ModelChecker(space.batch(start, stop), space.n, batch=stop - start)
        yield start, checker.holds_all(formula)


def model_codes(formula: Formula, space: SearchSpace, force: bool = False) -> Iterator[int]:
    """Candidate numbers of all models of ``formula`` in ``space``, ascending."""
    for start, truth in _chunks(formula, space, force):
        for offset in np.flatnonzero(truth):
            yield start + int(offset)


def truth_table(formula: Formula, space: SearchSpace, force: bool = False) -> np.ndarray:
    """Truth of ``formula`` on every candidate of ``space``, indexed by candidate number."""
    return np.concatenate([truth for _, truth in _chunks(formula, space, force)])


def iter_models(
    formula: Formula,
    n: int,
    vocab: Vocabulary | None = None,
    loop_free: bool = False,
    force: bool = False,
) -> Iterator[Graph | Structure]:
    space = SearchSpace(formula, n, vocab, loop_free)
    for code in model_codes(formula, space, force):
        yield space.model(code)


def _brute_force(formula: Formula, space: SearchSpace, force: bool) -> bool:
    return next(model_codes(formula, space, force), None) is not None


def _ground_and_solve(formula: Formula, space: SearchSpace, budget: int | None) -> bool | None:
    cnf = ground_to_cnf(formula, space.n, space.kind, space.vocab)
    if space.kind == STRUCTURE and space.loop_free:
        cnf.roots.extend([-cnf.variable_map[(symbol, a, a)]] for symbol in space.vocab for a in range(1, space.n + 1))
    return solve_cnf(cnf, budget).satisfiable


def _choose(method: str, space: SearchSpace) -> str:
    if method not in METHODS:
        raise ParamsError(f"unknown method {method!r}, expected one of {METHODS}")
    if method == AUTO:
        return BRUTE_FORCE if space.atoms <= config.BRUTE_FORCE_MAX_ATOMS else GROUNDING
    return method


def _decide(formula: Formula, space: SearchSpace, method: str, budget: int | None, force: bool) -> tuple[bool | None, str]:
    chosen = _choose(method, space)
    if chosen == BRUTE_FORCE:
        return _brute_force(formula, space, force), chosen
    return _ground_and_solve(formula, space, budget), chosen


def has_model(
    formula: Formula,
    n: int,
    method: str = AUTO,
    budget: int | None = None,
    vocab: Vocabulary | None = None,
    loop_free: bool = False,
    force: bool = False,
) -> bool | None:
    """Whether ``formula`` has a model of size ``n``; None when the solver ran out of budget."""
    answer, _ = _decide(formula, SearchSpace(formula, n, vocab, loop_free), method, budget, force)
    return answer


def spectrum(
    formula: Formula,
    max_size: int,
    method: str = AUTO,
    budget: int | None = None,
    vocab: Vocabulary | None = None,
    loop_free: bool = False,
    force: bool = False,
) -> SpectrumResult:
    if max_size < 1:
        raise StructureError(f"the largest searched size must be positive, got {max_size}")
    members, unknown, methods = [], [], {}
    for n in range(1, max_size + 1):
        answer, chosen = _decide(formula, SearchSpace(formula, n, vocab, loop_free), method, budget, force)
        methods[n] = chosen
        if answer is None:
            unknown.append(n)
        elif answer:
            members.append(n)
        logger.debug("Size %d: %s by %s", n, answer, chosen)
    logger.info("Spectrum up to %d: %s", max_size, members)
    return SpectrumResult(
        formula_digest=formula_digest(formula),
        max_size=max_size,
        members=tuple(members),
        methods=methods,
        unknown=tuple(unknown),
    )
