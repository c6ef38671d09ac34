import random
import sys
from pathlib import Path

import pytest

# Add the project root to the path
sys.path.insert(0, str(Path(__file__).parent.parent))

from spectra import config
from spectra.models.formula import (
    And,
    Atom,
    Equality,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Vocabulary,
)
from spectra.models.reduction import ReductionParams
from spectra.models.structure import Graph, Structure
from spectra.services.formula_service import free_variables
from spectra.services.parser_service import parse_document, parse_formula

VOCAB = Vocabulary(("R1", "R2", "R3"))

# three-variable sentences over R1 R2 R3
CORPUS = {
    "tautology": "forall x. forall y. forall z. (R1(x, y) -> (R1(x, y) | x = z))",
    "exactly-two": "exists x. exists y. (~x = y & forall z. (z = x | z = y))",
    "function": "forall x. exists y. (R1(x, y) & forall z. (R1(x, z) -> z = y))",
    "chain": "exists x. exists y. exists z. (R1(x, y) & R2(y, z) & R3(z, x))",
    "symmetric": "(forall x. forall y. (R2(x, y) -> R2(y, x))) & exists z. exists x. R2(z, x)",
    "transitive": "forall x. forall y. forall z. ((R1(x, y) & R1(y, z)) -> R1(x, z))",
}

GRAPH_CORPUS = {
    "triangle": "exists x. exists y. exists z. (E(x, y) & E(y, z) & E(x, z))",
    "no-isolated": "forall x. exists y. E(x, y)",
    "two-steps": "forall x. forall y. (E(x, y) -> exists z. (E(x, z) & E(z, y)))",
    "dominating": "exists x. forall y. (x = y | E(x, y))",
    "clique": "forall x. forall y. (x = y | E(x, y))",
}


@pytest.fixture
def params():
    return ReductionParams(3, "parity")


@pytest.fixture
def rng():
    return random.Random(config.DEFAULT_SEED)


@pytest.fixture
def corpus():
    """Parsed corpus sentences keyed by name, each with the vocabulary R1 R2 R3."""
    return {name: parse_document(f"vocab R1 R2 R3\n{text}\n") for name, text in CORPUS.items()}


@pytest.fixture
def graph_corpus():
    return {name: parse_formula(text) for name, text in GRAPH_CORPUS.items()}


def random_structure(rng: random.Random, vocab, n: int, density: float = 0.3, loop_free: bool = True) -> Structure:
    relations = {}
    for symbol in vocab:
        relations[symbol] = frozenset(
            (a, b)
            for a in range(1, n + 1)
            for b in range(1, n + 1)
            if not (loop_free and a == b) and rng.random() < density
        )
    return Structure(n, relations)


def random_graph(rng: random.Random, n: int, density: float = 0.4) -> Graph:
    edges = frozenset(
        (a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < density
    )
    return Graph(n, edges)


def random_formula(rng: random.Random, depth: int, symbols=("E",), variables=("x", "y", "z")):
    """A random formula of quantifier and connective depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.2:
        a, b = rng.choice(variables), rng.choice(variables)
        if rng.random() < 0.25:
            return Equality(a, b)
        return Atom(rng.choice(symbols), a, b)
    kind = rng.choice(["not", "and", "or", "implies", "iff", "exists", "forall"])
    if kind == "not":
        return Not(random_formula(rng, depth - 1, symbols, variables))
    if kind in ("exists", "forall"):
        quantifier = Exists if kind == "exists" else Forall
        return quantifier(rng.choice(variables), random_formula(rng, depth - 1, symbols, variables))
    connective = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
    return connective(
        random_formula(rng, depth - 1, symbols, variables),
        random_formula(rng, depth - 1, symbols, variables),
    )


def random_sentence(rng: random.Random, depth: int, symbols=("E",)):
    formula = random_formula(rng, depth, symbols)
    for var in sorted(free_variables(formula)):
        formula = (Exists if rng.random() < 0.5 else Forall)(var, formula)
    return formula
