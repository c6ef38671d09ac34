"""First-order formulas over binary relation symbols.

Nodes are immutable and cache their structural hash, so large shared
formulas can be used as dictionary keys without rehashing whole subtrees.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Iterator

from spectra.errors import VocabularyError

EDGE = "E"


@dataclass(frozen=True, eq=False)
class Formula:
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))

    def _key(self) -> tuple:
        return tuple(getattr(self, name) for name in self.__dataclass_fields__)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def children(self) -> tuple[Formula, ...]:
        return ()


@dataclass(frozen=True, eq=False)
class TruthConstant(Formula):
    value: bool


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    rel: str
    left: str
    right: str


@dataclass(frozen=True, eq=False)
class Equality(Formula):
    left: str
    right: str


@dataclass(frozen=True, eq=False)
class Not(Formula):
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=False)
class BinaryConnective(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class And(BinaryConnective):
    pass


@dataclass(frozen=True, eq=False)
class Or(BinaryConnective):
    pass


@dataclass(frozen=True, eq=False)
class Implies(BinaryConnective):
    pass


@dataclass(frozen=True, eq=False)
class Iff(BinaryConnective):
    pass


@dataclass(frozen=True, eq=False)
class Quantifier(Formula):
    var: str
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=False)
class Exists(Quantifier):
    pass


@dataclass(frozen=True, eq=False)
class Forall(Quantifier):
    pass


TRUE = TruthConstant(True)
FALSE = TruthConstant(False)

_interned: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()


def intern(node: Formula) -> Formula:
    """Return the canonical instance structurally equal to ``node``."""
    key = (type(node),) + node._key()
    existing = _interned.get(key)
    if existing is not None:
        return existing
    _interned[key] = node
    return node


def conjoin(parts) -> Formula:
    """Balanced conjunction; the empty conjunction is ``true``."""
    parts = list(parts)
    if not parts:
        return TRUE
    while len(parts) > 1:
        paired = [And(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            paired.append(parts[-1])
        parts = paired
    return parts[0]


def disjoin(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    while len(parts) > 1:
        paired = [Or(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            paired.append(parts[-1])
        parts = paired
    return parts[0]


def conjuncts(formula: Formula) -> Iterator[Formula]:
    """Top-level conjuncts, left to right."""
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, And):
            stack.append(node.right)
            stack.append(node.left)
        else:
            yield node


@dataclass(frozen=True)
class Vocabulary:
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        for symbol in self.symbols:
            if not symbol or not isinstance(symbol, str):
                raise VocabularyError(f"relation symbol names must be nonempty strings, got {symbol!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise VocabularyError(f"duplicate relation symbols in {list(self.symbols)}")

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def extend(self, extra) -> Vocabulary:
        return Vocabulary(self.symbols + tuple(extra))

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)


GRAPH_VOCABULARY = Vocabulary((EDGE,))


@dataclass(frozen=True)
class ValidationReport:
    is_sentence: bool
    variables: tuple[str, ...]
    free_variables: tuple[str, ...]
    relation_count: int
    unknown_symbols: tuple[str, ...] = field(default=())

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def reasons(self) -> tuple[str, ...]:
        reasons = []
        if not self.is_sentence:
            reasons.append("not a sentence: free variables " + ", ".join(self.free_variables))
        if self.variable_count < 3:
            reasons.append("k < 3")
        if self.unknown_symbols:
            reasons.append("unknown relation symbols " + ", ".join(self.unknown_symbols))
        return tuple(reasons)

    @property
    def eligible(self) -> bool:
        return not self.reasons
