"""Printing and syntactic analysis of formulas.

Traversals work on the formula DAG: shared subformulas are visited once,
which keeps analysis of reduced sentences linear in their distinct nodes.
"""
import hashlib
import weakref

from spectra.models.formula import (
    And,
    Atom,
    Equality,
    Exists,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Quantifier,
    TruthConstant,
    ValidationReport,
    Vocabulary,
)
from spectra.services.parser_service import relation_symbols

IFF, IMPLIES, OR, AND, UNARY = 1, 2, 3, 4, 5

# (precedence, minimum left precedence, minimum right precedence, operator)
_BINARY = {
    Iff: (IFF, IFF, IMPLIES, "<->"),
    Implies: (IMPLIES, OR, IMPLIES, "->"),
    Or: (OR, OR, AND, "|"),
    And: (AND, AND, UNARY, "&"),
}


def _precedence(node: Formula) -> int:
    entry = _BINARY.get(type(node))
    return entry[0] if entry else UNARY


def print_formula(formula: Formula) -> str:
    """Render ``formula`` in the surface syntax; parsing the result gives back an equal formula."""
    rendered: dict[int, str] = {}
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in rendered:
            continue
        children = node.children()
        if not expanded and children:
            stack.append((node, True))
            stack.extend((child, False) for child in children if id(child) not in rendered)
            continue
        rendered[id(node)] = _render(node, rendered)
    return rendered[id(formula)]


def _wrap(child: Formula, minimum: int, rendered: dict[int, str]) -> str:
    text = rendered[id(child)]
    return f"({text})" if _precedence(child) < minimum else text


def _render(node: Formula, rendered: dict[int, str]) -> str:
    if isinstance(node, TruthConstant):
        return "true" if node.value else "false"
    if isinstance(node, Atom):
        return f"{node.rel}({node.left},{node.right})"
    if isinstance(node, Equality):
        return f"{node.left} = {node.right}"
    if isinstance(node, Not):
        inner = rendered[id(node.child)]
        if isinstance(node.child, Equality) or _precedence(node.child) < UNARY:
            inner = f"({inner})"
        return "~" + inner
    if isinstance(node, Quantifier):
        keyword = "exists" if isinstance(node, Exists) else "forall"
        return f"{keyword} {node.var}. {_wrap(node.child, UNARY, rendered)}"
    _, left_min, right_min, op = _BINARY[type(node)]
    return f"{_wrap(node.left, left_min, rendered)} {op} {_wrap(node.right, right_min, rendered)}"


def variables_used(formula: Formula) -> tuple[str, ...]:
    """Every variable name occurring in ``formula``, free or bound, in first-occurrence order."""
    order: dict[str, None] = {}
    seen: set[int] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, (Atom, Equality)):
            order.setdefault(node.left)
            order.setdefault(node.right)
        elif isinstance(node, Quantifier):
            order.setdefault(node.var)
        stack.extend(reversed(node.children()))
    return tuple(order)


_free_cache: "weakref.WeakKeyDictionary[Formula, frozenset[str]]" = weakref.WeakKeyDictionary()


def free_variables(formula: Formula) -> frozenset[str]:
    cached = _free_cache.get(formula)
    if cached is not None:
        return cached
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if node in _free_cache:
            continue
        children = node.children()
        if not expanded and children:
            stack.append((node, True))
            stack.extend((child, False) for child in children if child not in _free_cache)
            continue
        if isinstance(node, (Atom, Equality)):
            free = frozenset((node.left, node.right))
        elif isinstance(node, Quantifier):
            free = _free_cache[node.child] - {node.var}
        else:
            free = frozenset().union(*(_free_cache[child] for child in children))
        _free_cache[node] = free
    return _free_cache[formula]


def is_sentence(formula: Formula) -> bool:
    return not free_variables(formula)


def _fold(formula: Formula, combine) -> int:
    """Bottom-up fold over distinct nodes; ``combine(node, child_values)``."""
    values: dict[int, int] = {}
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in values:
            continue
        children = node.children()
        if not expanded and children:
            stack.append((node, True))
            stack.extend((child, False) for child in children if id(child) not in values)
            continue
        values[id(node)] = combine(node, [values[id(c)] for c in children])
    return values[id(formula)]


def node_count(formula: Formula) -> int:
    """Size of the formula as a tree (shared subformulas counted at every use)."""
    return _fold(formula, lambda node, sizes: 1 + sum(sizes))


def dag_size(formula: Formula) -> int:
    """Number of distinct subformula objects."""
    return len(_distinct_nodes(formula))


def _distinct_nodes(formula: Formula) -> set[int]:
    seen, stack = set(), [formula]
    while stack:
        node = stack.pop()
        if id(node) not in seen:
            seen.add(id(node))
            stack.extend(node.children())
    return seen


def quantifier_depth(formula: Formula) -> int:
    def combine(node, depths):
        deepest = max(depths, default=0)
        return deepest + 1 if isinstance(node, Quantifier) else deepest

    return _fold(formula, combine)


def formula_digest(formula: Formula) -> str:
    return hashlib.sha256(print_formula(formula).encode("utf-8")).hexdigest()


def validate_input(formula: Formula, vocab: Vocabulary) -> ValidationReport:
    free = free_variables(formula)
    used = variables_used(formula)
    unknown = tuple(sorted(relation_symbols(formula) - set(vocab.symbols)))
    return ValidationReport(
        is_sentence=not free,
        variables=used,
        free_variables=tuple(v for v in used if v in free),
        relation_count=len(vocab),
        unknown_symbols=unknown,
    )
