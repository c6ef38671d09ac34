"""Formula surface syntax: lark grammar, parser and the ``.fo`` document format."""
import logging
import re
from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from spectra.errors import ArityError, FormulaSyntaxError, ModelFileError, UnknownSymbolError
from spectra.models.formula import (
    FALSE,
    TRUE,
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
    Vocabulary,
    intern,
)

logger = logging.getLogger(__name__)

FORMULA_GRAMMAR = r"""
    ?start: iff

    ?iff: implies
        | iff "<->" implies -> iff_node

    ?implies: disj
        | disj "->" implies -> implies_node

    ?disj: conj
        | disj "|" conj -> or_node

    ?conj: unary
        | conj "&" unary -> and_node

    ?unary: "~" unary -> not_node
        | "exists" NAME "." unary -> exists_node
        | "forall" NAME "." unary -> forall_node
        | NAME "(" NAME ("," NAME)* ")" -> relation_atom
        | NAME "=" NAME -> equality_atom
        | "true" -> true_const
        | "false" -> false_const
        | "(" iff ")"

    NAME: /[A-Za-z][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Builds hash-consed formula nodes while the LALR parser reduces."""

    def iff_node(self, left, right):
        return intern(Iff(left, right))

    def implies_node(self, left, right):
        return intern(Implies(left, right))

    def or_node(self, left, right):
        return intern(Or(left, right))

    def and_node(self, left, right):
        return intern(And(left, right))

    def not_node(self, child):
        return intern(Not(child))

    def exists_node(self, var, child):
        return intern(Exists(str(var), child))

    def forall_node(self, var, child):
        return intern(Forall(str(var), child))

    def relation_atom(self, rel, *args):
        if len(args) != 2:
            raise ArityError(str(rel), len(args))
        return intern(Atom(str(rel), str(args[0]), str(args[1])))

    def equality_atom(self, left, right):
        return intern(Equality(str(left), str(right)))

    def true_const(self):
        return TRUE

    def false_const(self):
        return FALSE


@lru_cache(maxsize=None)
def _parser() -> Lark:
    return Lark(FORMULA_GRAMMAR, parser="lalr", transformer=FormulaBuilder())


def relation_symbols(formula: Formula) -> set[str]:
    seen, symbols, stack = set(), set(), [formula]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Atom):
            symbols.add(node.rel)
        stack.extend(node.children())
    return symbols


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    """Parse ``text``; when ``vocab`` is given every relation symbol must belong to it."""
    try:
        formula = _parser().parse(text)
    except VisitError as e:
        raise e.orig_exc from None
    except UnexpectedEOF:
        raise FormulaSyntaxError("unexpected end of input") from None
    except UnexpectedInput as e:
        token = getattr(e, "token", None)
        if token is not None and token.type == "$END":
            raise FormulaSyntaxError("unexpected end of input") from None
        if token is not None:
            found = f"unexpected {str(token)!r}"
        else:
            found = f"unexpected character {getattr(e, 'char', '?')!r}"
        raise FormulaSyntaxError(found, e.line, e.column) from None
    if vocab is not None:
        unknown = sorted(relation_symbols(formula) - set(vocab.symbols))
        if unknown:
            raise UnknownSymbolError(unknown[0])
    return formula


_VOCAB_HEADER = re.compile(r"^\s*vocab\b(.*)$")


def parse_document(text: str) -> tuple[Formula, Vocabulary]:
    """Read a ``.fo`` document: a ``vocab R1 R2 ...`` header line followed by one sentence."""
    lines = text.splitlines()
    for number, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _VOCAB_HEADER.match(line)
        if not match:
            raise ModelFileError(f"line {number + 1}: expected a 'vocab' header before the sentence")
        vocab = Vocabulary(tuple(match.group(1).split("#", 1)[0].split()))
        # blank lines keep parser positions aligned with the file
        body = "\n" * (number + 1) + "\n".join(lines[number + 1:])
        formula = parse_formula(body, vocab)
        logger.debug("Parsed sentence over %s", list(vocab))
        return formula, vocab
    raise ModelFileError("empty formula document")
