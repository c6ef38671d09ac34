"""The sentence-to-graph-sentence compiler.

``reduce`` runs validate -> loop handling -> padding -> Φ' assembly. The
relations of the preprocessed vocabulary are numbered R_1..R_m in vocabulary
order, which is also the order ``encode_structure`` expects.
"""
import logging

from spectra import config
from spectra.errors import EligibilityError, StructureError, VocabularyError
from spectra.models.formula import (
    FALSE,
    And,
    Atom,
    Equality,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Quantifier,
    TruthConstant,
    Vocabulary,
    conjoin,
    conjuncts,
)
from spectra.models.reduction import ReductionOutput, ReductionParams, relation_role
from spectra.models.structure import Structure
from spectra.services.formula_service import node_count, validate_input, variables_used
from spectra.services.psi_service import build_P6, build_psi0, edge, role

logger = logging.getLogger(__name__)

LOOP_SUFFIX = "_loop"
PAD_PREFIX = "Pad"
MIN_RELATIONS = 3


def _pool(phi: Formula) -> tuple[str, ...]:
    pool = variables_used(phi)
    if len(pool) < 3:
        raise EligibilityError(f"at least three variables required, the sentence uses {len(pool)}")
    return pool


def _first_other(pool: tuple[str, ...], *taken: str) -> str:
    return next(v for v in pool if v not in taken)


def _map_formula(formula: Formula, leaf, quantifier=None) -> Formula:
    """Rebuild ``formula`` bottom-up, replacing each atom by ``leaf(atom)``.

    ``quantifier(node, body)`` rebuilds quantifier nodes when given.
    """
    done: dict[int, Formula] = {}
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in done:
            continue
        children = node.children()
        if not expanded and children:
            stack.append((node, True))
            stack.extend((child, False) for child in children if id(child) not in done)
            continue
        if isinstance(node, (Atom, Equality, TruthConstant)):
            done[id(node)] = leaf(node)
        elif isinstance(node, Not):
            done[id(node)] = Not(done[id(node.child)])
        elif isinstance(node, Quantifier):
            body = done[id(node.child)]
            done[id(node)] = quantifier(node, body) if quantifier else type(node)(node.var, body)
        else:
            done[id(node)] = type(node)(done[id(node.left)], done[id(node.right)])
    return done[id(formula)]


def stated_loop_free(phi: Formula) -> set[str]:
    """Relations R for which ``phi`` has a top-level conjunct of the form forall v. ~R(v,v)."""
    found = set()
    for part in conjuncts(phi):
        if isinstance(part, Forall) and isinstance(part.child, Not):
            atom = part.child.child
            if isinstance(atom, Atom) and atom.left == atom.right == part.var:
                found.add(atom.rel)
    return found


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "_"
    return name


def loop_freedom(symbols, var: str) -> list[Formula]:
    return [Forall(var, Not(Atom(symbol, var, var))) for symbol in symbols]


def eliminate_self_loops(phi: Formula, vocab: Vocabulary) -> tuple[Formula, Vocabulary, dict[str, str]]:
    """Move self-loops of every relation into a loop-marker companion relation.

    A loop (u, u) in R is represented by some pair (u, v), v != u, of the
    companion; R itself becomes irreflexive. Relations whose irreflexivity is
    already a top-level conjunct are left alone. Returns the new sentence,
    the extended vocabulary and the map from relation to companion.
    """
    pool = _pool(phi)
    skipped = stated_loop_free(phi)
    companions: dict[str, str] = {}
    taken = set(vocab)
    for symbol in vocab:
        if symbol not in skipped:
            companions[symbol] = _fresh(symbol + LOOP_SUFFIX, taken)
            taken.add(companions[symbol])

    def leaf(node: Formula) -> Formula:
        if not isinstance(node, Atom) or node.rel not in companions:
            return node
        z = _first_other(pool, node.left)
        marker = Exists(z, Atom(companions[node.rel], node.left, z))
        if node.left == node.right:
            return marker
        return Or(node, And(Equality(node.left, node.right), marker))

    rewritten = _map_formula(phi, leaf)
    var = pool[0]
    axioms = loop_freedom(companions, var) + loop_freedom(companions.values(), var)
    logger.debug("Loop companions: %s (already irreflexive: %s)", companions, sorted(skipped))
    return conjoin([rewritten] + axioms), vocab.extend(companions.values()), companions


def pad_relations(vocab: Vocabulary) -> Vocabulary:
    """Append fresh relation symbols until there are at least three."""
    symbols = list(vocab)
    k = 1
    while len(symbols) < MIN_RELATIONS:
        name = f"{PAD_PREFIX}{k}"
        if name not in symbols:
            symbols.append(name)
        k += 1
    return Vocabulary(tuple(symbols))


def padding_axioms(pads, pool: tuple[str, ...]) -> list[Formula]:
    x, y = pool[0], pool[1]
    return [Forall(x, Forall(y, Not(Atom(pad, x, y)))) for pad in pads]


def translate(phi: Formula, params: ReductionParams, vocab: Vocabulary, pool: tuple[str, ...] | None = None) -> Formula:
    """Rewrite ``phi`` over the element relations into a sentence about encoded graphs.

    Elements become the P-vertices; R_l(x, y) holds when the R_l port of x's
    block is adjacent to the S port of y's block.
    """
    pool = pool or _pool(phi)
    if len(pool) < 3:
        raise EligibilityError(f"at least three variables required, the sentence uses {len(pool)}")
    is_p = lambda v: role(params, "P", v)

    def atom(node: Formula) -> Formula:
        if isinstance(node, TruthConstant):
            return node
        if isinstance(node, Equality):
            if node.left == node.right:
                return is_p(node.left)
            return conjoin([is_p(node.left), is_p(node.right), node])
        if node.left == node.right:
            return FALSE
        if node.rel not in vocab:
            raise VocabularyError(f"relation {node.rel!r} is not in the reduced vocabulary")
        port = relation_role(vocab.index(node.rel) + 1)
        x, y = node.left, node.right
        z = _first_other(pool, x, y)
        innermost = Exists(z, conjoin([role(params, port, z), edge(x, z), edge(y, z)]))
        middle = Exists(y, conjoin([role(params, "S", y), edge(z, y), innermost]))
        outer = Exists(z, conjoin([role(params, "Q", z), edge(y, z), middle]))
        return conjoin([is_p(x), is_p(y), outer])

    def quantifier(node: Formula, body: Formula) -> Formula:
        if isinstance(node, Exists):
            return Exists(node.var, And(is_p(node.var), body))
        return Forall(node.var, Implies(is_p(node.var), body))

    return _map_formula(phi, atom, quantifier)


def preprocess(
    phi: Formula,
    vocab: Vocabulary,
    assume_loop_free: bool = False,
) -> tuple[Formula, Vocabulary, dict[str, str], tuple[str, ...]]:
    """Loop handling plus padding. Returns Φ_pre, its vocabulary, loop companions and pads."""
    report = validate_input(phi, vocab)
    if not report.eligible:
        raise EligibilityError("; ".join(
            "at least three variables required" if reason == "k < 3" else reason for reason in report.reasons
        ))
    pool = variables_used(phi)
    if assume_loop_free:
        phi_1 = conjoin([phi] + loop_freedom(vocab, pool[0]))
        vocab_1, companions = vocab, {}
    else:
        phi_1, vocab_1, companions = eliminate_self_loops(phi, vocab)
    padded = pad_relations(vocab_1)
    pads = tuple(padded.symbols[len(vocab_1):])
    phi_pre = conjoin([phi_1] + padding_axioms(pads, pool))
    return phi_pre, padded, companions, pads


def reduce(
    phi: Formula,
    vocab: Vocabulary,
    assume_loop_free: bool = False,
    scheme: str | None = None,
) -> ReductionOutput:
    """Compile ``phi`` into Φ' = Ψ0 ∧ P6 ∧ translate(Φ_pre) over the single relation E."""
    phi_pre, padded, companions, pads = preprocess(phi, vocab, assume_loop_free)
    if companions:
        logger.warning("Self-loop companions %s raise m to %d", ", ".join(companions.values()), len(padded))
    pool = variables_used(phi)
    params = ReductionParams(len(padded), scheme or config.ATTACHMENT_SCHEME, pool[:3])
    logger.info("Reducing over m=%d relations (p=%d, q=%d, scheme=%s)", params.m, params.p, params.q, params.scheme)
    phi_prime = conjoin([build_psi0(params), build_P6(params), translate(phi_pre, params, padded, pool)])
    logger.info("Reduced sentence has %d tree nodes", node_count(phi_prime))
    return ReductionOutput(
        phi_prime=phi_prime,
        params=params,
        provenance=phi_pre,
        vocabulary=padded,
        source_vocabulary=vocab,
        loop_companions=companions,
        pads=pads,
    )


def lift_structure(structure: Structure, output: ReductionOutput) -> Structure:
    """Re-express a model of the source vocabulary over the reduced vocabulary.

    Loops of a relation with a companion move to the companion as a pair
    (u, v), v != u; padding relations are empty.
    """
    missing = [symbol for symbol in output.source_vocabulary if symbol not in structure.relations]
    if missing:
        raise VocabularyError(f"structure does not interpret {', '.join(missing)}")
    relations = {}
    for symbol in output.source_vocabulary:
        pairs = structure.relations[symbol]
        companion = output.loop_companions.get(symbol)
        if companion is None:
            relations[symbol] = pairs
            continue
        loops = {a for a, b in pairs if a == b}
        if loops and structure.size < 2:
            raise StructureError(f"the loop of {symbol} on a one-element structure has no companion pair")
        relations[symbol] = frozenset((a, b) for a, b in pairs if a != b)
        relations[companion] = frozenset((a, 2 if a == 1 else 1) for a in loops)
    for pad in output.pads:
        relations[pad] = frozenset()
    return Structure(structure.size, {symbol: relations[symbol] for symbol in output.vocabulary})


def lower_structure(structure: Structure, output: ReductionOutput) -> Structure:
    """Inverse of ``lift_structure``: companion pairs become loops again, pads are dropped."""
    relations = {}
    for symbol in output.source_vocabulary:
        pairs = set(structure.relations[symbol])
        companion = output.loop_companions.get(symbol)
        if companion is not None:
            pairs |= {(a, a) for a, _ in structure.relations[companion]}
        relations[symbol] = frozenset(pairs)
    return Structure(structure.size, relations)
