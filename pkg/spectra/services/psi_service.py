"""Graph-language formulas that pin down the shape of an encoded graph.

Every builder takes the names of its free variables and quantifies only over
the three work variables of ``params``; a closed subformula may rebind a
variable that is free around it. Builders are cached per argument tuple, so
each distinct subformula exists once and large sentences stay DAG-shaped.

Vocabulary of the comments below: a *pendant* has degree one, a *line*
vertex has degree other than one and exactly one pendant neighbour, and an
*end* is a line vertex with exactly one line neighbour.
"""
from functools import cache

from spectra.errors import ParamsError, UndefinedPairError, UnknownRoleError
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
    conjoin,
    disjoin,
)
from spectra.models.reduction import ReductionParams, relation_role


def edge(a: str, b: str) -> Formula:
    return Atom(EDGE, a, b)


def _spares(params: ReductionParams, *taken: str) -> tuple[str, ...]:
    return tuple(v for v in params.work_vars if v not in taken)


def _check_role(params: ReductionParams, role: str) -> None:
    if role not in params.roles:
        raise UnknownRoleError(role)


@cache
def deg1(params: ReductionParams, v: str) -> Formula:
    s1, s2 = _spares(params, v)[:2]
    return Exists(s1, And(edge(v, s1), Forall(s2, Implies(edge(v, s2), Equality(s2, s1)))))


def _exactly_one_neighbour(params: ReductionParams, v: str, kind) -> Formula:
    """``v`` has exactly one neighbour satisfying ``kind(params, var)``."""
    s1, s2 = _spares(params, v)[:2]
    unique = Forall(s2, Implies(And(edge(v, s2), kind(params, s2)), Equality(s2, s1)))
    return Exists(s1, conjoin([edge(v, s1), kind(params, s1), unique]))


@cache
def in_line(params: ReductionParams, v: str) -> Formula:
    return And(Not(deg1(params, v)), _exactly_one_neighbour(params, v, deg1))


@cache
def end(params: ReductionParams, v: str) -> Formula:
    return And(in_line(params, v), _exactly_one_neighbour(params, v, in_line))


@cache
def at_most(params: ReductionParams, n: int, a: str, b: str) -> Formula:
    """``a`` and ``b`` are line vertices joined inside the line by a walk of length at most ``n``."""
    if n == 0:
        return And(in_line(params, a), Equality(a, b))
    (c,) = _spares(params, a, b)[:1]
    step = And(Or(Equality(a, c), edge(a, c)), at_most(params, n - 1, c, b))
    return And(in_line(params, a), Exists(c, step))


@cache
def exactly(params: ReductionParams, n: int, a: str, b: str) -> Formula:
    if n == 0:
        return at_most(params, 0, a, b)
    return And(at_most(params, n, a, b), Not(at_most(params, n - 1, a, b)))


def build_base_predicates(params: ReductionParams) -> dict[str, Formula]:
    x = params.work_vars[0]
    return {"deg1": deg1(params, x), "in_line": in_line(params, x), "end": end(params, x)}


def build_dist(params: ReductionParams, n: int, mode: str = "exactly") -> Formula:
    if not 0 <= n <= 4 * params.m:
        raise ParamsError(f"line distance {n} lies outside 0..{4 * params.m}")
    x, y, _ = params.work_vars
    if mode == "at-most":
        return at_most(params, n, x, y)
    if mode == "exactly":
        return exactly(params, n, x, y)
    raise ParamsError(f"unknown distance mode {mode!r}, expected 'at-most' or 'exactly'")


def build_structural_axioms(params: ReductionParams) -> dict[str, Formula]:
    x, y, z = params.work_vars
    span = 4 * params.m
    p1 = Forall(x, Implies(deg1(params, x), Exists(y, And(edge(x, y), in_line(params, y)))))
    p2 = Exists(x, Exists(y, conjoin([
        Not(Equality(x, y)),
        end(params, x),
        end(params, y),
        Forall(z, Implies(end(params, z), Or(Equality(z, x), Equality(z, y)))),
    ])))
    within = Forall(x, Forall(y, Implies(
        And(in_line(params, x), in_line(params, y)),
        at_most(params, span, x, y),
    )))
    layers = conjoin(
        Forall(y, Implies(exactly(params, n, x, y), Forall(z, Implies(exactly(params, n, x, z), Equality(z, y)))))
        for n in range(span + 1)
    )
    p3 = And(within, Exists(x, And(end(params, x), layers)))
    p4 = Exists(x, Exists(y, conjoin([
        Not(Equality(x, y)),
        end(params, x),
        end(params, y),
        exactly(params, span, x, y),
    ])))
    return {"P1": p1, "P2": p2, "P3": p3, "P4": p4}


@cache
def role(params: ReductionParams, alpha: str, v: str) -> Formula:
    """``v`` hangs off the line exactly at distance d(alpha) from one of its ends."""
    _check_role(params, alpha)
    s1, s2 = _spares(params, v)[:2]
    d = params.distance(alpha)
    touches_line = Exists(s1, And(edge(v, s1), in_line(params, s1)))
    measured = Exists(s1, And(end(params, s1), Forall(s2, Implies(
        in_line(params, s2),
        Iff(edge(v, s2), exactly(params, d, s1, s2)),
    ))))
    return conjoin([Not(deg1(params, v)), Not(in_line(params, v)), touches_line, measured])


def middle_role(alpha: str, beta: str) -> str:
    if {alpha, beta} == {"P", "S"}:
        return "Q"
    if (alpha.startswith("R") and beta == "Q") or (alpha == "Q" and beta.startswith("R")):
        return "P"
    if alpha.startswith("R") and beta.startswith("R") and alpha != beta:
        return "P"
    raise UndefinedPairError(alpha, beta)


@cache
def pair(params: ReductionParams, alpha: str, beta: str, a: str, b: str) -> Formula:
    _check_role(params, alpha)
    _check_role(params, beta)
    gamma = middle_role(alpha, beta)
    (c,) = _spares(params, a, b)[:1]
    bridge = Exists(c, conjoin([role(params, gamma, c), edge(a, c), edge(c, b)]))
    return conjoin([role(params, alpha, a), role(params, beta, b), bridge])


def build_role(params: ReductionParams, alpha: str) -> Formula:
    return role(params, alpha, params.work_vars[0])


def build_pair(params: ReductionParams, alpha: str, beta: str) -> Formula:
    x, y, _ = params.work_vars
    return pair(params, alpha, beta, x, y)


def _unique_neighbour(params: ReductionParams, x: str, beta: str) -> Formula:
    y, z = _spares(params, x)[:2]
    holds_at = lambda v: And(edge(x, v), role(params, beta, v))
    return And(
        Exists(y, holds_at(y)),
        Forall(y, Implies(holds_at(y), Forall(z, Implies(holds_at(z), Equality(z, y))))),
    )


def _unique_partner(params: ReductionParams, x: str, alpha: str, beta: str) -> Formula:
    """Exactly one y pairs with ``x`` through a middle vertex, and it is not adjacent to ``x``."""
    y, z = _spares(params, x)[:2]
    return And(
        Exists(y, pair(params, alpha, beta, x, y)),
        Forall(y, Implies(pair(params, alpha, beta, x, y), And(
            Not(edge(x, y)),
            Forall(z, Implies(pair(params, alpha, beta, x, z), Equality(z, y))),
        ))),
    )


def _neighbours_apart(params: ReductionParams, x: str, beta: str, delta: str) -> Formula:
    """Any ``beta`` neighbour and any ``delta`` neighbour of ``x`` are not adjacent."""
    y, z = _spares(params, x)[:2]
    return Forall(y, Implies(And(edge(x, y), role(params, beta, y)), Forall(z, Implies(
        And(edge(x, z), role(params, delta, z)),
        Not(edge(y, z)),
    ))))


def _not_beyond(params: ReductionParams, x: str, beta: str, alpha: str, delta: str) -> Formula:
    """``x`` is not adjacent to the ``delta`` partner of any of its ``beta`` neighbours."""
    y, z = _spares(params, x)[:2]
    return Forall(y, Implies(And(role(params, beta, y), edge(x, y)), Forall(z, Implies(
        pair(params, alpha, delta, y, z),
        Not(edge(x, z)),
    ))))


def p5_groups(params: ReductionParams) -> dict[str, Formula]:
    """One sentence per role: its block conditions, required of every vertex with that role."""
    x = params.work_vars[0]
    relations = [relation_role(l) for l in range(1, params.m + 1)]
    p_group = [_unique_neighbour(params, x, "Q")]
    p_group += [_unique_neighbour(params, x, r) for r in relations]
    p_group.append(_unique_partner(params, x, "P", "S"))
    p_group += [_neighbours_apart(params, x, "Q", r) for r in relations]
    p_group += [
        _neighbours_apart(params, x, r, relations[j])
        for i, r in enumerate(relations)
        for j in range(i + 1, len(relations))
    ]
    q_group = [_unique_neighbour(params, x, "P"), _unique_neighbour(params, x, "S")]
    q_group += [_unique_partner(params, x, "Q", r) for r in relations]
    s_group = [_unique_neighbour(params, x, "Q"), _unique_partner(params, x, "S", "P")]
    s_group += [_not_beyond(params, x, "Q", "Q", r) for r in relations]
    groups = {
        "P": Forall(x, Implies(role(params, "P", x), conjoin(p_group))),
        "Q": Forall(x, Implies(role(params, "Q", x), conjoin(q_group))),
        "S": Forall(x, Implies(role(params, "S", x), conjoin(s_group))),
    }
    for r in relations:
        r_group = [
            _unique_neighbour(params, x, "P"),
            _unique_partner(params, x, r, "Q"),
            _not_beyond(params, x, "P", "P", "S"),
        ]
        groups[r] = Forall(x, Implies(role(params, r, x), conjoin(r_group)))
    return groups


@cache
def build_P5(params: ReductionParams) -> Formula:
    return conjoin(p5_groups(params).values())


_ADJACENT_IN_D = {("P", "Q"), ("Q", "S")}


def _same_component_pattern(params: ReductionParams, alpha: str, beta: str, x: str, y: str) -> Formula:
    if alpha == beta:
        return Equality(x, y)
    if (alpha, beta) in _ADJACENT_IN_D or (beta, alpha) in _ADJACENT_IN_D:
        return edge(x, y)
    if "P" in (alpha, beta):
        other = beta if alpha == "P" else alpha
        if other.startswith("R"):
            return edge(x, y)
        return pair(params, alpha, beta, x, y)
    (z,) = _spares(params, x, y)[:1]
    if alpha == "S":
        return Exists(z, conjoin([edge(x, z), role(params, "Q", z), pair(params, "Q", beta, z, y)]))
    if beta == "S":
        return Exists(z, conjoin([edge(y, z), role(params, "Q", z), pair(params, "Q", alpha, z, x)]))
    return pair(params, alpha, beta, x, y)


@cache
def same_component(params: ReductionParams, x: str, y: str) -> Formula:
    terms = []
    for alpha in params.roles:
        for beta in params.roles:
            terms.append(conjoin([
                role(params, alpha, x),
                role(params, beta, y),
                _same_component_pattern(params, alpha, beta, x, y),
            ]))
    return disjoin(terms)


def build_same_component(params: ReductionParams) -> Formula:
    x, y, _ = params.work_vars
    return same_component(params, x, y)


@cache
def element(params: ReductionParams, v: str) -> Formula:
    return disjoin(role(params, alpha, v) for alpha in params.roles)


@cache
def build_P6(params: ReductionParams) -> Formula:
    x, y, _ = params.work_vars
    cross = disjoin(
        Or(
            And(role(params, "S", x), role(params, relation_role(l), y)),
            And(role(params, relation_role(l), x), role(params, "S", y)),
        )
        for l in range(1, params.m + 1)
    )
    guard = conjoin([edge(x, y), element(params, x), element(params, y), Not(same_component(params, x, y))])
    return Forall(x, Forall(y, Implies(guard, cross)))


def loop_free_graph(params: ReductionParams) -> Formula:
    x = params.work_vars[0]
    return Forall(x, Not(edge(x, x)))


def totality(params: ReductionParams) -> Formula:
    x = params.work_vars[0]
    return Forall(x, disjoin([deg1(params, x), in_line(params, x), element(params, x)]))


def psi0_parts(params: ReductionParams) -> dict[str, Formula]:
    """The named conjuncts of the structural sentence, in checking order."""
    parts = build_structural_axioms(params)
    parts["P5"] = build_P5(params)
    parts["loop-free"] = loop_free_graph(params)
    parts["totality"] = totality(params)
    return parts


@cache
def build_psi0(params: ReductionParams) -> Formula:
    return conjoin(psi0_parts(params).values())
