from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from spectra import config
from spectra.errors import ParamsError, UnknownRoleError
from spectra.models.formula import Formula, Vocabulary

PENDANT = "pendant"
LINE = "line"
ELEMENT = "element"

ATTACHMENT_SCHEMES = ("parity", "sequential")


def role_names(m: int) -> tuple[str, ...]:
    """Element roles in block order: P, Q, S, R1..Rm."""
    return ("P", "Q", "S") + tuple(f"R{l}" for l in range(1, m + 1))


def relation_role(l: int) -> str:
    return f"R{l}"


@dataclass(frozen=True)
class ReductionParams:
    m: int
    scheme: str = field(default_factory=lambda: config.ATTACHMENT_SCHEME)
    work_vars: tuple[str, str, str] = ("x", "y", "z")

    def __post_init__(self):
        if self.m < 3:
            raise ParamsError(f"the reduction needs m >= 3 relation symbols, got m={self.m}")
        if self.scheme not in ATTACHMENT_SCHEMES:
            raise ParamsError(f"unknown attachment scheme {self.scheme!r}, expected one of {ATTACHMENT_SCHEMES}")
        object.__setattr__(self, "work_vars", tuple(self.work_vars))
        if len(self.work_vars) != 3 or len(set(self.work_vars)) != 3:
            raise ParamsError(f"exactly three distinct work variables are required, got {self.work_vars}")
        distances = list(self.attachment.items())
        for i, (alpha, da) in enumerate(distances):
            for beta, db in distances[i + 1:]:
                if da == db or da == 4 * self.m - db:
                    raise ParamsError(f"attachment of {alpha} and {beta} is not reflection-safe")

    @property
    def p(self) -> int:
        return self.m + 3

    @property
    def q(self) -> int:
        return 8 * self.m + 2

    @property
    def line_length(self) -> int:
        return 4 * self.m + 1

    @property
    def roles(self) -> tuple[str, ...]:
        return role_names(self.m)

    @cached_property
    def attachment(self) -> dict[str, int]:
        """Distance from a line end to the line vertex each role attaches to."""
        if self.scheme == "sequential":
            table = {"P": 0, "Q": 1, "S": 2}
            table.update({relation_role(l): l + 2 for l in range(1, self.m + 1)})
        else:
            table = {"P": 1, "Q": 0, "S": 3}
            table.update({relation_role(l): 2 * l for l in range(1, self.m + 1)})
        return table

    def distance(self, role: str) -> int:
        try:
            return self.attachment[role]
        except KeyError:
            raise UnknownRoleError(role) from None

    def vertex_count(self, n: int) -> int:
        return self.p * n + self.q


@dataclass(frozen=True)
class VertexRole:
    kind: str
    index: int
    role: str | None = None

    def __str__(self):
        if self.kind == PENDANT:
            return f"w{self.index}"
        if self.kind == LINE:
            return f"u{self.index}"
        return f"{self.index}^{self.role}"


@dataclass(frozen=True)
class RoleClassification:
    """Partition of a graph into the line gadget and its element blocks.

    ``line`` and ``pendants`` list u_1..u_{4m+1} and w_1..w_{4m+1};
    ``blocks[i - 1]`` maps each role of element i to its vertex.
    """

    n: int
    line: tuple[int, ...]
    pendants: tuple[int, ...]
    blocks: tuple[Mapping[str, int], ...]

    @cached_property
    def vertex_roles(self) -> dict[int, VertexRole]:
        roles = {}
        for i, v in enumerate(self.line, start=1):
            roles[v] = VertexRole(LINE, i)
        for i, v in enumerate(self.pendants, start=1):
            roles[v] = VertexRole(PENDANT, i)
        for i, block in enumerate(self.blocks, start=1):
            for role, v in block.items():
                roles[v] = VertexRole(ELEMENT, i, role)
        return roles

    def role_of(self, v: int) -> VertexRole:
        return self.vertex_roles[v]

    def vertices_with_role(self, role: str) -> list[int]:
        return [block[role] for block in self.blocks]

    def labels(self) -> dict[int, str]:
        return {v: str(r) for v, r in self.vertex_roles.items()}


@dataclass(frozen=True)
class ReductionOutput:
    phi_prime: Formula
    params: ReductionParams
    provenance: Formula
    vocabulary: Vocabulary
    source_vocabulary: Vocabulary
    loop_companions: Mapping[str, str] = field(default_factory=dict)
    pads: tuple[str, ...] = ()

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def q(self) -> int:
        return self.params.q
