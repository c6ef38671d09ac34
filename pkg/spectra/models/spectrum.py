from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import pandas as pd

BRUTE_FORCE = "brute-force"
GROUNDING = "grounding"
AUTO = "auto"
METHODS = (AUTO, BRUTE_FORCE, GROUNDING)


@dataclass(frozen=True)
class SpectrumResult:
    """Spectrum of a sentence restricted to the sizes 1..max_size.

    ``methods`` records how each size was decided; sizes the solver gave up
    on are listed in ``unknown`` and are neither members nor non-members.
    """

    formula_digest: str
    max_size: int
    members: tuple[int, ...]
    methods: Mapping[int, str] = field(default_factory=dict)
    unknown: tuple[int, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.unknown


@dataclass
class VerificationReport:
    """Evidence gathered for one sentence by ``verify_reduction``."""

    formula_digest: str
    m: int
    p: int
    q: int
    n_max: int
    source_spectrum: tuple[int, ...]
    original_spectrum: tuple[int, ...] | None
    forward: pd.DataFrame
    mutations: pd.DataFrame
    grounding: pd.DataFrame
    backward_note: str

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(self.p * n + self.q for n in self.source_spectrum)

    @property
    def passed(self) -> bool:
        forward_ok = self.forward.empty or bool(self.forward["ok"].all())
        mutations_ok = self.mutations.empty or bool(self.mutations["ok"].all())
        grounding_ok = self.grounding.empty or bool(self.grounding["ok"].all())
        return forward_ok and mutations_ok and grounding_ok
