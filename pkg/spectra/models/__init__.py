from spectra.models.cnf import Cnf, SolveResult
from spectra.models.formula import (
    EDGE,
    GRAPH_VOCABULARY,
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
    TruthConstant,
    ValidationReport,
    Vocabulary,
)
from spectra.models.reduction import ReductionOutput, ReductionParams, RoleClassification, VertexRole
from spectra.models.structure import Graph, Structure, graph_view
from spectra.models.spectrum import AUTO, BRUTE_FORCE, GROUNDING, METHODS, SpectrumResult, VerificationReport
