import logging
import os
from pathlib import Path

LOG_LEVEL = os.getenv("SPECTRA_LOG_LEVEL", "WARNING").upper()

# Brute force gives up above this many ground atoms unless forced
BRUTE_FORCE_MAX_ATOMS = int(os.getenv("SPECTRA_BRUTE_FORCE_MAX_ATOMS", "25"))

# Decisions plus conflicts before the DPLL solver answers "unknown"
SOLVER_BUDGET = int(os.getenv("SPECTRA_SOLVER_BUDGET", "200000"))

DEFAULT_SEED = int(os.getenv("SPECTRA_SEED", "1729"))

# "parity" keeps encoded graphs bipartite, "sequential" is the P0/Q1/S2/R(l+2) table
ATTACHMENT_SCHEME = os.getenv("SPECTRA_ATTACHMENT", "parity")

FORWARD_SAMPLES = int(os.getenv("SPECTRA_FORWARD_SAMPLES", "3"))
MUTATIONS_PER_MODEL = int(os.getenv("SPECTRA_MUTATIONS", "20"))
GROUNDING_MAX_VERTICES = int(os.getenv("SPECTRA_GROUNDING_MAX_VERTICES", "40"))

# Subformula tables with more free variables than this are recomputed, not cached
MEMO_MAX_FREE_VARS = int(os.getenv("SPECTRA_MEMO_MAX_FREE_VARS", "2"))

TEMPLATES_DIR = os.getenv("SPECTRA_TEMPLATES_DIR", str(Path(__file__).parent / "templates"))

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(level=(level or LOG_LEVEL), format=LOG_FORMAT)
