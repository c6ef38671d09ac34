"""Subcommand groups. Each module registers its parsers and maps command names to handlers."""
import json
from pathlib import Path
from typing import TextIO

from spectra.models.formula import Formula, Vocabulary
from spectra.models.reduction import ReductionOutput
from spectra.services.model_io_service import read_document
from spectra.services.reduction_service import reduce


def emit(text: str, path: Path | None, out: TextIO) -> None:
    """Write ``text`` to ``path`` when given, otherwise to ``out``."""
    if path is None:
        out.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def as_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def load_reduction(path: Path, assume_loop_free: bool, scheme: str | None) -> tuple[Formula, Vocabulary, ReductionOutput]:
    phi, vocab = read_document(path)
    return phi, vocab, reduce(phi, vocab, assume_loop_free=assume_loop_free, scheme=scheme)


def add_reduction_options(parser) -> None:
    parser.add_argument("--assume-loop-free", action="store_true", help="conjoin irreflexivity instead of eliminating loops")
    parser.add_argument("--scheme", choices=["parity", "sequential"], default=None, help="attachment scheme")
