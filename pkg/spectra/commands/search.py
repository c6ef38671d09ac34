from pathlib import Path

from spectra.commands import add_reduction_options, as_json, emit
from spectra.errors import ParamsError
from spectra.models.formula import EDGE
from spectra.models.spectrum import METHODS
from spectra.services.formula_service import formula_digest
from spectra.services.grounding_service import GRAPH, STRUCTURE, format_dimacs, ground_to_cnf, write_dimacs
from spectra.services.model_io_service import read_document
from spectra.services.report_service import render_spectrum, render_verification, spectrum_dict, verification_dict
from spectra.services.spectrum_service import spectrum
from spectra.services.verification_service import verify_reduction


def _model_vocabulary(vocab):
    """Documents over the single symbol E are searched as graphs."""
    return None if tuple(vocab) == (EDGE,) else vocab


def spectrum_command(config, out) -> int:
    phi, vocab = read_document(config.input)
    result = spectrum(
        phi,
        config.max_n,
        method=config.method,
        budget=config.budget,
        vocab=_model_vocabulary(vocab),
        force=config.force,
    )
    emit(as_json(spectrum_dict(result)) if config.format == "json" else render_spectrum(result), config.output, out)
    return 0 if result.members else 1


def ground_command(config, out) -> int:
    if config.size is None or config.size < 1:
        raise ParamsError("ground needs a positive --size")
    phi, vocab = read_document(config.input)
    model_vocab = _model_vocabulary(vocab)
    kind = GRAPH if model_vocab is None else STRUCTURE
    cnf = ground_to_cnf(phi, config.size, kind, model_vocab)
    comment = f"sentence {formula_digest(phi)}\ndomain size {config.size} ({kind})"
    if config.output is None:
        out.write(format_dimacs(cnf, comment))
    else:
        sidecar = write_dimacs(config.output, cnf, comment)
        out.write(f"wrote {config.output} and {sidecar}: {cnf.num_vars} variables, {cnf.clause_count()} clauses\n")
    return 0


def verify_command(config, out) -> int:
    if config.max_n is None or config.max_n < 1:
        raise ParamsError("verify needs a positive --max-n")
    phi, vocab = read_document(config.input)
    report = verify_reduction(
        phi,
        vocab,
        config.max_n,
        assume_loop_free=config.assume_loop_free,
        seed=config.seed,
        samples=config.samples,
        mutations=config.mutations,
        ground=config.ground,
        scheme=config.scheme,
    )
    text = as_json(verification_dict(report)) if config.format == "json" else render_verification(report)
    emit(text, config.output, out)
    return 0 if report.passed else 1


HANDLERS = {"spectrum": spectrum_command, "ground": ground_command, "verify": verify_command}


def register(subparsers) -> None:
    parser = subparsers.add_parser("spectrum", help="model sizes of a sentence up to --max-n")
    parser.add_argument("--in", dest="input", type=Path, required=True, help=".fo document")
    parser.add_argument("--max-n", type=int, required=True)
    parser.add_argument("--method", choices=METHODS, default=METHODS[0])
    parser.add_argument("--budget", type=int, help="solver decision plus conflict budget")
    parser.add_argument("--force", action="store_true", help="brute force past the feasibility limit")
    parser.add_argument("--out", dest="output", type=Path)
    parser.add_argument("--format", choices=["text", "json"], default="text")

    parser = subparsers.add_parser("ground", help="ground a sentence at a domain size into DIMACS CNF")
    parser.add_argument("--in", dest="input", type=Path, required=True, help=".fo document")
    parser.add_argument("--size", type=int, required=True)
    parser.add_argument("--out", dest="output", type=Path, help="DIMACS file; a .map sidecar is written next to it")

    parser = subparsers.add_parser("verify", help="check the reduction end to end on small models")
    parser.add_argument("--in", dest="input", type=Path, required=True, help=".fo document")
    parser.add_argument("--max-n", type=int, required=True)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int, help="models and non-models sampled per size")
    parser.add_argument("--mutations", type=int, help="random single-edge mutations per encoded model")
    parser.add_argument("--no-ground", dest="ground", action="store_false", help="skip the grounding checks")
    parser.add_argument("--out", dest="output", type=Path)
    parser.add_argument("--format", choices=["text", "json"], default="text")
    add_reduction_options(parser)
