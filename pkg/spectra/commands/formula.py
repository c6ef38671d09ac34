from pathlib import Path

from spectra.commands import add_reduction_options, as_json, emit, load_reduction
from spectra.errors import ParamsError
from spectra.models.formula import GRAPH_VOCABULARY
from spectra.services.evaluation_service import evaluate
from spectra.services.model_io_service import format_document, read_document, read_graph, read_structure
from spectra.services.report_service import reduction_report, render_reduction_report


def reduce_command(config, out) -> int:
    _, _, output = load_reduction(config.input, config.assume_loop_free, config.scheme)
    document = format_document(output.phi_prime, GRAPH_VOCABULARY)
    emit(document, config.output, out)
    as_json_report = config.format == "json" or (config.report is not None and config.report.suffix == ".json")
    report = as_json(reduction_report(output)) if as_json_report else render_reduction_report(output)
    if config.report is not None or config.output is not None:
        emit(report, config.report, out)
    return 0


def check_command(config, out) -> int:
    phi, _ = read_document(config.formula)
    if (config.structure is None) == (config.graph is None):
        raise ParamsError("check needs exactly one of --structure and --graph")
    model = read_graph(config.graph) if config.graph is not None else read_structure(config.structure)
    holds = evaluate(phi, model)
    out.write("true\n" if holds else "false\n")
    return 0 if holds else 1


HANDLERS = {"reduce": reduce_command, "check": check_command}


def register(subparsers) -> None:
    parser = subparsers.add_parser("reduce", help="compile a sentence into a sentence over graphs")
    parser.add_argument("--in", dest="input", type=Path, required=True, help="input .fo document")
    parser.add_argument("--out", dest="output", type=Path, help="where to write the reduced document")
    parser.add_argument("--report", type=Path, help="where to write the parameter report")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    add_reduction_options(parser)

    parser = subparsers.add_parser("check", help="model check a sentence on a structure or graph")
    parser.add_argument("--formula", type=Path, required=True, help=".fo document")
    models = parser.add_mutually_exclusive_group(required=True)
    models.add_argument("--structure", type=Path)
    models.add_argument("--graph", type=Path)
