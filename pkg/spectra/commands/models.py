from pathlib import Path

from spectra import config as settings
from spectra.commands import add_reduction_options, emit, load_reduction
from spectra.errors import ParamsError
from spectra.models.reduction import ReductionParams
from spectra.models.structure import Structure
from spectra.services.encoding_service import decode_graph, encode_structure
from spectra.services.model_io_service import format_graph, format_structure, read_graph, read_structure
from spectra.services.reduction_service import lift_structure, lower_structure, pad_relations
from spectra.services.report_service import gadget_graph, gadget_text, graph_to_dot


def _encoder(config, structure: Structure):
    """Params, reduced vocabulary and the structure re-expressed over it.

    Without ``--formula`` the structure's own relations are used, padded to three.
    """
    if config.formula is not None:
        _, _, output = load_reduction(config.formula, config.assume_loop_free, config.scheme)
        return output.params, output.vocabulary, lift_structure(structure, output), output
    vocab = pad_relations(structure.vocabulary)
    relations = {symbol: structure.relations.get(symbol, frozenset()) for symbol in vocab}
    params = ReductionParams(len(vocab), config.scheme or settings.ATTACHMENT_SCHEME)
    return params, vocab, Structure(structure.size, relations), None


def encode_command(config, out) -> int:
    structure = read_structure(config.input)
    params, vocab, lifted, _ = _encoder(config, structure)
    graph, _ = encode_structure(lifted, params, vocab)
    text = graph_to_dot(graph) if config.format == "dot" else format_graph(graph)
    emit(text, config.output, out)
    return 0


def decode_command(config, out) -> int:
    graph = read_graph(config.input)
    if config.formula is not None:
        _, _, output = load_reduction(config.formula, config.assume_loop_free, config.scheme)
        structure = lower_structure(decode_graph(graph, output.params, output.vocabulary), output)
    elif config.m is not None:
        structure = decode_graph(graph, ReductionParams(config.m, config.scheme or settings.ATTACHMENT_SCHEME))
    else:
        raise ParamsError("decode needs --formula or --m")
    emit(format_structure(structure), config.output, out)
    return 0


def roundtrip_command(config, out) -> int:
    structure = read_structure(config.input)
    params, vocab, lifted, output = _encoder(config, structure)
    graph, _ = encode_structure(lifted, params, vocab)
    decoded = decode_graph(graph, params, vocab)
    if output is not None:
        decoded, expected = lower_structure(decoded, output), structure
    else:
        expected = lifted
    same = decoded == expected
    out.write(f"roundtrip {'ok' if same else 'mismatch'}: {graph.size} vertices, {len(graph.edges)} edges\n")
    return 0 if same else 1


def gadget_command(config, out) -> int:
    if config.m is None:
        raise ParamsError("gadget needs --m")
    params = ReductionParams(config.m, config.scheme or settings.ATTACHMENT_SCHEME)
    graph = gadget_graph(params, config.which)
    text = graph_to_dot(graph, name=config.which) if config.format == "dot" else gadget_text(graph)
    emit(text, config.output, out)
    return 0


HANDLERS = {
    "encode": encode_command,
    "decode": decode_command,
    "roundtrip": roundtrip_command,
    "gadget": gadget_command,
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("encode", help="encode a structure as a graph")
    parser.add_argument("--in", dest="input", type=Path, required=True, help="structure file")
    parser.add_argument("--out", dest="output", type=Path)
    parser.add_argument("--formula", type=Path, help="reduce this document and encode over its vocabulary")
    parser.add_argument("--format", choices=["text", "dot"], default="text")
    add_reduction_options(parser)

    parser = subparsers.add_parser("decode", help="decode an encoded graph back into a structure")
    parser.add_argument("--in", dest="input", type=Path, required=True, help="graph file")
    parser.add_argument("--out", dest="output", type=Path)
    parser.add_argument("--formula", type=Path)
    parser.add_argument("--m", type=int)
    add_reduction_options(parser)

    parser = subparsers.add_parser("roundtrip", help="check that decode undoes encode")
    parser.add_argument("--in", dest="input", type=Path, required=True, help="structure file")
    parser.add_argument("--formula", type=Path)
    add_reduction_options(parser)

    parser = subparsers.add_parser("gadget", help="export the line gadget C or the element gadget D")
    parser.add_argument("--which", choices=["C", "D"], default="C")
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--out", dest="output", type=Path)
    parser.add_argument("--format", choices=["dot", "text"], default="dot")
    parser.add_argument("--scheme", choices=["parity", "sequential"], default=None)
