"""Reading and writing structure, graph and formula files."""
import logging
import re
from pathlib import Path

from spectra.errors import ModelFileError, SpectraError
from spectra.models.formula import Formula, Vocabulary
from spectra.models.structure import Graph, Structure
from spectra.services.formula_service import print_formula
from spectra.services.parser_service import parse_document

logger = logging.getLogger(__name__)

_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_EDGE = re.compile(r"^(\d+)\s*-\s*(\d+)$")


def _content_lines(text: str):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line


def _header(lines, keyword: str) -> tuple[int, int]:
    try:
        number, line = next(lines)
    except StopIteration:
        raise ModelFileError(f"empty {keyword} file") from None
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword or not parts[1].isdigit():
        raise ModelFileError(f"line {number}: expected '{keyword} <size>', got {line!r}")
    return number, int(parts[1])


def parse_structure(text: str) -> Structure:
    """Read the ``structure <n>`` format: one ``SYMBOL: (a,b) (c,d) ...`` line per relation."""
    lines = _content_lines(text)
    _, size = _header(lines, "structure")
    relations: dict[str, set[tuple[int, int]]] = {}
    for number, line in lines:
        symbol, sep, rest = line.partition(":")
        symbol = symbol.strip()
        if not sep or not symbol:
            raise ModelFileError(f"line {number}: expected 'SYMBOL: (a,b) ...', got {line!r}")
        if symbol in relations:
            raise ModelFileError(f"line {number}: relation {symbol} listed twice")
        pairs = _PAIR.findall(rest)
        if _PAIR.sub("", rest).strip():
            raise ModelFileError(f"line {number}: cannot read the pairs of {symbol}")
        relations[symbol] = {(int(a), int(b)) for a, b in pairs}
    try:
        return Structure(size, relations)
    except SpectraError as e:
        raise ModelFileError(e.detail) from None


def format_structure(structure: Structure) -> str:
    lines = [f"structure {structure.size}"]
    for symbol, pairs in structure.relations.items():
        body = " ".join(f"({a},{b})" for a, b in sorted(pairs))
        lines.append(f"{symbol}: {body}".rstrip())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Read the ``graph <n>`` format with a single ``edges: a-b c-d ...`` line."""
    lines = _content_lines(text)
    _, size = _header(lines, "graph")
    edges = set()
    for number, line in lines:
        key, sep, rest = line.partition(":")
        if not sep or key.strip() != "edges":
            raise ModelFileError(f"line {number}: expected 'edges: a-b ...', got {line!r}")
        for token in re.sub(r"\s*-\s*", "-", rest).split():
            match = _EDGE.match(token)
            if not match:
                raise ModelFileError(f"line {number}: cannot read edge {token!r}")
            edges.add((int(match.group(1)), int(match.group(2))))
    try:
        return Graph(size, frozenset(edges))
    except SpectraError as e:
        raise ModelFileError(e.detail) from None


def format_graph(graph: Graph) -> str:
    body = " ".join(f"{a}-{b}" for a, b in sorted(graph.edges))
    return f"graph {graph.size}\nedges: {body}".rstrip() + "\n"


def format_document(formula: Formula, vocab: Vocabulary) -> str:
    return f"vocab {' '.join(vocab)}\n{print_formula(formula)}\n"


def _read(path: str | Path) -> str:
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"file not found: {path}")
    return path.read_text(encoding="utf-8")


def _write(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)


def read_structure(path: str | Path) -> Structure:
    return parse_structure(_read(path))


def read_graph(path: str | Path) -> Graph:
    return parse_graph(_read(path))


def read_document(path: str | Path) -> tuple[Formula, Vocabulary]:
    return parse_document(_read(path))


def write_structure(path: str | Path, structure: Structure) -> None:
    _write(path, format_structure(structure))


def write_graph(path: str | Path, graph: Graph) -> None:
    _write(path, format_graph(graph))


def write_document(path: str | Path, formula: Formula, vocab: Vocabulary) -> None:
    _write(path, format_document(formula, vocab))
