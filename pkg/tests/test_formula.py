"""
Tests for the formula toolkit: parsing, printing, analysis and file formats
"""

import pytest

from spectra.errors import ArityError, FormulaSyntaxError, ModelFileError, UnknownSymbolError
from spectra.models.formula import And, Atom, Equality, Exists, Forall, Not, Vocabulary, conjoin
from spectra.models.structure import Graph, Structure
from spectra.services.formula_service import (
    dag_size,
    formula_digest,
    free_variables,
    is_sentence,
    node_count,
    print_formula,
    quantifier_depth,
    validate_input,
    variables_used,
)
from spectra.services.model_io_service import (
    format_document,
    format_graph,
    format_structure,
    parse_graph,
    parse_structure,
    read_document,
    read_graph,
    read_structure,
    write_document,
    write_graph,
    write_structure,
)
from spectra.services.parser_service import parse_document, parse_formula

from conftest import CORPUS, random_sentence


class TestParser:
    """Surface syntax to formula nodes"""

    def test_parses_quantifiers_and_connectives(self):
        phi = parse_formula("forall x. exists y. (R(x, y) & ~x = y)")
        assert phi == Forall("x", Exists("y", And(Atom("R", "x", "y"), Not(Equality("x", "y")))))

    def test_precedence(self):
        phi = parse_formula("R(x, y) | R(y, x) & x = y")
        assert print_formula(phi) == "R(x,y) | R(y,x) & x = y"
        assert phi.right == And(Atom("R", "y", "x"), Equality("x", "y"))

    def test_implication_is_right_associative(self):
        phi = parse_formula("R(x, x) -> R(y, y) -> R(z, z)")
        assert phi.right.left == Atom("R", "y", "y")

    def test_syntax_error_reports_position(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula("forall x. R(x,")
        assert "syntax error" in info.value.detail

    def test_syntax_error_on_stray_character(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula("R(x, y) $ R(y, x)")
        assert info.value.line == 1

    def test_arity_error(self):
        with pytest.raises(ArityError) as info:
            parse_formula("R(x, y, z)")
        assert info.value.arity == 3

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbolError) as info:
            parse_formula("S(x, y)", Vocabulary(("R",)))
        assert info.value.symbol == "S"

    def test_document_needs_vocab_header(self):
        with pytest.raises(ModelFileError):
            parse_document("forall x. R(x, x)\n")

    def test_document_with_comments(self):
        phi, vocab = parse_document("# note\nvocab R S  # two relations\nforall x. R(x, x)  # loop\n")
        assert vocab.symbols == ("R", "S")
        assert phi == Forall("x", Atom("R", "x", "x"))

    def test_print_parse_roundtrip_on_corpus(self):
        for text in CORPUS.values():
            phi = parse_formula(text)
            assert parse_formula(print_formula(phi)) == phi

    def test_print_parse_roundtrip_on_random_sentences(self, rng):
        for _ in range(100):
            phi = random_sentence(rng, 5, symbols=("R", "S"))
            assert parse_formula(print_formula(phi)) == phi


class TestAnalysis:
    """Variables, statistics and eligibility"""

    def test_variables_in_first_occurrence_order(self):
        phi = parse_formula("exists z. forall x. (R(x, z) | exists y. R(y, y))")
        assert variables_used(phi) == ("z", "x", "y")

    def test_free_variables(self):
        phi = parse_formula("forall x. R(x, y)")
        assert free_variables(phi) == frozenset({"y"})
        assert not is_sentence(phi)
        assert is_sentence(Exists("y", phi))

    def test_shared_nodes_counted_once_in_dag(self):
        atom = Atom("R", "x", "y")
        phi = And(atom, atom)
        assert node_count(phi) == 3
        assert dag_size(phi) == 2

    def test_quantifier_depth(self):
        phi = parse_formula("forall x. ((exists y. R(x, y)) & exists y. forall z. R(y, z))")
        assert quantifier_depth(phi) == 3

    def test_digest_is_stable(self):
        phi = parse_formula(CORPUS["function"])
        assert formula_digest(phi) == formula_digest(parse_formula(print_formula(phi)))
        assert len(formula_digest(phi)) == 64

    def test_balanced_conjunction(self):
        parts = [Atom("R", "x", v) for v in "abcdefgh"]
        assert quantifier_depth(conjoin(parts)) == 0
        assert node_count(conjoin(parts)) == 15

    def test_validate_flags_ineligible_input(self):
        report = validate_input(parse_formula("forall x. R(x, y)"), Vocabulary(("R",)))
        assert not report.is_sentence
        assert report.variable_count == 2
        assert "k < 3" in report.reasons
        assert not report.eligible

    def test_validate_accepts_corpus(self, corpus):
        for phi, vocab in corpus.values():
            report = validate_input(phi, vocab)
            assert report.eligible
            assert report.variable_count == 3
            assert report.relation_count == 3


class TestModelFiles:
    """Structure, graph and document files"""

    def test_structure_roundtrip(self, tmp_path):
        structure = Structure(3, {"R": {(1, 2), (3, 3)}, "S": set()})
        path = tmp_path / "s.structure"
        write_structure(path, structure)
        assert read_structure(path) == structure
        assert format_structure(structure) == "structure 3\nR: (1,2) (3,3)\nS:\n"

    def test_structure_pair_out_of_range(self):
        with pytest.raises(ModelFileError):
            parse_structure("structure 2\nR: (1,3)\n")

    def test_structure_bad_header(self):
        with pytest.raises(ModelFileError):
            parse_structure("structure two\n")

    def test_graph_roundtrip(self, tmp_path):
        g = Graph(4, frozenset({(1, 2), (4, 3)}))
        path = tmp_path / "g.graph"
        write_graph(path, g)
        assert read_graph(path) == g
        assert format_graph(g) == "graph 4\nedges: 1-2 3-4\n"

    def test_graph_rejects_loops(self):
        with pytest.raises(ModelFileError):
            parse_graph("graph 2\nedges: 1-1\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelFileError) as info:
            read_graph(tmp_path / "absent.graph")
        assert "file not found" in info.value.detail

    def test_document_roundtrip(self, tmp_path, corpus):
        phi, vocab = corpus["chain"]
        path = tmp_path / "chain.fo"
        write_document(path, phi, vocab)
        assert read_document(path) == (phi, vocab)
        assert format_document(phi, vocab).startswith("vocab R1 R2 R3\n")
