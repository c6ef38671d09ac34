"""
Tests for the reduction pipeline: preprocessing, translation and the reduced sentence
"""

import numpy as np
import pytest

from spectra.errors import EligibilityError, StructureError, VocabularyError
from spectra.models.formula import FALSE, Vocabulary
from spectra.models.structure import Structure
from spectra.services.encoding_service import encode_structure
from spectra.services.evaluation_service import ModelChecker, evaluate
from spectra.services.formula_service import print_formula, variables_used
from spectra.services.parser_service import parse_document, parse_formula
from spectra.services.reduction_service import (
    eliminate_self_loops,
    lift_structure,
    lower_structure,
    pad_relations,
    preprocess,
    reduce,
    stated_loop_free,
    translate,
)
from spectra.services.report_service import reduction_report, render_reduction_report
from spectra.services.spectrum_service import SearchSpace, spectrum, truth_table

from conftest import VOCAB, random_sentence, random_structure

CHUNK = 16


def loop_free_truths(output, n):
    """Truth of the preprocessed sentence and of Φ' on every loop-free structure of size ``n``."""
    space = SearchSpace(output.provenance, n, output.vocabulary, loop_free=True)
    expected = truth_table(output.provenance, space)
    graphs = [encode_structure(space.model(code), output.params, output.vocabulary)[0] for code in range(len(expected))]
    actual = np.concatenate([
        ModelChecker.for_graphs(graphs[start:start + CHUNK]).holds_all(output.phi_prime)
        for start in range(0, len(graphs), CHUNK)
    ])
    return expected, actual


class TestPreprocessing:
    """Loop elimination and padding"""

    def test_companions_for_every_relation(self):
        phi, vocab = parse_document("vocab R S\nforall x. exists y. exists z. (R(x, y) & S(y, z))\n")
        _, extended, companions = eliminate_self_loops(phi, vocab)
        assert companions == {"R": "R_loop", "S": "S_loop"}
        assert extended.symbols == ("R", "S", "R_loop", "S_loop")

    def test_stated_loop_freedom_is_respected(self):
        phi = parse_formula("(forall x. ~R(x, x)) & exists x. exists y. exists z. (R(x, y) & S(y, z))")
        assert stated_loop_free(phi) == {"R"}
        _, _, companions = eliminate_self_loops(phi, Vocabulary(("R", "S")))
        assert companions == {"S": "S_loop"}

    def test_padding(self):
        assert pad_relations(Vocabulary(("R",))).symbols == ("R", "Pad1", "Pad2")
        assert pad_relations(Vocabulary(("R", "Pad1"))).symbols == ("R", "Pad1", "Pad2")
        assert pad_relations(VOCAB) == VOCAB

    def test_assume_loop_free(self, corpus):
        phi, vocab = corpus["chain"]
        phi_pre, padded, companions, pads = preprocess(phi, vocab, assume_loop_free=True)
        assert padded == vocab
        assert companions == {} and pads == ()
        assert not evaluate(phi_pre, Structure(1, {"R1": {(1, 1)}, "R2": {(1, 1)}, "R3": {(1, 1)}}))

    def test_two_variables_are_not_enough(self):
        phi, vocab = parse_document("vocab R\nforall x. exists y. R(x, y)\n")
        with pytest.raises(EligibilityError) as info:
            reduce(phi, vocab)
        assert "three variables" in info.value.detail

    def test_free_variables_are_rejected(self):
        with pytest.raises(EligibilityError):
            reduce(parse_formula("exists x. exists y. R1(x, z)"), VOCAB)


class TestLoopCorner:
    """Spectra before and after loop elimination agree except for forced one-element loops"""

    def test_forced_loop_on_one_element(self):
        phi, vocab = parse_document("vocab R\nexists x. (R(x, x) & forall y. forall z. y = z)\n")
        output = reduce(phi, vocab)
        assert spectrum(phi, 3, vocab=vocab).members == (1,)
        assert spectrum(output.provenance, 3, vocab=output.vocabulary, loop_free=True).members == ()

    def test_loops_from_two_elements_on(self):
        phi, vocab = parse_document(
            "vocab R\n"
            "exists x. (R(x, x) & exists y. (~x = y & ~R(y, y))) & "
            "forall x. forall y. forall z. (x = y | x = z | y = z)\n"
        )
        output = reduce(phi, vocab)
        assert spectrum(phi, 3, vocab=vocab).members == (2,)
        assert spectrum(output.provenance, 3, vocab=output.vocabulary, loop_free=True).members == (2,)

    def test_lift_preserves_truth(self, rng):
        vocab = Vocabulary(("R1", "R2"))
        phis = [random_sentence(rng, 4, symbols=vocab.symbols) for _ in range(20)]
        for phi in phis:
            output = reduce(phi, vocab) if len(variables_used(phi)) >= 3 else None
            if output is None:
                continue
            for n in (2, 3):
                structure = random_structure(rng, vocab, n, density=0.4, loop_free=False)
                lifted = lift_structure(structure, output)
                assert all(symbol not in output.loop_companions for symbol, _ in lifted.self_loops())
                assert evaluate(phi, structure) == evaluate(output.provenance, lifted)
                assert lower_structure(lifted, output) == structure

    def test_lift_moves_loops_to_the_companion(self):
        phi, vocab = parse_document("vocab R\nexists x. exists y. exists z. (R(x, y) & R(y, z))\n")
        output = reduce(phi, vocab)
        lifted = lift_structure(Structure(3, {"R": {(1, 1), (3, 3), (2, 3)}}), output)
        assert lifted.relations["R"] == {(2, 3)}
        assert lifted.relations["R_loop"] == {(1, 2), (3, 1)}
        assert lifted.relations["Pad1"] == frozenset()

    def test_lift_needs_two_elements_for_a_loop(self):
        phi, vocab = parse_document("vocab R\nexists x. exists y. exists z. (R(x, y) & R(y, z))\n")
        with pytest.raises(StructureError):
            lift_structure(Structure(1, {"R": {(1, 1)}}), reduce(phi, vocab))

    def test_lift_needs_every_symbol(self, corpus):
        output = reduce(*corpus["chain"])
        with pytest.raises(VocabularyError):
            lift_structure(Structure(2, {"R1": set()}), output)


class TestTranslation:
    """Atom and quantifier rewriting"""

    def test_reflexive_atom_becomes_false(self, params):
        assert translate(parse_formula("R1(x, x)"), params, VOCAB, ("x", "y", "z")) is FALSE

    def test_unknown_relation(self, params):
        with pytest.raises(VocabularyError):
            translate(parse_formula("exists x. exists y. exists z. T(x, y)"), params, VOCAB)

    def test_quantifiers_are_guarded(self, params):
        g, classification = encode_structure(Structure.empty(VOCAB, 2), params, VOCAB)
        counted = translate(parse_formula("exists x. exists y. exists z. (~x = y & ~x = z & ~y = z)"), params, VOCAB)
        assert not evaluate(counted, g)
        pair = translate(parse_formula("exists x. exists y. (~x = y & forall z. (z = x | z = y))"), params, VOCAB)
        assert evaluate(pair, g)


class TestReducedSentence:
    """Constants, variables and equi-satisfiability of Φ'"""

    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_constants(self, m):
        vocab = Vocabulary(tuple(f"R{l}" for l in range(1, m + 1)))
        phi = parse_formula("forall x. forall y. forall z. (R1(x, y) -> (R1(x, y) | x = z))")
        output = reduce(phi, vocab, assume_loop_free=True)
        assert (output.params.m, output.p, output.q) == (m, m + 3, 8 * m + 2)

    def test_loop_companions_raise_m(self, corpus, caplog):
        with caplog.at_level("WARNING", logger="spectra.services.reduction_service"):
            output = reduce(*corpus["chain"])
        assert "raise m to 6" in caplog.text
        assert output.params.m == 6
        assert output.loop_companions == {"R1": "R1_loop", "R2": "R2_loop", "R3": "R3_loop"}
        text = render_reduction_report(output)
        assert "m = 6\np = 9\nq = 50\n" in text
        assert "R1->R1_loop" in text
        assert reduction_report(output)["vocabulary"][3:] == ["R1_loop", "R2_loop", "R3_loop"]
        assert "note: loop companions R1_loop, R2_loop, R3_loop raise m to 6;" in text
        assert "--assume-loop-free" in reduction_report(output)["notes"][0]

    def test_no_note_without_companions(self, corpus):
        output = reduce(*corpus["chain"], assume_loop_free=True)
        assert reduction_report(output)["notes"] == []
        assert "note:" not in render_reduction_report(output)

    def test_same_variables(self, corpus):
        for name, (phi, vocab) in corpus.items():
            output = reduce(phi, vocab, assume_loop_free=True)
            assert set(variables_used(output.phi_prime)) == set(variables_used(phi)), name

    def test_renamed_variables(self):
        phi, vocab = parse_document("vocab R1 R2 R3\nforall a. exists b. (R1(a, b) & exists c. R2(b, c))\n")
        output = reduce(phi, vocab, assume_loop_free=True)
        assert set(variables_used(output.phi_prime)) == {"a", "b", "c"}
        assert output.params.work_vars == ("a", "b", "c")

    def test_deterministic(self, corpus):
        phi, vocab = corpus["function"]
        first = print_formula(reduce(phi, vocab, assume_loop_free=True).phi_prime)
        second = print_formula(reduce(phi, vocab, assume_loop_free=True).phi_prime)
        assert first == second

    @pytest.mark.parametrize("name", ["tautology", "exactly-two", "function", "chain", "symmetric", "transitive"])
    def test_models_correspond(self, corpus, name):
        phi, vocab = corpus[name]
        output = reduce(phi, vocab, assume_loop_free=True)
        for n in (1, 2):
            expected, actual = loop_free_truths(output, n)
            assert actual.tolist() == expected.tolist(), (name, n)

    def test_exactly_two_has_models_only_at_two(self, corpus):
        output = reduce(*corpus["exactly-two"], assume_loop_free=True)
        one, _ = loop_free_truths(output, 1)
        two, _ = loop_free_truths(output, 2)
        assert not one.any() and two.all()
