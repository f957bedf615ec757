"""Mutual information and signed NMI against independent rational oracles."""

import math
import random

import pytest

from lexfp.corpus import ContingencyCell, load_corpus, load_solution
from lexfp.nmi import (
    entropy_binary,
    occurrence_below_expectation,
    solution_entropy,
    term_cluster_mi,
    term_cluster_nmi,
    term_solution_mi,
    term_solution_nmi,
)

from conftest import build_planted, make_corpus, random_cell_counts
from oracles import mi_bits_rational, signed_nmi_rational, solution_mi_rational


def cell(n11, n10, n01, n00):
    return ContingencyCell(n11, n10, n01, n00, n11 + n10 + n01 + n00)


class TestEntropy:
    def test_uniform(self):
        assert entropy_binary(0.5) == 1.0

    def test_degenerate(self):
        assert entropy_binary(0.0) == 0.0
        assert entropy_binary(1.0) == 0.0

    def test_skewed(self):
        assert entropy_binary(0.1) == pytest.approx(0.4690, abs=1e-4)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            entropy_binary(1.5)


class TestTermClusterMi:
    def test_identical_indicators_one_bit(self):
        assert term_cluster_mi(cell(2, 0, 0, 2)) == pytest.approx(1.0, abs=1e-12)

    def test_independence_zero(self):
        assert term_cluster_mi(cell(1, 1, 1, 1)) == 0.0

    def test_against_rational_oracle(self):
        assert term_cluster_mi(cell(2, 1, 1, 6)) == pytest.approx(
            mi_bits_rational(2, 1, 1, 6), abs=1e-12
        )

    def test_random_cells_match_oracle(self):
        rng = random.Random(3)
        for _ in range(300):
            n11, n10, n01, n00 = random_cell_counts(rng)
            got = term_cluster_mi(cell(n11, n10, n01, n00))
            assert got == pytest.approx(mi_bits_rational(n11, n10, n01, n00), abs=1e-10)
            assert got >= 0.0

    def test_symmetry_under_role_swap(self):
        rng = random.Random(4)
        for _ in range(200):
            n11, n10, n01, n00 = random_cell_counts(rng)
            assert term_cluster_mi(cell(n11, n10, n01, n00)) == pytest.approx(
                term_cluster_mi(cell(n11, n01, n10, n00)), abs=1e-12
            )

    def test_empty_universe_rejected(self):
        with pytest.raises(ValueError):
            term_cluster_mi(ContingencyCell(0, 0, 0, 0, 0))


class TestTermClusterNmi:
    def test_perfect_coincidence(self):
        score = term_cluster_nmi(cell(2, 0, 0, 2))
        assert score.value == pytest.approx(1.0, abs=1e-12)
        assert not score.sign_negative

    def test_independence(self):
        score = term_cluster_nmi(cell(1, 1, 1, 1))
        assert score.value == 0.0
        assert not score.sign_negative  # observed equals expectation exactly

    def test_under_represented_term_goes_negative(self):
        score = term_cluster_nmi(cell(0, 3, 5, 2))
        assert score.sign_negative
        assert score.value < 0.0
        assert score.value == pytest.approx(signed_nmi_rational(0, 3, 5, 2), abs=1e-10)

    def test_random_cells_match_signed_oracle(self):
        rng = random.Random(5)
        for _ in range(300):
            counts = random_cell_counts(rng)
            got = term_cluster_nmi(cell(*counts))
            assert got.value == pytest.approx(signed_nmi_rational(*counts), abs=1e-10)

    def test_magnitude_bounded_by_one(self):
        rng = random.Random(6)
        for _ in range(400):
            score = term_cluster_nmi(cell(*random_cell_counts(rng)))
            assert abs(score.value) <= 1.0

    def test_sign_implies_nonpositive_value(self):
        rng = random.Random(7)
        for _ in range(400):
            score = term_cluster_nmi(cell(*random_cell_counts(rng)))
            if score.sign_negative:
                assert score.value <= 0.0
            else:
                assert score.value >= 0.0

    def test_degenerate_entropy_rule(self):
        # term everywhere and group = whole universe: both entropies are 0
        score = term_cluster_nmi(cell(4, 0, 0, 0))
        assert score.value == 0.0
        assert score.raw_mi == 0.0

    def test_adding_in_group_occurrence_moves_value_up(self):
        # one more in-group document gains the term while below expectation
        rng = random.Random(8)
        checked = 0
        while checked < 150:
            n11, n10, n01, n00 = random_cell_counts(rng)
            before = cell(n11, n10, n01, n00)
            if n01 == 0 or not occurrence_below_expectation(before):
                continue
            after = cell(n11 + 1, n10, n01 - 1, n00)
            assert term_cluster_nmi(after).value > term_cluster_nmi(before).value
            checked += 1


class TestTermSolutionMi:
    @pytest.fixture
    def six_doc(self):
        corpus = make_corpus(
            [
                ("d0", ["g"]),
                ("d1", ["g"]),
                ("d2", []),
                ("d3", ["g"]),
                ("d4", []),
                ("d5", []),
            ]
        )
        pairs = [(f"d{i}", "A" if i < 3 else "B") for i in range(6)]
        return corpus, load_solution(corpus, pairs, "s")

    def test_term_absent_from_covered(self):
        corpus = make_corpus([("d0", ["g"]), ("d1", []), ("d2", [])])
        solution = load_solution(corpus, [("d1", "A"), ("d2", "B")], "s")
        assert term_solution_mi(corpus, corpus.terms["g"], solution) == 0.0

    def test_single_cluster_is_uninformative(self):
        corpus = make_corpus([("d0", ["g"]), ("d1", []), ("d2", ["g"])])
        solution = load_solution(corpus, [(f"d{i}", "A") for i in range(3)], "s")
        assert term_solution_mi(corpus, corpus.terms["g"], solution) == 0.0
        assert term_solution_nmi(corpus, corpus.terms["g"], solution).value == 0.0

    def test_six_doc_example_matches_oracle(self, six_doc):
        corpus, solution = six_doc
        got = term_solution_mi(corpus, corpus.terms["g"], solution)
        members = [(i in {0, 1, 3}, "A" if i < 3 else "B") for i in range(6)]
        assert got == pytest.approx(solution_mi_rational(members), abs=1e-12)
        assert got == pytest.approx(0.0817041659455105, abs=1e-12)

    def test_six_doc_nmi_composition(self, six_doc):
        # H(t) = H(3/6) = 1 and H(C) = 1, so the normalised value equals I
        corpus, solution = six_doc
        mi = term_solution_mi(corpus, corpus.terms["g"], solution)
        score = term_solution_nmi(corpus, corpus.terms["g"], solution)
        assert score.value == pytest.approx(mi, abs=1e-12)
        assert not score.sign_negative

    def test_reduces_to_binary_mi_for_two_clusters(self):
        from lexfp.corpus import contingency

        rng = random.Random(9)
        for _ in range(60):
            n_docs = rng.randint(4, 24)
            records = [
                (f"d{i}", ["t"] if rng.random() < 0.5 else []) for i in range(n_docs)
            ]
            records[0] = ("d0", ["t"])
            corpus = load_corpus(records)
            split = rng.randint(1, n_docs - 1)
            pairs = [(f"d{i}", "A" if i < split else "B") for i in range(n_docs)]
            solution = load_solution(corpus, pairs, "s")
            cluster_a = solution.clusters["A"]
            binary = term_cluster_mi(contingency(corpus, corpus.terms["t"], cluster_a, None))
            whole = term_solution_mi(corpus, corpus.terms["t"], solution)
            assert whole == pytest.approx(binary, abs=1e-12)

    def test_merging_clusters_never_gains_information(self):
        rng = random.Random(10)
        for _ in range(40):
            n_docs = rng.randint(6, 24)
            n_clusters = rng.randint(3, 5)
            records = [
                (f"d{i}", ["t"] if rng.random() < 0.5 else []) for i in range(n_docs)
            ]
            records[0] = ("d0", ["t"])
            corpus = load_corpus(records)
            pairs = [(f"d{i}", f"c{rng.randrange(n_clusters)}") for i in range(n_docs)]
            solution = load_solution(corpus, pairs, "s")
            ids = solution.cluster_ids()
            if len(ids) < 2:
                continue
            a, b = ids[0], ids[1]
            merged_pairs = [(doc, a if cid == b else cid) for doc, cid in pairs]
            merged = load_solution(corpus, merged_pairs, "m")
            before = term_solution_mi(corpus, corpus.terms["t"], solution)
            after = term_solution_mi(corpus, corpus.terms["t"], merged)
            assert after <= before + 1e-12


class TestTermSolutionNmi:
    def test_term_in_every_covered_doc(self):
        corpus = make_corpus([("d0", ["g"]), ("d1", ["g"]), ("d2", [])])
        solution = load_solution(corpus, [("d0", "A"), ("d1", "B")], "s")
        assert term_solution_nmi(corpus, corpus.terms["g"], solution).value == 0.0

    def test_never_signed(self):
        corpus, solution, _ = build_planted(n_docs=40, n_clusters=3, n_terms=12, seed=21)
        for term in list(corpus.terms.values())[:20]:
            score = term_solution_nmi(corpus, term, solution)
            assert not score.sign_negative
            assert 0.0 <= score.value <= 1.0

    def test_solution_entropy_two_equal_clusters(self):
        corpus = make_corpus([(f"d{i}", []) for i in range(4)])
        solution = load_solution(
            corpus, [("d0", "A"), ("d1", "A"), ("d2", "B"), ("d3", "B")], "s"
        )
        assert solution_entropy(solution) == pytest.approx(1.0, abs=1e-12)
        fractions = [len(d) / 4 for d in solution.clusters.values()]
        assert math.isclose(sum(fractions), 1.0)
