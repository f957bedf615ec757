"""Shared fixture builders for synthetic corpora and planted clusterings."""

import random

import pytest

from lexfp.corpus import load_corpus, load_solution
from lexfp.fingerprint import fingerprint_similarity, make_fingerprint
from lexfp.tsp import LabelAxis, OrderMethod


def make_corpus(records):
    """load_corpus over literal (id, [terms]) pairs."""
    return load_corpus(records)


def make_solution(corpus, pairs, name="sol"):
    return load_solution(corpus, pairs, name)


def build_planted(n_docs, n_clusters, n_terms, seed, in_p=0.55, out_p=0.05):
    """Corpus plus full-coverage solution with terms skewed to home clusters.

    Term t{i} is drawn with probability `in_p` inside its home cluster
    (i mod n_clusters) and `out_p` elsewhere. Returns (corpus, solution,
    doc_term_sets) with doc_term_sets indexed by document position.
    """
    rng = random.Random(seed)
    term_names = [f"t{i:03d}" for i in range(n_terms)]
    home = [i % n_clusters for i in range(n_terms)]
    cluster_of = [d * n_clusters // n_docs for d in range(n_docs)]
    records = []
    for d in range(n_docs):
        terms = [
            term_names[t]
            for t in range(n_terms)
            if rng.random() < (in_p if home[t] == cluster_of[d] else out_p)
        ]
        records.append((f"d{d:04d}", terms))
    corpus = load_corpus(records)
    pairs = [(f"d{d:04d}", f"c{cluster_of[d]}") for d in range(n_docs)]
    solution = load_solution(corpus, pairs, "planted")
    doc_term_sets = [set(terms) for _, terms in records]
    return corpus, solution, doc_term_sets


def random_cell_counts(rng, max_total=50):
    """Random non-degenerate 2x2 contingency counts with n_total <= max_total."""
    n = rng.randint(1, max_total)
    cuts = sorted(rng.randint(0, n) for _ in range(3))
    n11 = cuts[0]
    n10 = cuts[1] - cuts[0]
    n01 = cuts[2] - cuts[1]
    n00 = n - cuts[2]
    return n11, n10, n01, n00


def swap_similarity_samples(n_replicates, fractions, seed, n_docs=90, region_terms=8):
    """Fingerprint similarity of a base cluster vs. progressively swapped copies.

    Documents live in three equal regions with region-specific vocabulary;
    the base cluster is region 0. A swapped copy replaces a fraction of the
    base documents with uniform picks from the other regions, so more
    swapping means less lexical overlap. Returns [(fraction, similarity)].
    """
    samples = []
    region_size = n_docs // 3
    base_docs = set(range(region_size))
    outside = list(range(region_size, n_docs))
    for rep in range(n_replicates):
        rng = random.Random(seed + rep)
        records = []
        for d in range(n_docs):
            region = min(d // region_size, 2)
            terms = [
                f"r{region}t{j}" for j in range(region_terms) if rng.random() < 0.6
            ]
            terms += [f"bg{j}" for j in range(4) if rng.random() < 0.2]
            records.append((f"d{d:03d}", terms))
        corpus = load_corpus(records)
        labels = tuple(sorted(corpus.terms))
        axis = LabelAxis(order=labels, tour_cost=0.0, method=OrderMethod.EXACT)

        base_solution = load_solution(
            corpus, [(f"d{d:03d}", "base") for d in sorted(base_docs)], "base"
        )
        base_fp = make_fingerprint(corpus, base_solution, "base", axis)
        for frac in fractions:
            n_swap = round(frac * len(base_docs))
            swapped_out = rng.sample(sorted(base_docs), n_swap)
            swapped_in = rng.sample(outside, n_swap)
            docs = (base_docs - set(swapped_out)) | set(swapped_in)
            solution = load_solution(
                corpus, [(f"d{d:03d}", "swap") for d in sorted(docs)], f"swap{rep}_{frac}"
            )
            fp = make_fingerprint(corpus, solution, "swap", axis)
            samples.append((frac, fingerprint_similarity(base_fp, fp)))
    return samples


def build_grb_fixture(seed=7):
    """Four solutions sharing one near-duplicate high-overlap cluster.

    Core documents 0..29 carry a dedicated term family; each solution's
    "focus" cluster keeps 26 of the 30 core documents (pairwise Jaccard
    22/30 by construction) while the remaining documents are partitioned
    into per-solution random clusters with their own vocabularies.
    """
    rng = random.Random(seed)
    n_core = 30
    n_docs = 150
    records = []
    for d in range(n_docs):
        terms = []
        if d < n_core:
            terms += [f"focus{j}" for j in range(5) if rng.random() < 0.75]
        else:
            region = (d - n_core) * 4 // (n_docs - n_core)
            terms += [f"side{region}t{j}" for j in range(5) if rng.random() < 0.55]
        terms += [f"bg{j}" for j in range(3) if rng.random() < 0.15]
        if not terms:
            terms = ["bg0"]
        records.append((f"d{d:03d}", terms))
    corpus = load_corpus(records)

    solutions = []
    rest = list(range(n_core, n_docs))
    for s in range(4):
        dropped = set(range(4 * s, 4 * s + 4))
        focus_docs = [d for d in range(n_core) if d not in dropped]
        pairs = [(f"d{d:03d}", "focus") for d in focus_docs]
        shuffled = rest[:]
        random.Random(seed + 100 + s).shuffle(shuffled)
        for pos, d in enumerate(shuffled):
            pairs.append((f"d{d:03d}", f"other{pos % 3}"))
        solutions.append(load_solution(corpus, sorted(pairs), f"sol{s}"))
    return corpus, solutions


def build_seven_solution_fixture(seed=11):
    """Seven solutions with two planted cross-solution families plus noise.

    Documents 0..29 carry the "alpha" vocabulary and 30..59 the "beta"
    vocabulary; every solution keeps 26 of each family's 30 documents
    (per-solution drop windows) and partitions the remaining documents into
    three random clusters over regional side vocabularies. The planted
    structure is three groups: the alpha family, the beta family, and the
    pool of rest clusters.
    """
    rng = random.Random(seed)
    n_docs = 210
    records = []
    for d in range(n_docs):
        terms = []
        if d < 30:
            terms += [f"alpha{j}" for j in range(5) if rng.random() < 0.75]
        elif d < 60:
            terms += [f"beta{j}" for j in range(5) if rng.random() < 0.75]
        else:
            region = (d - 60) * 5 // 150
            terms += [f"side{region}t{j}" for j in range(5) if rng.random() < 0.55]
        terms += [f"bg{j}" for j in range(3) if rng.random() < 0.15]
        if not terms:
            terms = ["bg0"]
        records.append((f"d{d:03}", terms))

    solution_pairs = []
    rest = list(range(60, n_docs))
    for s in range(7):
        dropped_a = set(range(4 * s, 4 * s + 4))
        dropped_b = set(range(30 + 4 * s, 34 + 4 * s))
        pairs = [(f"d{d:03}", "fam_alpha") for d in range(30) if d not in dropped_a]
        pairs += [(f"d{d:03}", "fam_beta") for d in range(30, 60) if d not in dropped_b]
        shuffled = rest[:]
        random.Random(seed + 100 + s).shuffle(shuffled)
        pairs += [(f"d{d:03}", f"rest{pos % 3}") for pos, d in enumerate(shuffled)]
        solution_pairs.append(sorted(pairs))
    return records, solution_pairs


@pytest.fixture
def toy_corpus():
    """Eight documents, two natural topics, a handful of terms."""
    return make_corpus(
        [
            ("d0", ["black hole", "accretion", "x ray"]),
            ("d1", ["black hole", "x ray", "jet"]),
            ("d2", ["black hole", "accretion"]),
            ("d3", ["x ray", "jet", "black hole"]),
            ("d4", ["comet", "orbit", "ice"]),
            ("d5", ["comet", "orbit"]),
            ("d6", ["ice", "orbit", "dust"]),
            ("d7", ["comet", "dust"]),
        ]
    )


@pytest.fixture
def toy_solution(toy_corpus):
    pairs = [(f"d{i}", "hot" if i < 4 else "cold") for i in range(8)]
    return make_solution(toy_corpus, pairs, "toy")
