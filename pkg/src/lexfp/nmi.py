"""Signed normalised mutual information between terms, clusters, and solutions.

Logarithms are base 2 throughout, so every score is in bits. Probabilities
are exact count ratios; zero-probability summands contribute exactly 0 (the
x*log2(x) -> 0 limit) and no smoothing is applied anywhere. All functions
here are pure and safe to call from parallel workers.
"""

import math
from dataclasses import dataclass

from lexfp.corpus import ClusteringSolution, ContingencyCell, Corpus

# Rounding can push an exactly-zero MI a hair below zero; anything worse
# than this floor is a real bug and is left visible.
_MI_ROUNDING_FLOOR = -1e-12


@dataclass(frozen=True)
class SignedNmiScore:
    """A normalised mutual information value with an association direction.

    `value` lies in [-1, 1] and is negative exactly when `sign_negative` is
    set, i.e. when the observed in-group occurrence of the term fell
    strictly below the expectation from the marginals. `raw_mi` is the
    unnormalised mutual information in bits.
    """

    value: float
    raw_mi: float
    sign_negative: bool


def entropy_binary(p: float) -> float:
    """Entropy in bits of a two-outcome event with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    h = 0.0
    if p > 0.0:
        h -= p * math.log2(p)
    q = 1.0 - p
    if q > 0.0:
        h -= q * math.log2(q)
    return h


def _summand(p_joint: float, p_a: float, p_b: float) -> float:
    if p_joint == 0.0:
        return 0.0
    return p_joint * math.log2(p_joint / (p_a * p_b))


def term_cluster_mi(cell: ContingencyCell) -> float:
    """Mutual information in bits between term presence and group membership."""
    if cell.n_total <= 0:
        raise ValueError("contingency cell has an empty universe")
    n = cell.n_total
    pt1 = cell.term_count / n
    pt0 = (n - cell.term_count) / n
    pu1 = cell.group_count / n
    pu0 = (n - cell.group_count) / n
    mi = (
        _summand(cell.n11 / n, pt1, pu1)
        + _summand(cell.n10 / n, pt1, pu0)
        + _summand(cell.n01 / n, pt0, pu1)
        + _summand(cell.n00 / n, pt0, pu0)
    )
    return 0.0 if _MI_ROUNDING_FLOOR < mi < 0.0 else mi


def occurrence_below_expectation(cell: ContingencyCell) -> bool:
    """True when the term occurs in the group strictly less than the marginals predict.

    A group holding 10% of the universe is expected to hold 10% of the
    term's occurrences; the comparison is exact integer arithmetic, so no
    float threshold is involved.
    """
    return cell.n11 * cell.n_total < cell.term_count * cell.group_count


def term_cluster_nmi(cell: ContingencyCell) -> SignedNmiScore:
    """Signed NMI between term presence and group membership.

    The magnitude is 2*I/(H(term)+H(group)); a degenerate denominator of 0
    yields exactly 0. Under-represented terms (see
    `occurrence_below_expectation`) carry a negative sign.
    """
    mi = term_cluster_mi(cell)
    n = cell.n_total
    denom = entropy_binary(cell.term_count / n) + entropy_binary(cell.group_count / n)
    value = 0.0 if denom == 0.0 else min(1.0, 2.0 * mi / denom)
    negative = occurrence_below_expectation(cell)
    if negative:
        value = -value
    if value == 0.0:
        value = 0.0  # normalise -0.0
    return SignedNmiScore(value=value, raw_mi=mi, sign_negative=negative)


def solution_entropy(solution: ClusteringSolution) -> float:
    """Entropy in bits of the cluster-membership distribution over covered docs."""
    n = solution.n_covered
    h = 0.0
    for cid in sorted(solution.clusters):  # fixed order keeps float sums reproducible
        p = len(solution.clusters[cid]) / n
        h -= p * math.log2(p)
    return h


def term_solution_mi(corpus: Corpus, term: int, solution: ClusteringSolution) -> float:
    """Mutual information in bits between a term and a whole clustering solution.

    Probabilities are estimated over covered documents only: documents
    without a cluster assignment do not contribute to any event count.
    """
    if not 0 <= term < corpus.n_terms:
        raise ValueError(f"term index out of range: {term}")
    if solution.n_covered <= 0:
        raise ValueError("solution covers zero documents")
    covered = solution.covered_docs
    n = len(covered)
    inc = corpus.incidence[term] & covered
    pt1 = len(inc) / n
    pt0 = (n - len(inc)) / n
    mi = 0.0
    for cid in sorted(solution.clusters):
        docs = solution.clusters[cid]
        pu = len(docs) / n
        n_present = len(inc & docs)
        mi += _summand(n_present / n, pt1, pu)
        mi += _summand((len(docs) - n_present) / n, pt0, pu)
    return 0.0 if _MI_ROUNDING_FLOOR < mi < 0.0 else mi


def term_solution_nmi(corpus: Corpus, term: int, solution: ClusteringSolution) -> SignedNmiScore:
    """NMI between a term and a whole solution, over covered documents.

    Solution-level scores are unsigned: a term can sit above expectation in
    one cluster and below it in another at the same time, and both
    deviations inform the solution, so no direction is assigned here. The
    per-cluster sign machinery lives in `term_cluster_nmi`.
    """
    mi = term_solution_mi(corpus, term, solution)
    covered = solution.covered_docs
    ht = entropy_binary(len(corpus.incidence[term] & covered) / len(covered))
    denom = ht + solution_entropy(solution)
    value = 0.0 if denom == 0.0 else min(1.0, 2.0 * mi / denom)
    return SignedNmiScore(value=value, raw_mi=mi, sign_negative=False)
