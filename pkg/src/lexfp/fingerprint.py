"""Cluster fingerprints over an ordered label axis, plus overlap metrics."""

import math
from collections.abc import Collection, Sequence
from dataclasses import dataclass

import numpy as np

from lexfp.corpus import ClusteringSolution, Corpus, contingency
from lexfp.labeling import UniverseMode, format_score
from lexfp.nmi import term_cluster_nmi
from lexfp.tsp import LabelAxis


@dataclass(frozen=True, eq=False)
class Fingerprint:
    """Signed NMI of one cluster against every axis label, in axis order.

    Fingerprints are only comparable when their `axis_id` matches; the
    similarity function enforces this rather than assuming it.
    """

    cluster_ref: tuple[str, str]  # (solution name, cluster id)
    values: np.ndarray
    axis_id: str

    @property
    def ref_label(self) -> str:
        return f"{self.cluster_ref[0]}:{self.cluster_ref[1]}"

    def __len__(self) -> int:
        return len(self.values)


def make_fingerprint(
    corpus: Corpus,
    solution: ClusteringSolution,
    cluster_id: str,
    axis: LabelAxis,
    universe_mode: UniverseMode = UniverseMode.ALL,
) -> Fingerprint:
    """Score one cluster against every axis label.

    The default universe is all corpus documents; `UniverseMode.COVERED`
    restricts to the solution's covered documents for sensitivity analysis.
    """
    docs = solution.cluster_docs(cluster_id)
    universe = None if universe_mode is UniverseMode.ALL else solution.covered_docs
    values = np.empty(len(axis.order), dtype=np.float64)
    for pos, term in enumerate(axis.order):
        idx = corpus.terms.get(term)
        if idx is None:
            raise ValueError(f"axis/corpus mismatch: label {term!r} not in corpus")
        values[pos] = term_cluster_nmi(contingency(corpus, idx, docs, universe)).value
    return Fingerprint(
        cluster_ref=(solution.name, cluster_id),
        values=values,
        axis_id=axis.axis_id,
    )


def fingerprint_similarity(a: Fingerprint, b: Fingerprint) -> float:
    """Cosine similarity of two fingerprints on the same axis.

    An all-zero fingerprint has no direction, so any comparison against it
    is defined as 0.
    """
    if a.axis_id != b.axis_id:
        raise ValueError(f"axis mismatch: {a.axis_id} vs {b.axis_id}")
    na = math.sqrt(float(a.values @ a.values))
    nb = math.sqrt(float(b.values @ b.values))
    if na == 0.0 or nb == 0.0:
        return 0.0
    sim = float(a.values @ b.values) / (na * nb)
    return min(1.0, max(-1.0, sim))


def jaccard(a: Collection[int], b: Collection[int]) -> float:
    """|a & b| / |a | b|, with two empty sets giving 0."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def group_average_jaccard(clusters: Sequence[Collection[int]]) -> float:
    """Mean Jaccard over all unordered pairs of document sets."""
    if len(clusters) < 2:
        raise ValueError("need at least two clusters to average pairwise overlap")
    sets = [set(c) for c in clusters]
    total = 0.0
    pairs = 0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            total += jaccard(sets[i], sets[j])
            pairs += 1
    return total / pairs


def write_fingerprint_csv(fingerprints: Sequence[Fingerprint], axis: LabelAxis) -> str:
    """Matrix CSV: header row of axis terms, one `solution:cluster` row each."""
    import csv
    import io

    if not fingerprints:
        raise ValueError("no fingerprints to write")
    for fp in fingerprints:
        if fp.axis_id != axis.axis_id:
            raise ValueError(f"fingerprint {fp.ref_label} was computed on a different axis")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cluster", *axis.order])
    for fp in fingerprints:
        writer.writerow([fp.ref_label, *(format_score(v) for v in fp.values)])
    return buf.getvalue()
