"""Rank terms by signed NMI and assemble cross-solution common label sets."""

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

from lexfp.corpus import ClusteringSolution, Corpus, contingency
from lexfp.nmi import SignedNmiScore, term_cluster_nmi, term_solution_nmi


class UniverseMode(Enum):
    """Which documents probabilities are estimated over."""

    ALL = "all"
    COVERED = "covered"


@dataclass(frozen=True)
class LabelList:
    """Terms ranked for one owner (a cluster or a whole solution)."""

    owner: str
    entries: tuple[tuple[str, SignedNmiScore], ...]
    k: int


@dataclass(frozen=True)
class CommonLabelSet:
    """Terms that rank highly for at least `min_occurrence` solutions."""

    labels: frozenset[str]
    source_count: dict[str, int]
    per_solution_k: int


def _rank_key(by_magnitude: bool):
    if by_magnitude:
        return lambda item: (-abs(item[1].value), item[0])
    return lambda item: (-item[1].value, item[0])


def label_cluster(
    corpus: Corpus,
    solution: ClusteringSolution,
    cluster_id: str,
    k: int,
    universe_mode: UniverseMode = UniverseMode.ALL,
    by_magnitude: bool = False,
) -> LabelList:
    """Top-k labels for one cluster by signed NMI.

    Ranking uses the signed value by default, so a strongly under-represented
    "not about this" term never becomes a label; `by_magnitude=True` is a
    diagnostic mode. Ties break on the ascending term string, which makes the
    output deterministic.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    docs = solution.cluster_docs(cluster_id)
    universe = None if universe_mode is UniverseMode.ALL else solution.covered_docs
    scored = [
        (term, term_cluster_nmi(contingency(corpus, idx, docs, universe)))
        for term, idx in corpus.terms.items()
    ]
    entries = tuple(sorted(scored, key=_rank_key(by_magnitude))[:k])
    return LabelList(owner=f"{solution.name}:{cluster_id}", entries=entries, k=k)


def label_solution(
    corpus: Corpus,
    solution: ClusteringSolution,
    k: int,
    by_magnitude: bool = False,
) -> LabelList:
    """Top-k most informative terms for a whole solution (covered universe)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scored = [
        (term, term_solution_nmi(corpus, idx, solution))
        for term, idx in corpus.terms.items()
    ]
    entries = tuple(sorted(scored, key=_rank_key(by_magnitude))[:k])
    return LabelList(owner=solution.name, entries=entries, k=k)


def common_labels(
    lists: Sequence[LabelList],
    min_occurrence: int = 2,
    per_solution_k: int = 50,
) -> CommonLabelSet:
    """Union the top labels of each solution, kept when enough solutions agree.

    Invariant under permuting the input lists; duplicates are removed by
    exact string, nothing fuzzier.
    """
    if len(lists) < 2:
        raise ValueError("common labels need at least two solution label lists")
    counts: Counter[str] = Counter()
    for label_list in lists:
        for term, _ in label_list.entries[:per_solution_k]:
            counts[term] += 1
    kept = {term: c for term, c in sorted(counts.items()) if c >= min_occurrence}
    return CommonLabelSet(
        labels=frozenset(kept),
        source_count=kept,
        per_solution_k=per_solution_k,
    )


def format_score(value: float) -> str:
    """Six-decimal fixed format with -0.000000 normalised away."""
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def write_labels_tsv(lists: Iterable[LabelList]) -> str:
    """owner<TAB>rank<TAB>term<TAB>nmi rows, rank starting at 1."""
    lines = []
    for label_list in lists:
        for rank, (term, score) in enumerate(label_list.entries, start=1):
            lines.append(f"{label_list.owner}\t{rank}\t{term}\t{format_score(score.value)}")
    return "\n".join(lines) + "\n"


def write_labels_table(
    lists: Sequence[LabelList],
    sizes: Mapping[str, int] | None = None,
) -> str:
    """Human-readable table: one row per owner with size and comma-joined labels."""
    rows = [("owner", "size", "labels")]
    for label_list in lists:
        size = ""
        if sizes is not None and label_list.owner in sizes:
            size = str(sizes[label_list.owner])
        rows.append((label_list.owner, size, ", ".join(t for t, _ in label_list.entries)))
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    lines = [f"{r[0]:<{w0}}  {r[1]:>{w1}}  {r[2]}".rstrip() for r in rows]
    return "\n".join(lines) + "\n"
