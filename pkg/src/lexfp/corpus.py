"""Document-term corpus and clustering-solution containers.

Term presence is binary per document: every probability downstream is an
event count over a chosen universe of documents divided by the universe
size. Corpora and solutions are immutable after construction and safe to
share across threads.
"""

import json
from collections.abc import Collection, Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path

CORPUS_CACHE_FORMAT = "lexfp-corpus-v1"


def normalize_term(term: str) -> str:
    """Lowercase a term and collapse internal whitespace to single spaces."""
    return " ".join(term.split()).lower()


@dataclass(frozen=True)
class Corpus:
    """An ordered document collection with binary term incidence.

    `terms` maps a normalized term string to its index; `incidence[i]` is
    the set of document indices containing term i. Term frequency inside a
    document is discarded at load time.
    """

    docs: tuple[str, ...]
    terms: dict[str, int]
    incidence: tuple[frozenset[int], ...]

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def term_strings(self) -> list[str]:
        """Term strings in index order."""
        out = [""] * len(self.terms)
        for term, idx in self.terms.items():
            out[idx] = term
        return out

    def term_index(self, term: str) -> int:
        key = normalize_term(term)
        if key not in self.terms:
            raise KeyError(f"term not in corpus: {term!r}")
        return self.terms[key]


def load_corpus(records: Iterable[tuple[str, Iterable[str]]]) -> Corpus:
    """Build a Corpus from (document id, term strings) records.

    Document order follows the input. Terms are normalized and incidence is
    deduplicated, so a term counts at most once per document. A document
    with no terms is accepted; it only ever contributes to absence cells.
    """
    docs: list[str] = []
    seen: set[str] = set()
    terms: dict[str, int] = {}
    incidence: list[set[int]] = []
    for doc_id, raw_terms in records:
        if doc_id in seen:
            raise ValueError(f"duplicate document id: {doc_id!r}")
        seen.add(doc_id)
        doc_index = len(docs)
        docs.append(doc_id)
        for raw in raw_terms:
            term = normalize_term(raw)
            if not term:
                raise ValueError(f"empty term in document {doc_id!r}")
            idx = terms.get(term)
            if idx is None:
                idx = len(terms)
                terms[term] = idx
                incidence.append(set())
            incidence[idx].add(doc_index)
    return Corpus(
        docs=tuple(docs),
        terms=terms,
        incidence=tuple(frozenset(s) for s in incidence),
    )


def iter_jsonl_records(lines: Iterable[str]) -> Iterator[tuple[str, list[str]]]:
    """Yield (id, terms) records from JSON-lines input, one object per document."""
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: malformed JSON record ({exc})") from None
        if not isinstance(obj, dict) or "id" not in obj or "terms" not in obj:
            raise ValueError(f'line {lineno}: expected an object with "id" and "terms"')
        doc_id, doc_terms = obj["id"], obj["terms"]
        if (
            not isinstance(doc_id, str)
            or not isinstance(doc_terms, list)
            or not all(isinstance(t, str) for t in doc_terms)
        ):
            raise ValueError(f'line {lineno}: "id" must be a string and "terms" a list of strings')
        yield doc_id, doc_terms


def iter_corpus_tsv_records(lines: Iterable[str]) -> Iterator[tuple[str, list[str]]]:
    """Yield (id, terms) from doc_id<TAB>term pairs, aggregating terms per document.

    Document order is first appearance; repeated doc ids are how this format
    attaches several terms to one document.
    """
    per_doc: dict[str, list[str]] = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.rstrip("\r\n")
        if not stripped.strip():
            continue
        parts = stripped.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ValueError(f"line {lineno}: expected doc_id<TAB>term")
        per_doc.setdefault(parts[0], []).append(parts[1])
    yield from per_doc.items()


def load_corpus_path(path: str | Path, fmt: str = "auto") -> Corpus:
    """Load a corpus from a JSON-lines or doc/term TSV file.

    `fmt` is "jsonl", "tsv", or "auto" (by extension, falling back to a
    first-character sniff).
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    if fmt == "auto":
        lowered = str(path).lower()
        if lowered.endswith((".jsonl", ".ndjson", ".json")):
            fmt = "jsonl"
        elif lowered.endswith(".tsv"):
            fmt = "tsv"
        else:
            first = next((ln for ln in lines if ln.strip()), "")
            fmt = "jsonl" if first.lstrip().startswith("{") else "tsv"
    if fmt == "jsonl":
        return load_corpus(iter_jsonl_records(lines))
    if fmt == "tsv":
        return load_corpus(iter_corpus_tsv_records(lines))
    raise ValueError(f"unknown corpus format: {fmt!r}")


@dataclass(frozen=True)
class ClusteringSolution:
    """A hard partition of a (possibly proper) subset of the corpus.

    Documents absent from `assignment` are uncovered; solution-level
    probabilities are estimated over `covered_docs` only.
    """

    name: str
    assignment: dict[int, str]
    clusters: dict[str, frozenset[int]]
    covered_docs: frozenset[int]
    duplicate_assignments: int = 0

    @property
    def n_covered(self) -> int:
        return len(self.covered_docs)

    def cluster_ids(self) -> list[str]:
        return sorted(self.clusters)

    def cluster_docs(self, cluster_id: str) -> frozenset[int]:
        if cluster_id not in self.clusters:
            raise KeyError(f"unknown cluster id: {cluster_id!r} in solution {self.name!r}")
        return self.clusters[cluster_id]


def load_solution(
    corpus: Corpus,
    records: Iterable[tuple[str, str]],
    name: str,
) -> ClusteringSolution:
    """Build a ClusteringSolution from (document id, cluster id) records.

    A document repeated with the same cluster is accepted and counted in
    `duplicate_assignments`; repeated with a different cluster it is
    rejected (hard partitions only).
    """
    index = {doc_id: i for i, doc_id in enumerate(corpus.docs)}
    assignment: dict[int, str] = {}
    duplicates = 0
    for doc_id, cluster_id in records:
        if doc_id not in index:
            raise ValueError(f"unknown document id: {doc_id!r}")
        if not cluster_id:
            raise ValueError(f"empty cluster id for document {doc_id!r}")
        i = index[doc_id]
        prev = assignment.get(i)
        if prev is None:
            assignment[i] = cluster_id
        elif prev == cluster_id:
            duplicates += 1
        else:
            raise ValueError(
                f"document {doc_id!r} assigned to both {prev!r} and {cluster_id!r}"
            )
    if not assignment:
        raise ValueError(f"solution {name!r} covers zero documents")
    members: dict[str, set[int]] = {}
    for i, cid in assignment.items():
        members.setdefault(cid, set()).add(i)
    return ClusteringSolution(
        name=name,
        assignment=dict(assignment),
        clusters={cid: frozenset(docs) for cid, docs in sorted(members.items())},
        covered_docs=frozenset(assignment),
        duplicate_assignments=duplicates,
    )


def iter_solution_tsv(lines: Iterable[str]) -> Iterator[tuple[str, str]]:
    """Yield (doc_id, cluster_id) pairs from TSV; '#'-prefixed lines are comments."""
    for lineno, line in enumerate(lines, start=1):
        stripped = line.rstrip("\r\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ValueError(f"line {lineno}: expected doc_id<TAB>cluster_id")
        yield parts[0], parts[1]


def load_solution_path(corpus: Corpus, path: str | Path, name: str | None = None) -> ClusteringSolution:
    """Load a clustering solution from a doc_id<TAB>cluster_id TSV file."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    if name is None:
        name = Path(path).stem
    return load_solution(corpus, iter_solution_tsv(lines), name)


@dataclass(frozen=True)
class ContingencyCell:
    """2x2 presence/membership counts over a universe of documents."""

    n11: int
    n10: int
    n01: int
    n00: int
    n_total: int

    def __post_init__(self) -> None:
        counts = (self.n11, self.n10, self.n01, self.n00)
        if any(c < 0 for c in counts) or sum(counts) != self.n_total:
            raise ValueError("contingency counts must be non-negative and sum to n_total")

    @property
    def term_count(self) -> int:
        return self.n11 + self.n10

    @property
    def group_count(self) -> int:
        return self.n11 + self.n01


def contingency(
    corpus: Corpus,
    term: int,
    doc_set: Collection[int],
    universe: Collection[int] | None,
) -> ContingencyCell:
    """Count the four term-presence x membership cells over a universe.

    `universe=None` means all corpus documents; otherwise only documents in
    `universe` count and `doc_set` must be a subset of it. This is a pure
    read and callable concurrently without coordination.
    """
    if not 0 <= term < corpus.n_terms:
        raise ValueError(f"term index out of range: {term}")
    inc = corpus.incidence[term]
    ds = frozenset(doc_set)
    if universe is None:
        if corpus.n_docs == 0:
            raise ValueError("empty universe: corpus has no documents")
        if ds and (min(ds) < 0 or max(ds) >= corpus.n_docs):
            raise ValueError("doc_set contains unknown document indices")
        n_total = corpus.n_docs
        inc_u = inc
    else:
        uni = frozenset(universe)
        if not uni:
            raise ValueError("empty universe: probabilities are undefined")
        if not ds <= uni:
            raise ValueError("doc_set must be a subset of the universe")
        n_total = len(uni)
        inc_u = inc & uni
    n11 = len(inc_u & ds)
    n10 = len(inc_u) - n11
    n01 = len(ds) - n11
    return ContingencyCell(n11, n10, n01, n_total - n11 - n10 - n01, n_total)


def write_corpus_cache(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus snapshot; `read_corpus_cache` restores it bit-identically."""
    payload = {
        "format": CORPUS_CACHE_FORMAT,
        "docs": list(corpus.docs),
        "terms": corpus.term_strings(),
        "incidence": [sorted(s) for s in corpus.incidence],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, separators=(",", ":"))
        fh.write("\n")


def read_corpus_cache(path: str | Path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or payload.get("format") != CORPUS_CACHE_FORMAT:
        raise ValueError(f"not a corpus cache file: {path}")
    return Corpus(
        docs=tuple(payload["docs"]),
        terms={t: i for i, t in enumerate(payload["terms"])},
        incidence=tuple(frozenset(ix) for ix in payload["incidence"]),
    )
