"""Affinity-propagation grouping of fingerprints into clusters of clusters.

Implemented in-repo so the whole pipeline is self-contained and testable:
message passing with damped responsibility/availability updates, exemplars
read off the diagonal, and a stable-exemplar window as the convergence
test. The algorithm is deterministic: no jitter is added to the input, and
every reduction runs in fixed index order.
"""

from collections.abc import Collection, Sequence
from dataclasses import dataclass

import numpy as np

from lexfp.fingerprint import Fingerprint, fingerprint_similarity, group_average_jaccard
from lexfp.tsp import LabelAxis

MEDIAN = "median"  # ApConfig.preference sentinel

SIMILARITY_KINDS = ("cosine", "neg_sq_euclidean")


@dataclass(frozen=True)
class ApConfig:
    """Affinity propagation parameters (defaults mirror the common ones)."""

    damping: float = 0.5
    max_iter: int = 200
    convergence_iter: int = 15
    preference: float | str = MEDIAN

    def __post_init__(self) -> None:
        if not 0.5 <= self.damping < 1.0:
            raise ValueError(f"damping must be in [0.5, 1), got {self.damping}")
        if self.max_iter < 1 or self.convergence_iter < 1:
            raise ValueError("max_iter and convergence_iter must be >= 1")
        if self.convergence_iter > self.max_iter:
            raise ValueError("convergence_iter must be <= max_iter")
        if isinstance(self.preference, str) and self.preference != MEDIAN:
            raise ValueError(f"preference must be a number or {MEDIAN!r}")


@dataclass(frozen=True)
class MetaClustering:
    """Exemplar set and total membership map over the input indices."""

    exemplars: tuple[int, ...]
    membership: dict[int, int]
    converged: bool
    iterations_run: int

    def groups(self) -> dict[int, list[int]]:
        """Exemplar index -> sorted member indices (exemplar included)."""
        out: dict[int, list[int]] = {e: [] for e in self.exemplars}
        for i in sorted(self.membership):
            out[self.membership[i]].append(i)
        return out


def similarity_matrix(fingerprints: Sequence[Fingerprint], kind: str = "cosine") -> np.ndarray:
    """Pairwise fingerprint similarities as affinity-propagation input."""
    if kind not in SIMILARITY_KINDS:
        raise ValueError(f"unknown similarity kind: {kind!r}")
    n = len(fingerprints)
    sim = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i, n):
            if kind == "cosine":
                value = fingerprint_similarity(fingerprints[i], fingerprints[j])
            else:
                if fingerprints[i].axis_id != fingerprints[j].axis_id:
                    raise ValueError("fingerprints were computed on different axes")
                diff = fingerprints[i].values - fingerprints[j].values
                value = -float(diff @ diff)
            sim[i, j] = value
            sim[j, i] = value
    return sim


def affinity_propagation(similarity: np.ndarray, config: ApConfig = ApConfig()) -> MetaClustering:
    """Group points by standard affinity-propagation message passing.

    The diagonal of `similarity` is overwritten by the preference. If the
    exemplar set never stabilises within `max_iter` iterations the last
    exemplar set seen is returned with `converged=False`; this never raises
    on oscillation.
    """
    s = np.array(similarity, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("similarity matrix must be square")
    if not np.all(np.isfinite(s)):
        raise ValueError("similarity matrix contains NaN or Inf")
    n = s.shape[0]
    if n == 0:
        raise ValueError("similarity matrix is empty")
    if n == 1:
        return MetaClustering(exemplars=(0,), membership={0: 0}, converged=True, iterations_run=0)

    if config.preference == MEDIAN:
        off_diagonal = s[~np.eye(n, dtype=bool)]
        preference = float(np.median(off_diagonal))
    else:
        preference = float(config.preference)
    np.fill_diagonal(s, preference)

    responsibility = np.zeros((n, n))
    availability = np.zeros((n, n))
    lam = config.damping
    rows = np.arange(n)
    last_exemplars: frozenset[int] = frozenset()
    last_nonempty: frozenset[int] = frozenset()
    stable = 0
    converged = False
    iterations = 0

    for iterations in range(1, config.max_iter + 1):
        # r(i,k) <- s(i,k) - max_{k' != k} (a(i,k') + s(i,k'))
        combined = availability + s
        best_idx = np.argmax(combined, axis=1)
        best = combined[rows, best_idx]
        combined[rows, best_idx] = -np.inf
        second = np.max(combined, axis=1)
        r_new = s - best[:, None]
        r_new[rows, best_idx] = s[rows, best_idx] - second
        responsibility = lam * responsibility + (1.0 - lam) * r_new

        # a(i,k) <- min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
        # a(k,k) <- sum_{i' != k} max(0, r(i',k))
        positive = np.maximum(responsibility, 0.0)
        np.fill_diagonal(positive, 0.0)
        column_sums = positive.sum(axis=0)
        a_new = np.minimum(0.0, responsibility.diagonal()[None, :] + column_sums[None, :] - positive)
        np.fill_diagonal(a_new, column_sums)
        availability = lam * availability + (1.0 - lam) * a_new

        diagonal = responsibility.diagonal() + availability.diagonal()
        exemplars = frozenset(np.flatnonzero(diagonal > 0.0).tolist())
        if exemplars:
            last_nonempty = exemplars
        if exemplars and exemplars == last_exemplars:
            stable += 1
        else:
            stable = 1 if exemplars else 0
        last_exemplars = exemplars
        if stable >= config.convergence_iter:
            converged = True
            break

    diagonal = responsibility.diagonal() + availability.diagonal()
    exemplar_list = sorted(np.flatnonzero(diagonal > 0.0).tolist())
    if not exemplar_list:
        exemplar_list = sorted(last_nonempty) or [int(np.argmax(diagonal))]

    exemplar_arr = np.array(exemplar_list)
    choice = np.argmax(s[:, exemplar_arr], axis=1)  # argmax ties pick the lowest exemplar
    membership = {i: int(exemplar_arr[choice[i]]) for i in range(n)}
    for e in exemplar_list:
        membership[e] = e
    return MetaClustering(
        exemplars=tuple(exemplar_list),
        membership=membership,
        converged=converged,
        iterations_run=iterations,
    )


def group_report(
    meta: MetaClustering,
    fingerprints: Sequence[Fingerprint],
    doc_sets: Sequence[Collection[int]],
    axis: LabelAxis,
    peak_quantile: float = 0.9,
) -> dict:
    """Per-group membership, overlap, and shared-peak summary (JSON-ready).

    A label is a shared peak of a group when every member's score at that
    axis position reaches the member's own `peak_quantile` threshold.
    Singleton groups have no pairwise overlap, reported as null.
    """
    if not fingerprints:
        raise ValueError("empty fingerprint list")
    if len(doc_sets) != len(fingerprints):
        raise ValueError("index mismatch: doc_sets and fingerprints differ in length")
    if set(meta.membership) != set(range(len(fingerprints))):
        raise ValueError("index mismatch: meta-clustering does not cover the fingerprints")
    if not 0.0 < peak_quantile < 1.0:
        raise ValueError("peak_quantile must be in (0, 1)")
    for fp in fingerprints:
        if fp.axis_id != axis.axis_id or len(fp.values) != len(axis.order):
            raise ValueError(f"fingerprint {fp.ref_label} was computed on a different axis")

    groups = []
    for group_id, (exemplar, members) in enumerate(sorted(meta.groups().items())):
        thresholds = [float(np.quantile(fingerprints[m].values, peak_quantile)) for m in members]
        shared = [
            axis.order[pos]
            for pos in range(len(axis.order))
            if all(fingerprints[m].values[pos] >= thr for m, thr in zip(members, thresholds))
        ]
        average_jaccard = None
        if len(members) >= 2:
            average_jaccard = group_average_jaccard([doc_sets[m] for m in members])
        groups.append(
            {
                "group_id": group_id,
                "exemplar": fingerprints[exemplar].ref_label,
                "members": [fingerprints[m].ref_label for m in members],
                "average_jaccard": average_jaccard,
                "shared_peaks": shared,
            }
        )
    return {
        "converged": meta.converged,
        "iterations_run": meta.iterations_run,
        "peak_quantile": peak_quantile,
        "n_groups": len(groups),
        "groups": groups,
    }


def write_metaclusters_tsv(meta: MetaClustering, fingerprints: Sequence[Fingerprint]) -> str:
    """solution:cluster<TAB>group_id<TAB>is_exemplar rows in input order."""
    group_ids = {exemplar: gid for gid, exemplar in enumerate(sorted(meta.groups()))}
    lines = []
    for i, fp in enumerate(fingerprints):
        exemplar = meta.membership[i]
        lines.append(f"{fp.ref_label}\t{group_ids[exemplar]}\t{1 if i == exemplar else 0}")
    return "\n".join(lines) + "\n"
