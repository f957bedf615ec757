"""Embed common labels as vectors and order them as a minimum-distance path.

The ordering objective is an open path, not a cycle: the labels become a
one-dimensional axis, so only consecutive-pair distances count. Both
solvers reduce the path problem to a cycle problem through a virtual depot
node at distance 0 from every label (the standard reduction); the exact
solver does this implicitly by letting the dynamic program start anywhere.
"""

import hashlib
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from lexfp.corpus import Corpus
from lexfp.labeling import CommonLabelSet

_EXACT_MAX = 12
_IMPROVE_EPS = 1e-12


class VectorProvenance(Enum):
    DOC_INCIDENCE = "doc_incidence"
    EXTERNAL = "external"


class OrderMethod(Enum):
    EXACT = "EXACT"
    CHAINED_LK = "CHAINED_LK"


@dataclass(frozen=True)
class TermVectorSpace:
    """Dense vectors for a set of terms, all sharing one dimensionality.

    Zero vectors are rejected at build time because their cosine distance
    is undefined.
    """

    dim: int
    vectors: dict[str, np.ndarray]
    provenance: VectorProvenance

    def __post_init__(self) -> None:
        for term, vec in self.vectors.items():
            if vec.shape != (self.dim,):
                raise ValueError(f"vector for {term!r} has dim {vec.shape}, expected ({self.dim},)")
            if not np.any(vec):
                raise ValueError(f"zero vector for term {term!r}")


@dataclass(frozen=True)
class LabelAxis:
    """An ordering of the common labels: the shared lexical coordinate system.

    `tour_cost` is the sum of consecutive-pair distances along the open
    path. `seed` is None for the exact solver.
    """

    order: tuple[str, ...]
    tour_cost: float
    method: OrderMethod
    seed: int | None = None

    @property
    def axis_id(self) -> str:
        digest = hashlib.sha256("\n".join(self.order).encode("utf-8")).hexdigest()
        return digest[:12]

    def __len__(self) -> int:
        return len(self.order)


def build_term_space(corpus: Corpus, labels: CommonLabelSet | Iterable[str]) -> TermVectorSpace:
    """Document-incidence indicator vectors for each label (dim = n_docs)."""
    label_set = labels.labels if isinstance(labels, CommonLabelSet) else set(labels)
    vectors: dict[str, np.ndarray] = {}
    for term in sorted(label_set):
        idx = corpus.terms.get(term)
        if idx is None:
            raise ValueError(f"label not present in corpus: {term!r}")
        vec = np.zeros(corpus.n_docs, dtype=np.float64)
        vec[sorted(corpus.incidence[idx])] = 1.0
        vectors[term] = vec
    return TermVectorSpace(dim=corpus.n_docs, vectors=vectors, provenance=VectorProvenance.DOC_INCIDENCE)


def load_external_vectors(lines: Iterable[str]) -> TermVectorSpace:
    """Parse a term<TAB>v1<TAB>...<TAB>vdim file into a vector space."""
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.rstrip("\r\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) < 2:
            raise ValueError(f"line {lineno}: expected term<TAB>v1<TAB>...")
        term = parts[0]
        try:
            values = np.array([float(x) for x in parts[1:]], dtype=np.float64)
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric vector component") from None
        if dim is None:
            dim = values.size
        elif values.size != dim:
            raise ValueError(f"line {lineno}: vector for {term!r} has dim {values.size}, expected {dim}")
        if not np.any(values):
            raise ValueError(f"line {lineno}: zero vector for term {term!r}")
        vectors[term] = values
    if dim is None:
        raise ValueError("no vectors in input")
    return TermVectorSpace(dim=dim, vectors=vectors, provenance=VectorProvenance.EXTERNAL)


def load_external_vectors_path(path: str | Path) -> TermVectorSpace:
    with open(path, encoding="utf-8") as fh:
        return load_external_vectors(fh)


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cos(a, b), in [0, 2]; both vectors must be nonzero and equal-dim."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = math.sqrt(float(a @ a))
    nb = math.sqrt(float(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine distance of a zero vector is undefined")
    d = 1.0 - float(a @ b) / (na * nb)
    if d < 1e-12:  # colinear vectors must give exactly 0, not rounding residue
        return 0.0
    return min(2.0, d)


def distance_matrix(labels: Sequence[str], space: TermVectorSpace) -> np.ndarray:
    """Symmetric pairwise cosine distances with an exactly-zero diagonal."""
    missing = [t for t in labels if t not in space.vectors]
    if missing:
        raise ValueError(f"labels missing from vector space: {missing}")
    vecs = np.stack([space.vectors[t] for t in labels])
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    unit = vecs / norms
    d = 1.0 - unit @ unit.T
    d[d < 1e-12] = 0.0  # same colinearity snap as cosine_distance
    np.clip(d, 0.0, 2.0, out=d)
    d = np.triu(d, 1)
    d = d + d.T  # exact symmetry regardless of BLAS rounding
    return d


def path_cost(order: Sequence[str], space: TermVectorSpace) -> float:
    """Sum of consecutive-pair cosine distances along an open path."""
    total = 0.0
    for a, b in zip(order, order[1:]):
        total += cosine_distance(space.vectors[a], space.vectors[b])
    return total


def _canonical_orientation(order: list[str]) -> list[str]:
    # A path and its reverse are the same axis; keep the lexicographically
    # smaller reading so output is orientation-free.
    rev = order[::-1]
    return rev if rev < order else order


def order_exact(labels: Sequence[str], space: TermVectorSpace) -> LabelAxis:
    """Globally optimal open path over at most 12 labels.

    Uses the Held-Karp dynamic program over (visited-set, endpoint) states,
    which searches every permutation implicitly and returns the same
    optimum as explicit enumeration in O(n^2 * 2^n) instead of O(n!).
    """
    labels = list(labels)
    n = len(labels)
    if not 2 <= n <= _EXACT_MAX:
        raise ValueError(f"order_exact handles 2..{_EXACT_MAX} labels, got {n}")
    if len(set(labels)) != n:
        raise ValueError("duplicate labels")
    d = distance_matrix(labels, space).tolist()
    size = 1 << n
    inf = math.inf
    dp = [[inf] * n for _ in range(size)]
    parent = [[-1] * n for _ in range(size)]
    for j in range(n):
        dp[1 << j][j] = 0.0
    for subset in range(size):
        row = dp[subset]
        for j in range(n):
            base = row[j]
            if base == inf or not subset & (1 << j):
                continue
            dj = d[j]
            for k in range(n):
                if subset & (1 << k):
                    continue
                nxt = subset | (1 << k)
                cost = base + dj[k]
                if cost < dp[nxt][k]:
                    dp[nxt][k] = cost
                    parent[nxt][k] = j
    full = size - 1
    end = min(range(n), key=lambda j: (dp[full][j], j))
    path = []
    subset, j = full, end
    while j != -1:
        path.append(j)
        prev = parent[subset][j]
        subset &= ~(1 << j)
        j = prev
    path.reverse()
    order = _canonical_orientation([labels[i] for i in path])
    cost = sum(d[labels.index(a)][labels.index(b)] for a, b in zip(order, order[1:]))
    return LabelAxis(order=tuple(order), tour_cost=cost, method=OrderMethod.EXACT, seed=None)


def _nearest_neighbour_cycle(d: list[list[float]], start: int) -> list[int]:
    m = len(d)
    unvisited = set(range(m))
    unvisited.remove(start)
    tour = [start]
    current = start
    while unvisited:
        row = d[current]
        best, best_d = -1, math.inf
        for cand in sorted(unvisited):  # ascending scan makes ties deterministic
            dist = row[cand]
            if dist < best_d:
                best, best_d = cand, dist
        tour.append(best)
        unvisited.remove(best)
        current = best
    return tour


def _cycle_cost(tour: list[int], d: list[list[float]]) -> float:
    total = 0.0
    for i, node in enumerate(tour):
        total += d[node][tour[(i + 1) % len(tour)]]
    return total


def _two_opt_pass(tour: list[int], d: list[list[float]]) -> bool:
    """Apply improving 2-opt edge exchanges in place; True if any applied."""
    m = len(tour)
    improved = False
    for i in range(m - 1):
        a = tour[i]
        b = tour[i + 1]
        da = d[a]
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue  # would only reverse the whole cycle
            c = tour[j]
            e = tour[(j + 1) % m]
            delta = da[c] + d[b][e] - da[b] - d[c][e]
            if delta < -_IMPROVE_EPS:
                tour[i + 1 : j + 1] = tour[i + 1 : j + 1][::-1]
                b = tour[i + 1]
                improved = True
    return improved


def _or_opt_pass(tour: list[int], d: list[list[float]]) -> bool:
    """Relocate one segment of length 1..3; first improvement wins."""
    m = len(tour)
    for seg_len in (1, 2, 3):
        if m - seg_len < 2:
            continue
        for i in range(m - seg_len + 1):
            j_end = i + seg_len - 1
            prev = tour[i - 1]
            nxt = tour[(j_end + 1) % m]
            s0 = tour[i]
            s1 = tour[j_end]
            gain = d[prev][s0] + d[s1][nxt] - d[prev][nxt]
            if gain <= _IMPROVE_EPS:
                continue
            rest = tour[:i] + tour[j_end + 1 :]
            segment = tour[i : j_end + 1]
            for p in range(len(rest)):
                a = rest[p]
                b = rest[(p + 1) % len(rest)]
                added = d[a][s0] + d[s1][b] - d[a][b]
                if added < gain - _IMPROVE_EPS:
                    tour[:] = rest[: p + 1] + segment + rest[p + 1 :]
                    return True
    return False


def _local_search(tour: list[int], d: list[list[float]]) -> list[int]:
    tour = list(tour)
    while True:
        if _two_opt_pass(tour, d):
            continue
        if _or_opt_pass(tour, d):
            continue
        return tour


def _double_bridge(tour: list[int], rng: random.Random) -> list[int]:
    m = len(tour)
    if m < 4:
        return list(tour)
    p1, p2, p3 = sorted(rng.sample(range(1, m), 3))
    return tour[:p1] + tour[p2:p3] + tour[p1:p2] + tour[p3:]


def order_chained_lk(
    labels: Sequence[str],
    space: TermVectorSpace,
    seed: int = 42,
    kicks: int = 20,
) -> LabelAxis:
    """Open-path ordering by chained local search, deterministic per seed.

    Construction is nearest-neighbour from a seeded random start; the local
    search interleaves 2-opt and Or-opt (segment lengths 1-3) until neither
    improves; then `kicks` rounds of double-bridge perturbation re-optimise
    from the incumbent, keeping the best tour seen. A virtual depot node at
    distance 0 to all labels turns the path objective into a cycle
    objective; the depot is cut out before returning.
    """
    labels = list(labels)
    n = len(labels)
    if n < 2:
        raise ValueError("need at least 2 labels to order")
    if len(set(labels)) != n:
        raise ValueError("duplicate labels")
    if kicks < 0:
        raise ValueError("kicks must be >= 0")
    base = distance_matrix(labels, space)
    d = np.zeros((n + 1, n + 1))
    d[:n, :n] = base
    d = d.tolist()  # python list indexing is faster for the scalar-heavy search

    rng = random.Random(seed)
    tour = _nearest_neighbour_cycle(d, rng.randrange(n + 1))
    tour = _local_search(tour, d)
    best = tour
    best_cost = _cycle_cost(tour, d)
    for _ in range(kicks):
        candidate = _local_search(_double_bridge(best, rng), d)
        cost = _cycle_cost(candidate, d)
        if cost < best_cost - _IMPROVE_EPS:
            best, best_cost = candidate, cost

    depot = best.index(n)
    sequence = best[depot + 1 :] + best[:depot]
    order = _canonical_orientation([labels[i] for i in sequence])
    cost = sum(base[labels.index(a)][labels.index(b)] for a, b in zip(order, order[1:]))
    return LabelAxis(order=tuple(order), tour_cost=float(cost), method=OrderMethod.CHAINED_LK, seed=seed)


def write_axis_tsv(axis: LabelAxis) -> str:
    """position<TAB>term rows under a `# tour_cost=... method=... seed=...` header."""
    seed_str = "none" if axis.seed is None else str(axis.seed)
    lines = [f"# tour_cost={axis.tour_cost:.9f} method={axis.method.value} seed={seed_str}"]
    for pos, term in enumerate(axis.order):
        lines.append(f"{pos}\t{term}")
    return "\n".join(lines) + "\n"


def read_axis_tsv(lines: Iterable[str]) -> LabelAxis:
    """Parse the output of `write_axis_tsv` back into a LabelAxis."""
    tour_cost = 0.0
    method = OrderMethod.CHAINED_LK
    seed: int | None = None
    entries: list[tuple[int, str]] = []
    saw_header = False
    for lineno, line in enumerate(lines, start=1):
        stripped = line.rstrip("\r\n")
        if not stripped.strip():
            continue
        if stripped.startswith("#"):
            fields = dict(
                part.split("=", 1) for part in stripped.lstrip("# ").split() if "=" in part
            )
            if "tour_cost" in fields:
                tour_cost = float(fields["tour_cost"])
                method = OrderMethod(fields.get("method", "CHAINED_LK"))
                raw_seed = fields.get("seed", "none")
                seed = None if raw_seed == "none" else int(raw_seed)
                saw_header = True
            continue
        parts = stripped.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected position<TAB>term")
        entries.append((int(parts[0]), parts[1]))
    if not saw_header:
        raise ValueError("axis file is missing its tour_cost header line")
    entries.sort()
    if [pos for pos, _ in entries] != list(range(len(entries))):
        raise ValueError("axis positions must be 0..n-1 without gaps")
    return LabelAxis(
        order=tuple(term for _, term in entries),
        tour_cost=tour_cost,
        method=method,
        seed=seed,
    )


def read_axis_path(path: str | Path) -> LabelAxis:
    with open(path, encoding="utf-8") as fh:
        return read_axis_tsv(fh)
