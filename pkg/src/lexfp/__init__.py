"""Signed-NMI cluster labelling, lexical fingerprints on a TSP-ordered
label axis, and cross-solution cluster comparison."""

__version__ = "0.1.0"

from lexfp.corpus import (
    ClusteringSolution,
    ContingencyCell,
    Corpus,
    contingency,
    load_corpus,
    load_corpus_path,
    load_solution,
    load_solution_path,
    normalize_term,
    read_corpus_cache,
    write_corpus_cache,
)
from lexfp.fingerprint import (
    Fingerprint,
    fingerprint_similarity,
    group_average_jaccard,
    jaccard,
    make_fingerprint,
    write_fingerprint_csv,
)
from lexfp.labeling import (
    CommonLabelSet,
    LabelList,
    UniverseMode,
    common_labels,
    label_cluster,
    label_solution,
    write_labels_table,
    write_labels_tsv,
)
from lexfp.metacluster import (
    ApConfig,
    MetaClustering,
    affinity_propagation,
    group_report,
    similarity_matrix,
    write_metaclusters_tsv,
)
from lexfp.nmi import (
    SignedNmiScore,
    entropy_binary,
    occurrence_below_expectation,
    solution_entropy,
    term_cluster_mi,
    term_cluster_nmi,
    term_solution_mi,
    term_solution_nmi,
)
from lexfp.tsp import (
    LabelAxis,
    OrderMethod,
    TermVectorSpace,
    VectorProvenance,
    build_term_space,
    cosine_distance,
    distance_matrix,
    load_external_vectors,
    order_chained_lk,
    order_exact,
    path_cost,
    read_axis_tsv,
    write_axis_tsv,
)
from lexfp.viz import PlotSpec, Y_AUTO, Y_FIXED, export_plot_csv, render_svg

__all__ = [
    "__version__",
    "ApConfig",
    "ClusteringSolution",
    "CommonLabelSet",
    "ContingencyCell",
    "Corpus",
    "Fingerprint",
    "LabelAxis",
    "LabelList",
    "MetaClustering",
    "OrderMethod",
    "PlotSpec",
    "SignedNmiScore",
    "TermVectorSpace",
    "UniverseMode",
    "VectorProvenance",
    "Y_AUTO",
    "Y_FIXED",
    "affinity_propagation",
    "build_term_space",
    "common_labels",
    "contingency",
    "cosine_distance",
    "distance_matrix",
    "entropy_binary",
    "export_plot_csv",
    "fingerprint_similarity",
    "group_average_jaccard",
    "group_report",
    "jaccard",
    "label_cluster",
    "label_solution",
    "load_corpus",
    "load_corpus_path",
    "load_external_vectors",
    "load_solution",
    "load_solution_path",
    "make_fingerprint",
    "normalize_term",
    "occurrence_below_expectation",
    "order_chained_lk",
    "order_exact",
    "path_cost",
    "read_axis_tsv",
    "read_corpus_cache",
    "render_svg",
    "similarity_matrix",
    "solution_entropy",
    "term_cluster_mi",
    "term_cluster_nmi",
    "term_solution_mi",
    "term_solution_nmi",
    "write_axis_tsv",
    "write_corpus_cache",
    "write_fingerprint_csv",
    "write_labels_table",
    "write_labels_tsv",
    "write_metaclusters_tsv",
]
