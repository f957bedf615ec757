"""Command-line pipeline: label, order, fingerprint, group, and plot.

Every file-producing command writes a `<output>.manifest.json` sidecar
recording the tool version, parameters, and content hashes of the inputs,
so any output can be traced back to the run that produced it. Runs are
fully deterministic for a fixed seed.

Exit codes: 0 success, 1 runtime or I/O error, 2 usage error.
"""

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from lexfp import __version__
from lexfp.corpus import ClusteringSolution, Corpus, load_corpus_path, load_solution_path
from lexfp.fingerprint import make_fingerprint, write_fingerprint_csv
from lexfp.labeling import (
    UniverseMode,
    common_labels,
    label_cluster,
    label_solution,
    write_labels_table,
    write_labels_tsv,
)
from lexfp.metacluster import (
    MEDIAN,
    ApConfig,
    affinity_propagation,
    group_report,
    similarity_matrix,
    write_metaclusters_tsv,
)
from lexfp.tsp import (
    build_term_space,
    load_external_vectors_path,
    order_chained_lk,
    order_exact,
    read_axis_path,
    write_axis_tsv,
)
from lexfp.viz import LEGEND_ROW_PX, Y_AUTO, Y_FIXED, PlotSpec, export_plot_csv, render_svg

_EXACT_CUTOFF = 12

# Documented modelling choices surfaced in output metadata.
_CONVENTIONS = {
    "solution_level_sign": "unsigned",
    "tsp_objective": "open_path",
    "distance": "cosine",
}


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _build_manifest(command: str, parameters: dict, input_paths: list) -> dict:
    try:
        inputs = [{"path": str(p), "sha256": _sha256_file(Path(p))} for p in input_paths]
    except OSError as exc:
        raise click.ClickException(f"cannot hash input file {exc.filename}: {exc.strerror}")
    return {
        "tool": "lexfp",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "conventions": dict(_CONVENTIONS),
        "inputs": inputs,
    }


class OutputWriter:
    """Writes output files plus manifest sidecars, with rollback on failure."""

    def __init__(self, manifest: dict):
        self.manifest = manifest
        self.written: list[Path] = []

    def write(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        self.written.append(path)
        sidecar = path.with_name(path.name + ".manifest.json")
        payload = dict(self.manifest)
        payload["output"] = path.name
        sidecar.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self.written.append(sidecar)

    def rollback(self) -> None:
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass
        self.written.clear()


def _emit(text: str, out: Path | None, writer: OutputWriter) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        writer.write(out, text)


def _read_corpus(path: str, fmt: str = "auto") -> Corpus:
    try:
        return load_corpus_path(path, fmt)
    except OSError as exc:
        raise click.ClickException(f"cannot read corpus file {path}: {exc.strerror or exc}")
    except ValueError as exc:
        raise click.ClickException(f"corpus file {path}: {exc}")


def _read_solutions(corpus: Corpus, paths: tuple) -> list[ClusteringSolution]:
    solutions = []
    names: set[str] = set()
    for path in paths:
        try:
            solution = load_solution_path(corpus, path)
        except OSError as exc:
            raise click.ClickException(f"cannot read solution file {path}: {exc.strerror or exc}")
        except ValueError as exc:
            raise click.ClickException(f"solution file {path}: {exc}")
        if solution.name in names:
            raise click.ClickException(
                f"duplicate solution name {solution.name!r}; solution file stems must be unique"
            )
        names.add(solution.name)
        if solution.duplicate_assignments:
            click.echo(
                f"warning: {solution.name}: {solution.duplicate_assignments} repeated identical assignments",
                err=True,
            )
        solutions.append(solution)
    return solutions


def _read_axis(path: str):
    try:
        return read_axis_path(path)
    except OSError as exc:
        raise click.ClickException(f"cannot read axis file {path}: {exc.strerror or exc}")
    except ValueError as exc:
        raise click.ClickException(f"axis file {path}: {exc}")


def _read_label_file(path: str) -> list[str]:
    from lexfp.corpus import normalize_term

    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise click.ClickException(f"cannot read labels file {path}: {exc.strerror or exc}")
    labels = []
    seen = set()
    for line in lines:
        stripped = line.rstrip("\r\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        term = normalize_term(stripped.split("\t")[0])
        if term and term not in seen:
            seen.add(term)
            labels.append(term)
    if len(labels) < 2:
        raise click.ClickException(f"labels file {path}: need at least 2 labels")
    return labels


def _parse_preference(value: str) -> float | str:
    if value == MEDIAN:
        return MEDIAN
    try:
        return float(value)
    except ValueError:
        raise click.UsageError(f"--preference must be a number or 'median', got {value!r}")


def _pmap(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _build_axis(labels, space, seed: int, kicks: int, force_heuristic: bool):
    if len(labels) <= _EXACT_CUTOFF and not force_heuristic:
        return order_exact(labels, space)
    return order_chained_lk(labels, space, seed=seed, kicks=kicks)


@click.group()
@click.version_option(__version__, prog_name="lexfp")
def main() -> None:
    """Label document clusters by signed NMI, fingerprint them on a common
    label axis, and compare clusters across clustering solutions."""


@main.command("label")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_path", metavar="SOLUTION")
@click.option("--k", type=click.IntRange(min=1), default=10, show_default=True, help="Labels per cluster.")
@click.option("--universe", type=click.Choice(["all", "covered"]), default="all", show_default=True, help="Documents probabilities are estimated over.")
@click.option("--magnitude", is_flag=True, help="Diagnostic mode: rank by |NMI| instead of signed NMI.")
@click.option("--table", "as_table", is_flag=True, help="Human-readable table instead of TSV.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output file (default: stdout).")
def cmd_label(corpus_path, solution_path, k, universe, magnitude, as_table, out):
    """Top-k signed-NMI labels for every cluster of one solution."""
    corpus = _read_corpus(corpus_path)
    solution = _read_solutions(corpus, (solution_path,))[0]
    mode = UniverseMode(universe)
    lists = [
        label_cluster(corpus, solution, cid, k, mode, magnitude)
        for cid in solution.cluster_ids()
    ]
    if as_table:
        sizes = {f"{solution.name}:{cid}": len(docs) for cid, docs in solution.clusters.items()}
        text = write_labels_table(lists, sizes)
    else:
        text = write_labels_tsv(lists)
    manifest = _build_manifest(
        "label",
        {"k": k, "universe": universe, "magnitude": magnitude, "table": as_table},
        [corpus_path, solution_path],
    )
    _emit(text, out, OutputWriter(manifest))


@main.command("solution-labels")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_paths", metavar="SOLUTION...", nargs=-1, required=True)
@click.option("--k", type=click.IntRange(min=1), default=10, show_default=True, help="Terms per solution.")
@click.option("--table", "as_table", is_flag=True, help="Human-readable table instead of TSV.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output file (default: stdout).")
def cmd_solution_labels(corpus_path, solution_paths, k, as_table, out):
    """Most informative terms for each whole solution (covered universe)."""
    corpus = _read_corpus(corpus_path)
    solutions = _read_solutions(corpus, solution_paths)
    lists = [label_solution(corpus, s, k) for s in solutions]
    if as_table:
        sizes = {s.name: s.n_covered for s in solutions}
        text = write_labels_table(lists, sizes)
    else:
        text = write_labels_tsv(lists)
    manifest = _build_manifest("solution-labels", {"k": k, "table": as_table}, [corpus_path, *solution_paths])
    _emit(text, out, OutputWriter(manifest))


@main.command("common-labels")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_paths", metavar="SOLUTION...", nargs=-1, required=True)
@click.option("--per-solution-k", type=click.IntRange(min=1), default=50, show_default=True, help="Top labels taken from each solution.")
@click.option("--min-occurrence", type=click.IntRange(min=1), default=2, show_default=True, help="Minimum number of solution lists a label must appear in.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output file (default: stdout).")
def cmd_common_labels(corpus_path, solution_paths, per_solution_k, min_occurrence, out):
    """Labels shared by enough solutions: term<TAB>source_count rows."""
    if len(solution_paths) < 2:
        raise click.UsageError("common-labels needs at least two solutions")
    corpus = _read_corpus(corpus_path)
    solutions = _read_solutions(corpus, solution_paths)
    lists = [label_solution(corpus, s, per_solution_k) for s in solutions]
    label_set = common_labels(lists, min_occurrence, per_solution_k)
    text = "".join(f"{term}\t{count}\n" for term, count in sorted(label_set.source_count.items()))
    manifest = _build_manifest(
        "common-labels",
        {"per_solution_k": per_solution_k, "min_occurrence": min_occurrence},
        [corpus_path, *solution_paths],
    )
    _emit(text, out, OutputWriter(manifest))


@main.command("order")
@click.argument("labels_path", metavar="LABELS")
@click.option("--corpus", "corpus_path", default=None, help="Corpus for document-incidence label vectors.")
@click.option("--vectors", "vectors_path", default=None, help="External term<TAB>v1<TAB>... vector file.")
@click.option("--seed", type=int, default=42, show_default=True, help="Heuristic RNG seed.")
@click.option("--kicks", type=click.IntRange(min=0), default=20, show_default=True, help="Double-bridge perturbation rounds.")
@click.option("--force-heuristic", is_flag=True, help="Use the heuristic even when the exact solver would apply.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output file (default: stdout).")
def cmd_order(labels_path, corpus_path, vectors_path, seed, kicks, force_heuristic, out):
    """Order labels into a minimum-distance axis (exact up to 12 labels)."""
    if (corpus_path is None) == (vectors_path is None):
        raise click.UsageError("provide exactly one of --corpus or --vectors")
    labels = _read_label_file(labels_path)
    inputs = [labels_path]
    try:
        if vectors_path is not None:
            space = load_external_vectors_path(vectors_path)
            inputs.append(vectors_path)
        else:
            space = build_term_space(_read_corpus(corpus_path), labels)
            inputs.append(corpus_path)
        axis = _build_axis(labels, space, seed, kicks, force_heuristic)
    except OSError as exc:
        raise click.ClickException(f"cannot read vectors file {vectors_path}: {exc.strerror or exc}")
    except ValueError as exc:
        raise click.ClickException(str(exc))
    manifest = _build_manifest(
        "order",
        {"seed": seed, "kicks": kicks, "force_heuristic": force_heuristic, "method": axis.method.value},
        inputs,
    )
    _emit(write_axis_tsv(axis), out, OutputWriter(manifest))


def _fingerprint_sweep(corpus, solutions, axis, mode, threads):
    jobs = [(solution, cid) for solution in solutions for cid in solution.cluster_ids()]
    fps = _pmap(lambda job: make_fingerprint(corpus, job[0], job[1], axis, mode), jobs, threads)
    doc_sets = [solution.clusters[cid] for solution, cid in jobs]
    return fps, doc_sets


@main.command("fingerprint")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_paths", metavar="SOLUTION...", nargs=-1, required=True)
@click.option("--axis", "axis_path", required=True, help="Axis TSV produced by `order` or `pipeline`.")
@click.option("--universe", type=click.Choice(["all", "covered"]), default="all", show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output file (default: stdout).")
def cmd_fingerprint(corpus_path, solution_paths, axis_path, universe, threads, out):
    """Fingerprint every cluster of the given solutions on an axis."""
    corpus = _read_corpus(corpus_path)
    solutions = _read_solutions(corpus, solution_paths)
    axis = _read_axis(axis_path)
    try:
        fps, _ = _fingerprint_sweep(corpus, solutions, axis, UniverseMode(universe), threads)
        text = write_fingerprint_csv(fps, axis)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    manifest = _build_manifest(
        "fingerprint",
        {"universe": universe, "axis_id": axis.axis_id},
        [corpus_path, *solution_paths, axis_path],
    )
    _emit(text, out, OutputWriter(manifest))


def _ap_options(fn):
    fn = click.option("--preference", default=MEDIAN, show_default=True, help="AP preference: a number or 'median'.")(fn)
    fn = click.option("--convergence-iter", type=click.IntRange(min=1), default=15, show_default=True)(fn)
    fn = click.option("--max-iter", type=click.IntRange(min=1), default=200, show_default=True)(fn)
    fn = click.option("--damping", type=click.FloatRange(0.5, 1.0, max_open=True), default=0.5, show_default=True)(fn)
    return fn


@main.command("metacluster")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_paths", metavar="SOLUTION...", nargs=-1, required=True)
@click.option("--axis", "axis_path", required=True, help="Axis TSV produced by `order` or `pipeline`.")
@click.option("--universe", type=click.Choice(["all", "covered"]), default="all", show_default=True)
@click.option("--similarity", type=click.Choice(["cosine", "neg-sq-euclidean"]), default="cosine", show_default=True)
@_ap_options
@click.option("--peak-quantile", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=0.9, show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("."), show_default=True)
def cmd_metacluster(corpus_path, solution_paths, axis_path, universe, similarity,
                    damping, max_iter, convergence_iter, preference, peak_quantile,
                    threads, out_dir):
    """Group clusters of clusters across solutions with affinity propagation."""
    corpus = _read_corpus(corpus_path)
    solutions = _read_solutions(corpus, solution_paths)
    axis = _read_axis(axis_path)
    pref = _parse_preference(preference)
    kind = similarity.replace("-", "_")
    try:
        fps, doc_sets = _fingerprint_sweep(corpus, solutions, axis, UniverseMode(universe), threads)
        sim = similarity_matrix(fps, kind)
        config = ApConfig(damping=damping, max_iter=max_iter, convergence_iter=convergence_iter, preference=pref)
        meta = affinity_propagation(sim, config)
        report = group_report(meta, fps, doc_sets, axis, peak_quantile)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    report["similarity"] = kind
    if not meta.converged:
        click.echo("warning: affinity propagation did not converge; returning last exemplar set", err=True)
    manifest = _build_manifest(
        "metacluster",
        {
            "universe": universe, "similarity": kind, "damping": damping,
            "max_iter": max_iter, "convergence_iter": convergence_iter,
            "preference": preference, "peak_quantile": peak_quantile,
        },
        [corpus_path, *solution_paths, axis_path],
    )
    writer = OutputWriter(manifest)
    try:
        writer.write(out_dir / "metaclusters.tsv", write_metaclusters_tsv(meta, fps))
        writer.write(out_dir / "metacluster_report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        writer.rollback()
        raise click.ClickException(f"cannot write outputs under {out_dir}: {exc.strerror or exc}")


@main.command("plot")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_paths", metavar="SOLUTION...", nargs=-1, required=True)
@click.option("--axis", "axis_path", required=True, help="Axis TSV produced by `order` or `pipeline`.")
@click.option("--cluster", "cluster_refs", multiple=True, metavar="SOLUTION:CLUSTER", help="Cluster(s) to plot; default is every cluster.")
@click.option("--universe", type=click.Choice(["all", "covered"]), default="all", show_default=True)
@click.option("--width", type=click.IntRange(min=1), default=900, show_default=True)
@click.option("--height", type=click.IntRange(min=1), default=380, show_default=True)
@click.option("--label-every", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--y-range", type=click.Choice(["fixed", "auto"]), default="fixed", show_default=True, help="fixed = [-1, 1].")
@click.option("--csv", "csv_out", type=click.Path(path_type=Path), default=None, help="Also export plot-ready CSV here.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="SVG output file (default: stdout).")
def cmd_plot(corpus_path, solution_paths, axis_path, cluster_refs, universe,
             width, height, label_every, y_range, csv_out, out):
    """Render fingerprint profile plots as standalone SVG."""
    corpus = _read_corpus(corpus_path)
    solutions = _read_solutions(corpus, solution_paths)
    axis = _read_axis(axis_path)
    by_name = {s.name: s for s in solutions}
    mode = UniverseMode(universe)
    try:
        if cluster_refs:
            fps = []
            for ref in cluster_refs:
                name, _, cid = ref.partition(":")
                if name not in by_name:
                    raise ValueError(f"unknown solution in --cluster {ref!r}")
                fps.append(make_fingerprint(corpus, by_name[name], cid, axis, mode))
        else:
            fps, _ = _fingerprint_sweep(corpus, solutions, axis, mode, threads=1)
        spec = PlotSpec(
            fingerprints=tuple(fps),
            axis=axis,
            width_px=width,
            height_px=height,
            label_every=label_every,
            y_range=Y_FIXED if y_range == "fixed" else Y_AUTO,
        )
        svg = render_svg(spec)
        csv_text = export_plot_csv(spec) if csv_out is not None else None
    except (KeyError, ValueError) as exc:
        raise click.ClickException(str(exc))
    manifest = _build_manifest(
        "plot",
        {
            "clusters": list(cluster_refs), "universe": universe, "width": width,
            "height": height, "label_every": label_every, "y_range": y_range,
        },
        [corpus_path, *solution_paths, axis_path],
    )
    writer = OutputWriter(manifest)
    _emit(svg, out, writer)
    if csv_text is not None:
        writer.write(csv_out, csv_text)


@main.command("pipeline")
@click.argument("corpus_path", metavar="CORPUS")
@click.argument("solution_paths", metavar="SOLUTION...", nargs=-1, required=True)
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
@click.option("--k", type=click.IntRange(min=1), default=10, show_default=True, help="Labels per cluster.")
@click.option("--per-solution-k", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--min-occurrence", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--universe", type=click.Choice(["all", "covered"]), default="all", show_default=True, help="Universe for cluster labels and fingerprints.")
@click.option("--vectors", "vectors_path", default=None, help="External vectors for the label axis (default: document incidence).")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--kicks", type=click.IntRange(min=0), default=20, show_default=True)
@click.option("--force-heuristic", is_flag=True)
@click.option("--similarity", type=click.Choice(["cosine", "neg-sq-euclidean"]), default="cosine", show_default=True)
@_ap_options
@click.option("--peak-quantile", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=0.9, show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
def cmd_pipeline(corpus_path, solution_paths, out_dir, k, per_solution_k, min_occurrence,
                 universe, vectors_path, seed, kicks, force_heuristic, similarity,
                 damping, max_iter, convergence_iter, preference, peak_quantile, threads):
    """Run the whole pipeline: labels, common axis, fingerprints, groups, plots.

    With a single solution the run stops after per-cluster labels; the
    cross-solution stages need at least two solutions.
    """
    pref = _parse_preference(preference)
    kind = similarity.replace("-", "_")
    mode = UniverseMode(universe)
    inputs = [corpus_path, *solution_paths] + ([vectors_path] if vectors_path else [])
    manifest = _build_manifest(
        "pipeline",
        {
            "k": k, "per_solution_k": per_solution_k, "min_occurrence": min_occurrence,
            "universe": universe, "seed": seed, "kicks": kicks,
            "force_heuristic": force_heuristic, "similarity": kind, "damping": damping,
            "max_iter": max_iter, "convergence_iter": convergence_iter,
            "preference": preference, "peak_quantile": peak_quantile,
            "external_vectors": vectors_path is not None,
        },
        inputs,
    )
    writer = OutputWriter(manifest)
    stage = "load-corpus"
    try:
        corpus = _read_corpus(corpus_path)
        stage = "load-solutions"
        solutions = _read_solutions(corpus, solution_paths)

        stage = "cluster-labels"
        jobs = [(s, cid) for s in solutions for cid in s.cluster_ids()]
        lists = _pmap(lambda job: label_cluster(corpus, job[0], job[1], k, mode), jobs, threads)
        writer.write(out_dir / "cluster_labels.tsv", write_labels_tsv(lists))
        if len(solutions) == 1:
            click.echo("single solution: stopping after per-cluster labels", err=True)
            return

        stage = "solution-labels"
        solution_lists = _pmap(lambda s: label_solution(corpus, s, per_solution_k), solutions, threads)
        writer.write(out_dir / "solution_labels.tsv", write_labels_tsv(solution_lists))

        stage = "common-labels"
        label_set = common_labels(solution_lists, min_occurrence, per_solution_k)
        writer.write(
            out_dir / "common_labels.tsv",
            "".join(f"{t}\t{c}\n" for t, c in sorted(label_set.source_count.items())),
        )
        labels = sorted(label_set.labels)
        if len(labels) < 2:
            raise ValueError(
                f"only {len(labels)} common label(s); need at least 2 to build an axis "
                f"(try lowering --min-occurrence or raising --per-solution-k)"
            )

        stage = "term-space"
        if vectors_path is not None:
            space = load_external_vectors_path(vectors_path)
        else:
            space = build_term_space(corpus, label_set)

        stage = "order"
        axis = _build_axis(labels, space, seed, kicks, force_heuristic)
        writer.write(out_dir / "axis.tsv", write_axis_tsv(axis))

        stage = "fingerprints"
        fps, doc_sets = _fingerprint_sweep(corpus, solutions, axis, mode, threads)
        writer.write(out_dir / "fingerprints.csv", write_fingerprint_csv(fps, axis))

        stage = "metacluster"
        config = ApConfig(damping=damping, max_iter=max_iter, convergence_iter=convergence_iter, preference=pref)
        meta = affinity_propagation(similarity_matrix(fps, kind), config)
        report = group_report(meta, fps, doc_sets, axis, peak_quantile)
        report["similarity"] = kind
        writer.write(out_dir / "metaclusters.tsv", write_metaclusters_tsv(meta, fps))
        writer.write(out_dir / "metacluster_report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
        if not meta.converged:
            click.echo("warning: affinity propagation did not converge; returning last exemplar set", err=True)

        stage = "plots"

        def overlay(members: list[int]) -> str:
            spec = PlotSpec(
                fingerprints=tuple(fps[m] for m in members),
                axis=axis,
                height_px=380 + LEGEND_ROW_PX * len(members),
                y_range=Y_FIXED,
            )
            return render_svg(spec)

        for gid, (_, members) in enumerate(sorted(meta.groups().items())):
            writer.write(out_dir / "plots" / f"group_{gid:02d}.svg", overlay(members))
        writer.write(out_dir / "plots" / "exemplars.svg", overlay(list(meta.exemplars)))
    except click.ClickException:
        writer.rollback()
        raise
    except Exception as exc:
        writer.rollback()
        raise click.ClickException(f"pipeline failed at stage {stage!r}: {exc}") from exc
    click.echo(f"pipeline outputs written to {out_dir}", err=True)


if __name__ == "__main__":
    main()
