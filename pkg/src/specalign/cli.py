"""Command-line driver: graph generation, alignment, evaluation, and sweeps.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
The ``SPECALIGN_SEED`` environment variable, when set, overrides the seed
list of sweep configs (single-seed smoke runs).
"""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import click
import numpy as np

from .align import brute_force_qap, eigen_align, low_rank_align
from .experiments import (
    ConfigError,
    generate_graph,
    generate_pair,
    run_sweep,
    sweep_rows_to_csv,
)
from .graph import Graph, ParseError, Permutation, load_edge_list, write_edge_list
from .matching import InfeasibleMatchingError
from .metrics import count_alignment, generalized_objective, node_accuracy
from .score import (
    MappingSet,
    MemoryGuardError,
    ScoreScheme,
    build_alignment_matrix,
    from_alpha,
)
from .spectral import ConvergenceError

USAGE_EXIT = 1
RUNTIME_EXIT = 2


@click.group()
def cli():
    """Spectral graph alignment toolkit."""


# ---------------------------------------------------------------- generate

@cli.group()
def generate():
    """Write synthetic graphs (edge list + JSON sidecar)."""


def _write_graph(g: Graph, path: Path) -> None:
    path.write_text(write_edge_list(g))


def _write_sidecar(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _single_graph_command(family: str, params: dict, seed: int, out: str) -> None:
    g = generate_graph(family, params, seed)
    prefix = Path(out)
    _write_graph(g, prefix.with_suffix(".el"))
    _write_sidecar(
        prefix.with_suffix(".json"),
        {"family": family, "params": params, "seed": seed, "n": g.n, "edges": g.edge_count},
    )
    click.echo(f"wrote {prefix.with_suffix('.el')} ({g.n} nodes, {g.edge_count} edges)")


@generate.command("er")
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default="er", show_default=True, help="Output path prefix.")
def generate_er(n, p, seed, out):
    """Erdos-Renyi graph G(n, p)."""
    _single_graph_command("er", {"n": n, "p": p}, seed, out)


@generate.command("sbm")
@click.option("--sizes", type=str, required=True, help="Comma-separated block sizes, e.g. 25,25.")
@click.option("--within", type=str, required=True, help="Comma-separated within-block densities.")
@click.option("--cross", type=float, required=True, help="Cross-block density.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default="sbm", show_default=True)
def generate_sbm(sizes, within, cross, seed, out):
    """Stochastic block model graph."""
    block_sizes = [int(s) for s in sizes.split(",")]
    within_densities = [float(x) for x in within.split(",")]
    if len(within_densities) != len(block_sizes):
        raise click.UsageError("--within must list one density per block")
    density = np.full((len(block_sizes), len(block_sizes)), cross)
    np.fill_diagonal(density, within_densities)
    _single_graph_command(
        "sbm", {"block_sizes": block_sizes, "density": density.tolist()}, seed, out
    )


@generate.command("regular")
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default="regular", show_default=True)
def generate_regular(n, d, seed, out):
    """Random d-regular graph."""
    _single_graph_command("regular", {"n": n, "d": d}, seed, out)


@generate.command("powerlaw")
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, default=3, show_default=True, help="Edges per new node.")
@click.option("--n0", type=int, default=5, show_default=True, help="Seed subgraph size.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default="powerlaw", show_default=True)
def generate_powerlaw(n, m, n0, seed, out):
    """Preferential-attachment graph."""
    _single_graph_command("powerlaw", {"n": n, "m": m, "n0": n0}, seed, out)


@generate.command("pair")
@click.option("--family", type=click.Choice(["er", "regular", "powerlaw", "er_sbm"]), required=True)
@click.option("--n", type=int, default=50, show_default=True)
@click.option("--p", type=float, default=0.1, show_default=True, help="Edge density (er, er_sbm).")
@click.option("--d", type=int, default=5, show_default=True, help="Degree (regular).")
@click.option("--m", type=int, default=3, show_default=True, help="Edges per new node (powerlaw).")
@click.option("--n0", type=int, default=5, show_default=True, help="Seed subgraph size (powerlaw).")
@click.option("--noise", type=click.Choice(["none", "model1", "model2"]), default="none", show_default=True)
@click.option("--pe", type=float, default=0.0, show_default=True, help="Noise probability.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default="pair", show_default=True, help="Output path prefix.")
def generate_pair_cmd(family, n, p, d, m, n0, noise, pe, seed, out):
    """A graph pair (second graph relabeled, optionally noisy) plus truth."""
    spec = {"family": family, "n": n, "p": p, "d": d, "m": m, "n0": n0, "noise": noise, "pe": pe}
    g1, g2, truth = generate_pair(spec, seed)
    prefix = Path(out)
    path1 = Path(f"{prefix}_g1.el")
    path2 = Path(f"{prefix}_g2.el")
    _write_graph(g1, path1)
    _write_graph(g2, path2)
    _write_sidecar(
        Path(f"{prefix}.json"),
        {
            "spec": spec,
            "seed": seed,
            "truth": None if truth is None else truth.mapping.tolist(),
            "files": [str(path1), str(path2)],
        },
    )
    click.echo(f"wrote {path1}, {path2} ({g1.n} vs {g2.n} nodes)")


# ------------------------------------------------------------------- align

def _load_graph(path: str) -> Graph:
    return load_edge_list(Path(path).read_text())


def _load_truth(path: str | None) -> Permutation | None:
    if path is None:
        return None
    payload = json.loads(Path(path).read_text())
    mapping = payload["truth"] if isinstance(payload, dict) else payload
    if mapping is None:
        return None
    return Permutation(np.asarray(mapping, dtype=np.int64))


def _load_mapping_set(path: str | None, n1: int, n2: int) -> MappingSet | str:
    if path is None:
        return "full"
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two node ids, got {line!r}", lineno)
        pairs.append((int(parts[0]), int(parts[1])))
    return MappingSet(n1=n1, n2=n2, pairs=tuple(sorted(set(pairs))))


def _emit_result(result, truth, out, started) -> None:
    record = {
        "method": result.method,
        "gamma": result.gamma,
        "seed": result.seed,
        "matches": result.matches,
        "mismatches": result.mismatches,
        "neutrals": result.neutrals,
        "objective": result.objective,
        "accuracy": None if truth is None else node_accuracy(result.mapping, truth),
        "wall_ms": (time.perf_counter() - started) * 1000.0,
    }
    click.echo(json.dumps(record, sort_keys=True))
    if out:
        lines = [f"{i}\t{j}" for i, j in result.pairs()]
        Path(out).write_text("\n".join(lines) + "\n")


@cli.group()
def align():
    """Align two graphs and print a metrics record."""


@align.command("ea")
@click.argument("g1_path")
@click.argument("g2_path")
@click.option("--alpha", type=float, default=None, help="Match-score parameter (> 1).")
@click.option("--eps", type=float, default=0.001, show_default=True)
@click.option("--s1", type=float, default=None, help="Explicit match score.")
@click.option("--s2", type=float, default=None, help="Explicit neutral score.")
@click.option("--s3", type=float, default=None, help="Explicit mismatch score.")
@click.option("--matching", type=click.Choice(["exact", "greedy"]), default="exact", show_default=True)
@click.option("--restrict", type=str, default=None, help="Allowed-pairs file (two columns).")
@click.option("--seed", type=int, default=0, show_default=True, help="Eigensolver start seed.")
@click.option("--truth", type=str, default=None, help="Sidecar JSON with the true permutation.")
@click.option("--out", type=str, default=None, help="Write the mapping as TSV.")
@click.option("--dump-alignment", type=str, default=None, help="Debug: write the dense alignment matrix as CSV.")
def align_ea(g1_path, g2_path, alpha, eps, s1, s2, s3, matching, restrict, seed, truth, out, dump_alignment):
    """Leading-eigenvector alignment."""
    started = time.perf_counter()
    g1, g2 = _load_graph(g1_path), _load_graph(g2_path)
    if alpha is not None:
        scheme = from_alpha(alpha, eps)
    elif None not in (s1, s2, s3):
        scheme = ScoreScheme(s1, s2, s3)
    else:
        raise click.UsageError("provide --alpha or all of --s1/--s2/--s3")
    mapping_set = _load_mapping_set(restrict, g1.n, g2.n)
    if dump_alignment:
        dense_set = MappingSet.full(g1.n, g2.n) if mapping_set == "full" else mapping_set
        a = build_alignment_matrix(g1, g2, scheme, dense_set)
        np.savetxt(dump_alignment, a, delimiter=",")
    result = eigen_align(g1, g2, scheme, mapping_set, matching=matching, seed=seed)
    _emit_result(result, _load_truth(truth), out, started)


@align.command("lra")
@click.argument("g1_path")
@click.argument("g2_path")
@click.option("--gamma", type=float, required=True)
@click.option("--rank", type=int, default=3, show_default=True)
@click.option("--matching", type=click.Choice(["exact", "greedy"]), default="exact", show_default=True)
@click.option("--truth", type=str, default=None)
@click.option("--out", type=str, default=None)
def align_lra(g1_path, g2_path, gamma, rank, matching, truth, out):
    """Low-rank spectral alignment."""
    started = time.perf_counter()
    g1, g2 = _load_graph(g1_path), _load_graph(g2_path)
    result = low_rank_align(g1, g2, gamma, rank_k=rank, matching=matching)
    _emit_result(result, _load_truth(truth), out, started)


@align.command("brute")
@click.argument("g1_path")
@click.argument("g2_path")
@click.option("--gamma", type=float, default=0.0, show_default=True)
@click.option("--truth", type=str, default=None)
@click.option("--out", type=str, default=None)
def align_brute(g1_path, g2_path, gamma, truth, out):
    """Exact alignment by permutation enumeration (small graphs only)."""
    started = time.perf_counter()
    g1, g2 = _load_graph(g1_path), _load_graph(g2_path)
    result = brute_force_qap(g1, g2, gamma)
    _emit_result(result, _load_truth(truth), out, started)


# -------------------------------------------------------------------- eval

@cli.command("eval")
@click.argument("g1_path")
@click.argument("g2_path")
@click.argument("mapping_tsv")
@click.option("--gamma", type=float, default=0.0, show_default=True)
@click.option("--truth", type=str, default=None)
def eval_cmd(g1_path, g2_path, mapping_tsv, gamma, truth):
    """Recount metrics from a stored mapping TSV."""
    g1, g2 = _load_graph(g1_path), _load_graph(g2_path)
    pairs = []
    for line in Path(mapping_tsv).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j = line.split()
        pairs.append((int(i), int(j)))
    matches, mismatches, neutrals = count_alignment(g1, g2, pairs)
    truth_perm = _load_truth(truth)
    record = {
        "method": "eval",
        "gamma": gamma,
        "seed": None,
        "matches": matches,
        "mismatches": mismatches,
        "neutrals": neutrals,
        "objective": generalized_objective(g1, g2, pairs, gamma),
        "accuracy": None if truth_perm is None else node_accuracy(pairs, truth_perm),
        "wall_ms": None,
    }
    click.echo(json.dumps(record, sort_keys=True))


# ------------------------------------------------------------------- sweep

@cli.command("sweep")
@click.argument("config_path")
@click.option("--out", type=str, default=None, help="CSV output path (defaults to config 'output').")
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel worker processes.")
def sweep_cmd(config_path, out, jobs):
    """Run the cross product of (method, gamma, seed) from a JSON config."""
    try:
        config = json.loads(Path(config_path).read_text())
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"config is not valid JSON: {exc}")
    seeds_override = None
    env_seed = os.environ.get("SPECALIGN_SEED")
    if env_seed is not None:
        seeds_override = [int(env_seed)]
    try:
        rows = run_sweep(config, jobs=jobs, seeds_override=seeds_override)
    except ConfigError as exc:
        raise click.UsageError(str(exc))
    csv_text = sweep_rows_to_csv(rows)
    target = out or config.get("output")
    if target:
        Path(target).write_text(csv_text)
        click.echo(f"wrote {target} ({len(rows)} cells)")
    else:
        click.echo(csv_text, nl=False)
    if rows and all(row["error"] for row in rows):
        raise RuntimeError("all sweep cells failed")


# -------------------------------------------------------------------- main

def main(argv: list[str] | None = None) -> int:
    """Entry point mapping errors to the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show()
        sys.exit(USAGE_EXIT)
    except click.ClickException as exc:
        exc.show()
        sys.exit(USAGE_EXIT)
    except click.exceptions.Abort:
        sys.exit(USAGE_EXIT)
    except (
        ConfigError,
        ParseError,
        InfeasibleMatchingError,
        ConvergenceError,
        MemoryGuardError,
        ValueError,
        RuntimeError,
        OSError,
    ) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(RUNTIME_EXIT)


if __name__ == "__main__":
    main()
