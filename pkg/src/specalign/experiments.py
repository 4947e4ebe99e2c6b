"""Experiment cells for the sweep driver: pair generation, method runs, CSV rows.

A sweep is the cross product of (method, gamma, seed). Every cell
regenerates its graph pair from the pair spec and the cell seed, so cells
are independent, order-free, and safe to run in parallel; rows are
assembled in config order regardless of completion order.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .align import brute_force_qap, eigen_align, low_rank_align
from .graph import Graph, Permutation, apply_permutation
from .metrics import node_accuracy
from .randgen import (
    erdos_renyi,
    noise_model_I,
    noise_model_II,
    power_law,
    random_permutation,
    random_regular,
    sample_mapping_set,
    stochastic_block_model,
)
from .score import from_alpha

__all__ = [
    "ConfigError",
    "child_seed",
    "generate_graph",
    "generate_pair",
    "run_cell",
    "run_sweep",
    "sweep_rows_to_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = [
    "method",
    "gamma",
    "seed",
    "matches",
    "mismatches",
    "neutrals",
    "objective",
    "accuracy",
    "wall_ms",
    "error",
]

# child-seed streams per cell seed
STREAM_GRAPH = 0
STREAM_NOISE = 1
STREAM_PERMUTATION = 2
STREAM_MAPPING_SET = 3
STREAM_SOLVER = 4

DEFAULT_EA_EPS = 0.001


class ConfigError(ValueError):
    """Invalid generator or sweep configuration."""


def child_seed(seed: int, stream: int) -> int:
    """Derive an independent integer seed for one randomness stream of a cell."""
    return int(np.random.SeedSequence((seed, stream)).generate_state(1)[0])


def generate_graph(family: str, params: dict, seed: int) -> Graph:
    if family == "er":
        return erdos_renyi(int(params["n"]), float(params["p"]), seed)
    if family == "sbm":
        return stochastic_block_model(
            [int(s) for s in params["block_sizes"]],
            np.asarray(params["density"], dtype=float),
            seed,
        )
    if family == "regular":
        return random_regular(int(params["n"]), int(params["d"]), seed)
    if family == "powerlaw":
        return power_law(int(params["n"]), int(params.get("m", 3)), int(params.get("n0", 5)), seed)
    raise ConfigError(f"unknown graph family {family!r}")


def _density(g: Graph) -> float:
    return 2 * g.edge_count / (g.n * (g.n - 1)) if g.n > 1 else 0.0


def generate_pair(spec: dict, seed: int) -> tuple[Graph, Graph, Permutation | None]:
    """Build the (G1, G2, truth) triple for one cell.

    For single-family pairs, G2 is a relabeled, optionally noisy copy of G1
    and ``truth`` is the relabeling. The "er_sbm" family pairs an
    independent blockmodel against the first graph (no ground truth).
    """
    family = spec.get("family")
    if family is None:
        raise ConfigError("pair spec is missing 'family'")
    if family == "er_sbm":
        g1 = erdos_renyi(int(spec.get("n", 25)), float(spec.get("p", 0.1)), child_seed(seed, STREAM_GRAPH))
        sizes = [int(s) for s in spec.get("block_sizes", [25, 25])]
        within = [float(x) for x in spec.get("within", [0.1, 0.3])]
        cross = float(spec.get("cross", 0.05))
        density = np.full((len(sizes), len(sizes)), cross)
        np.fill_diagonal(density, within)
        g2 = stochastic_block_model(sizes, density, child_seed(seed, STREAM_NOISE))
        return g1, g2, None

    g1 = generate_graph(family, spec, child_seed(seed, STREAM_GRAPH))
    noise = spec.get("noise", "none")
    pe = float(spec.get("pe", 0.0))
    if noise == "none":
        noisy = g1
    elif noise == "model1":
        noisy = noise_model_I(g1, pe, child_seed(seed, STREAM_NOISE))
    elif noise == "model2":
        p_clean = float(spec["p"]) if "p" in spec else _density(g1)
        noisy = noise_model_II(g1, pe, p_clean, child_seed(seed, STREAM_NOISE))
    else:
        raise ConfigError(f"unknown noise model {noise!r}")
    truth = random_permutation(g1.n, child_seed(seed, STREAM_PERMUTATION))
    g2 = apply_permutation(noisy, truth)
    return g1, g2, truth


def run_cell(pair_spec: dict, method_spec: dict, gamma: float, seed: int) -> dict:
    """Execute one (method, gamma, seed) cell and return its metrics record."""
    name = method_spec.get("name")
    g1, g2, truth = generate_pair(pair_spec, seed)
    start = time.perf_counter()
    if name == "ea":
        eps = float(method_spec.get("eps", DEFAULT_EA_EPS))
        if gamma <= 0:
            raise ConfigError("ea requires gamma > 0 (gamma maps to alpha = (1-gamma)/gamma)")
        scheme = from_alpha((1 - gamma) / gamma, eps)
        restrict_k = method_spec.get("restrict_k")
        if restrict_k is None:
            mapping_set = "full"
        else:
            if truth is None:
                raise ConfigError("restricted mapping sets require a pair with ground truth")
            mapping_set = sample_mapping_set(g1.n, truth, int(restrict_k), child_seed(seed, STREAM_MAPPING_SET))
        result = eigen_align(
            g1,
            g2,
            scheme,
            mapping_set,
            matching=method_spec.get("matching", "exact"),
            seed=child_seed(seed, STREAM_SOLVER),
        )
    elif name == "lra":
        result = low_rank_align(
            g1,
            g2,
            gamma,
            rank_k=int(method_spec.get("rank", 3)),
            matching=method_spec.get("matching", "exact"),
            seed=seed,
        )
    elif name == "brute":
        result = brute_force_qap(g1, g2, gamma)
    else:
        raise ConfigError(f"unknown method {name!r}")
    wall_ms = (time.perf_counter() - start) * 1000.0
    accuracy = node_accuracy(result.mapping, truth) if truth is not None else None
    return {
        "method": name,
        "gamma": gamma,
        "seed": seed,
        "matches": result.matches,
        "mismatches": result.mismatches,
        "neutrals": result.neutrals,
        "objective": result.objective,
        "accuracy": accuracy,
        "wall_ms": wall_ms,
        "error": "",
    }


def _cell_worker(args: tuple[dict, dict, float, int]) -> dict:
    pair_spec, method_spec, gamma, seed = args
    try:
        return run_cell(pair_spec, method_spec, gamma, seed)
    except Exception as exc:  # per-cell failures become CSV rows
        return {
            "method": method_spec.get("name", "?"),
            "gamma": gamma,
            "seed": seed,
            "matches": None,
            "mismatches": None,
            "neutrals": None,
            "objective": None,
            "accuracy": None,
            "wall_ms": None,
            "error": f"{type(exc).__name__}: {exc}",
        }


def validate_config(config: dict) -> None:
    if "pair" not in config:
        raise ConfigError("config is missing 'pair'")
    methods = config.get("methods")
    if not methods:
        raise ConfigError("config must list at least one method")
    seeds = config.get("seeds")
    if not seeds:
        raise ConfigError("config must list at least one seed")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seeds must be distinct")
    for method in methods:
        if method.get("name") not in ("ea", "lra", "brute"):
            raise ConfigError(f"unknown method {method.get('name')!r}")
        gammas = method.get("gammas")
        if not gammas:
            raise ConfigError(f"method {method.get('name')!r} must list gammas")
        for gamma in gammas:
            if not 0 <= gamma < 0.5:
                raise ConfigError(f"gamma {gamma} outside [0, 0.5)")
            if method.get("name") == "ea" and gamma <= 0:
                raise ConfigError("ea gammas must be positive (gamma maps to alpha)")
        if method.get("restrict_k") is not None and config["pair"].get("family") == "er_sbm":
            raise ConfigError("restricted mapping sets require a pair with ground truth")


def run_sweep(config: dict, jobs: int = 1, seeds_override: list[int] | None = None) -> list[dict]:
    """All cell records of the sweep, in deterministic config order."""
    validate_config(config)
    seeds = seeds_override if seeds_override is not None else [int(s) for s in config["seeds"]]
    pair_spec = config["pair"]
    cells = [
        (pair_spec, method, float(gamma), int(seed))
        for method in config["methods"]
        for gamma in method["gammas"]
        for seed in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell_worker, cells))
    else:
        rows = [_cell_worker(cell) for cell in cells]
    return rows


def aggregate_rows(rows: list[dict]) -> list[dict]:
    """Mean and sample-std rows per (method, gamma), over successful cells."""
    groups: dict[tuple[str, float], list[dict]] = {}
    order: list[tuple[str, float]] = []
    for row in rows:
        key = (row["method"], row["gamma"])
        if key not in groups:
            groups[key] = []
            order.append(key)
        if not row["error"]:
            groups[key].append(row)
    out = []
    numeric = ["matches", "mismatches", "neutrals", "objective", "accuracy", "wall_ms"]
    for key in order:
        ok_rows = groups[key]
        for stat in ("mean", "std"):
            agg: dict = {"method": key[0], "gamma": key[1], "seed": stat, "error": ""}
            for col in numeric:
                values = [r[col] for r in ok_rows if r[col] is not None]
                if not values:
                    agg[col] = None
                elif stat == "mean":
                    agg[col] = float(np.mean(values))
                else:
                    agg[col] = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
            out.append(agg)
    return out


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def sweep_rows_to_csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows + aggregate_rows(rows):
        writer.writerow([_format_cell(row.get(col)) for col in CSV_COLUMNS])
    return buffer.getvalue()
