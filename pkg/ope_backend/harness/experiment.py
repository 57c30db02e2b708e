"""
Experiment sweeps: estimator error against the exact policy value, over behavior exploration levels,
sample sizes, methods, abstractions and replications.

Every (epsilon, n, replication) cell draws one dataset from a seed derived from the base seed and the
cell coordinates; all (method, abstraction) pairs in the cell share it. Results are written as a
versioned raw CSV plus an aggregated CSV, both byte-deterministic for a given config.
"""
import csv
import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from abstraction.partition import Partition
from abstraction.refinement import coarsest_backward, coarsest_forward
from abstraction.two_step import two_step
from estimators.dispatch import run_estimator
from generators.instances import build_instance
from harness.config import ExperimentConfig
from harness.constants import AGGREGATE_COLUMNS, RAW_COLUMNS, RESULTS_SCHEMA
from harness.run_logger import RunLogger
from mdp.model import MdpModel, PolicyTable
from simulation.rng import derive_seed
from simulation.sampler import sample_trajectories
from solver.stationary import stationary_distribution
from solver.value import policy_value

logger = logging.getLogger(__name__)

RAW_FILE = "results.csv"
AGGREGATE_FILE = "results_aggregated.csv"

Row = Dict[str, str]


@dataclass(frozen=True)
class EpsilonSetting:
    """
    Exact model, policies, oracle value and partitions for one exploration level.

    When the instance itself cannot be built, error holds the reason and the model fields are None.
    """
    index: int
    epsilon: float
    mdp: Optional[MdpModel]
    pi: Optional[PolicyTable]
    b: Optional[PolicyTable]
    oracle: Optional[float]
    partitions: Dict[str, Optional[Partition]] = field(default_factory=dict)
    partition_errors: Dict[str, str] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass
class ExperimentResult:
    raw_path: Path
    aggregate_path: Path
    rows: List[Row]
    aggregates: List[Row]
    failures: int
    resumed_cells: int


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def cell_seed(config: ExperimentConfig, eps_index: int, n: int, replication: int) -> int:
    return derive_seed(config.base_seed, eps_index, n, replication)


def prepare_setting(config: ExperimentConfig, index: int) -> EpsilonSetting:
    """
    Build the instance for epsilons[index] and compute every requested partition from the exact model.

    A partition that cannot be computed is recorded in partition_errors; its rows fail, the sweep goes on.
    Likewise a failure to build the instance, its stationary law or its exact value is recorded in
    error and fails every row of this epsilon only.
    """
    epsilon = config.epsilons[index]
    spec = config.generator
    try:
        instance = build_instance(
            spec.kind,
            spec.seed,
            n_states=spec.n_states,
            n_actions=spec.n_actions,
            n_noise=spec.n_noise,
            epsilon=epsilon,
            gamma=spec.gamma,
            reward_noise_std=spec.reward_noise_std,
            sizes=spec.sizes,
        )
        mdp = instance.mdp
        if config.init_mode == "stationary":
            mdp = mdp.with_initial(stationary_distribution(mdp, instance.b))
        oracle = policy_value(mdp, instance.pi)
    except Exception as e:
        logger.error(f"Instance for epsilon={epsilon} could not be built: {e}")
        return EpsilonSetting(index, epsilon, None, None, None, None, error=f"{type(e).__name__}: {e}")

    partitions: Dict[str, Optional[Partition]] = {}
    errors: Dict[str, str] = {}
    for mode in config.abstractions:
        try:
            if mode == "none":
                partitions[mode] = None
            elif mode == "forward":
                partitions[mode] = coarsest_forward(mdp, instance.pi, config.tolerance)
            elif mode == "backward":
                partitions[mode] = coarsest_backward(mdp, instance.pi, instance.b, config.tolerance)
            else:
                partitions[mode] = two_step(mdp, instance.pi, instance.b, config.tolerance).partition
        except Exception as e:
            logger.error(f"Abstraction '{mode}' failed at epsilon={epsilon}: {e}")
            errors[mode] = f"{type(e).__name__}: {e}"

    logger.info(f"epsilon={epsilon}: {mdp.n_states} states, J = {oracle:.6f}, blocks "
                f"{ {mode: (p.n_blocks if p is not None else mdp.n_states) for mode, p in partitions.items()} }")
    return EpsilonSetting(index, epsilon, mdp, instance.pi, instance.b, oracle, partitions, errors)


def run_cell(setting: EpsilonSetting, config: ExperimentConfig, n: int, replication: int) -> List[Row]:
    """All (method, abstraction) rows of one cell on a shared dataset."""
    seed = cell_seed(config, setting.index, n, replication)
    base = {
        "epsilon": _fmt(float(setting.epsilon)),
        "n": str(n),
        "replication": str(replication),
        "seed": str(seed),
        "oracle": _fmt(setting.oracle),
    }
    dataset, data_error = None, setting.error
    if data_error is None:
        try:
            dataset = sample_trajectories(setting.mdp, setting.b, n, config.horizon, seed)
        except Exception as e:
            data_error = f"{type(e).__name__}: {e}"

    rows = []
    for method in config.methods:
        for mode in config.abstractions:
            row = {**base, "method": method, "abstraction": mode}
            part = setting.partitions.get(mode)
            if setting.error is None:
                row["n_blocks"] = str(part.n_blocks if part is not None else setting.mdp.n_states)
            failure = data_error or setting.partition_errors.get(mode)
            if failure is None:
                try:
                    result = run_estimator(method, dataset, setting.pi, part, setting.mdp.gamma)
                    error = result.estimate - setting.oracle
                    row.update(estimate=_fmt(result.estimate), error=_fmt(error), squared_error=_fmt(error ** 2),
                               status="ok", message="")
                except Exception as e:
                    failure = f"{type(e).__name__}: {e}"
            if failure is not None:
                row.update(estimate="", error="", squared_error="", status="error", message=failure)
            rows.append({column: row.get(column, "") for column in RAW_COLUMNS})
    return rows


def _cell_task(args: Tuple[EpsilonSetting, ExperimentConfig, int, int]) -> List[Row]:
    return run_cell(*args)


def _sort_key(config: ExperimentConfig):
    methods = {m: i for i, m in enumerate(config.methods)}
    modes = {m: i for i, m in enumerate(config.abstractions)}

    def key(row: Row):
        return (float(row["epsilon"]), int(row["n"]), int(row["replication"]),
                methods.get(row["method"], len(methods)), modes.get(row["abstraction"], len(modes)))
    return key


def write_rows(path: Path, columns: Sequence[str], rows: Sequence[Row]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(RESULTS_SCHEMA + "\n")
        writer = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def read_rows(path: Path) -> List[Row]:
    """
    Rows of a results CSV written by write_rows.

    Raises:
        ValueError: the file carries a different schema line
    """
    with open(path, newline="", encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if header != RESULTS_SCHEMA:
            raise ValueError(f"{path} has schema line {header!r}, expected {RESULTS_SCHEMA!r}")
        return [dict(row) for row in csv.DictReader(f)]


def aggregate(rows: Sequence[Row]) -> List[Row]:
    """
    Per (epsilon, n, method, abstraction): MSE, bias, standard error of the mean estimate, median
    squared error over successful replications, and the failure count.
    """
    groups: Dict[Tuple[str, str, str, str], List[Row]] = {}
    for row in rows:
        groups.setdefault((row["epsilon"], row["n"], row["method"], row["abstraction"]), []).append(row)

    out = []
    for (epsilon, n, method, mode), members in groups.items():
        ok = [r for r in members if r["status"] == "ok"]
        summary = {
            "epsilon": epsilon,
            "n": n,
            "method": method,
            "abstraction": mode,
            "replications": str(len(members)),
            "failures": str(len(members) - len(ok)),
        }
        if ok:
            errors = np.array([float(r["error"]) for r in ok])
            estimates = np.array([float(r["estimate"]) for r in ok])
            squared = errors ** 2
            stderr = float(estimates.std(ddof=1) / np.sqrt(len(ok))) if len(ok) > 1 else 0.0
            summary.update(
                mse=_fmt(float(squared.mean())),
                bias=_fmt(float(errors.mean())),
                stderr=_fmt(stderr),
                median_squared_error=_fmt(float(np.median(squared))),
                mean_n_blocks=_fmt(float(np.mean([float(r["n_blocks"]) for r in ok]))),
            )
        out.append({column: summary.get(column, "") for column in AGGREGATE_COLUMNS})
    return out


def _completed_cells(existing: Sequence[Row], config: ExperimentConfig) -> Dict[Tuple[str, str, str], List[Row]]:
    """Existing rows grouped by cell, keeping only cells that belong to this config and are complete."""
    expected = {(m, a) for m in config.methods for a in config.abstractions}
    wanted = {(_fmt(float(eps)), str(n), str(rep))
              for eps in config.epsilons for n in config.sample_sizes for rep in range(config.replications)}
    cells: Dict[Tuple[str, str, str], List[Row]] = {}
    for row in existing:
        cells.setdefault((row["epsilon"], row["n"], row["replication"]), []).append(row)
    return {
        key: rows for key, rows in cells.items()
        if key in wanted and {(r["method"], r["abstraction"]) for r in rows} == expected
        and len(rows) == len(expected)
    }


def run_experiment(config: ExperimentConfig, out_dir: Optional[Union[str, Path]] = None, jobs: int = 1,
                   resume: bool = True) -> ExperimentResult:
    """
    Run the sweep and write results.csv and results_aggregated.csv.

    Args:
        config: Validated experiment config
        out_dir: Output directory (overrides OPE_OUTPUT_DIR and config.output)
        jobs: Worker processes for cells
        resume: Keep rows of completed cells from an existing results.csv

    Returns:
        ExperimentResult with the written paths, rows and failure count
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    out = config.output_dir(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    raw_path, aggregate_path = out / RAW_FILE, out / AGGREGATE_FILE
    run_log = RunLogger(out / "logs")

    done: Dict[Tuple[str, str, str], List[Row]] = {}
    if resume and raw_path.exists():
        done = _completed_cells(read_rows(raw_path), config)
        logger.info(f"Resuming: {len(done)} completed cell(s) kept from {raw_path}")

    tasks = []
    for index in range(len(config.epsilons)):
        pending = [(n, rep) for n in config.sample_sizes for rep in range(config.replications)
                   if (_fmt(float(config.epsilons[index])), str(n), str(rep)) not in done]
        if not pending:
            continue
        setting = prepare_setting(config, index)
        if setting.error is not None:
            run_log.log_error(f"eps={setting.epsilon}", "instance", setting.error)
        for mode, message in setting.partition_errors.items():
            run_log.log_error(f"eps={setting.epsilon}", f"abstraction/{mode}", message)
        tasks += [(setting, config, n, rep) for n, rep in pending]

    logger.info(f"Running {len(tasks)} cell(s) with {jobs} job(s)")
    if jobs > 1 and len(tasks) > 1:
        with Pool(min(jobs, len(tasks))) as pool:
            results = pool.map(_cell_task, tasks)
    else:
        results = [_cell_task(task) for task in tasks]

    for (setting, _, n, rep), cell_rows in zip(tasks, results):
        cell = f"eps={setting.epsilon} n={n} rep={rep}"
        for row in cell_rows:
            stage = f"{row['method']}/{row['abstraction']}"
            if row["status"] == "ok":
                run_log.log_event(cell, stage, estimate=float(row["estimate"]),
                                  metadata={"n_blocks": int(row["n_blocks"])})
            else:
                run_log.log_error(cell, stage, row["message"])

    rows = [row for cell_rows in done.values() for row in cell_rows]
    rows += [row for cell_rows in results for row in cell_rows]
    rows.sort(key=_sort_key(config))
    aggregates = aggregate(rows)
    write_rows(raw_path, RAW_COLUMNS, rows)
    write_rows(aggregate_path, AGGREGATE_COLUMNS, aggregates)

    failures = sum(row["status"] != "ok" for row in rows)
    if failures:
        logger.warning(f"{failures} of {len(rows)} row(s) failed; see the status/message columns")
    run_log.close({"rows": len(rows), "failures": failures, "resumed_cells": len(done)})
    logger.info(f"Wrote {raw_path} and {aggregate_path}")
    return ExperimentResult(raw_path, aggregate_path, rows, aggregates, failures, len(done))
