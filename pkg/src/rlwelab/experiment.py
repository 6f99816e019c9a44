"""Trial protocol and degree sweeps with deterministic per-trial seeding.

Every trial derives its random streams from (master_seed, degree,
trial_index), so results are reproducible bit for bit regardless of worker
count or scheduling, and adding degrees to a sweep never perturbs the
trials of other degrees.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field

import numpy as np

from .attack import attack
from .crypto import attack_succeeds, encrypt, keygen, random_plaintext
from .lattice import LllParams, lll_reduce
from .ring import GaussianParams, RingContext

__all__ = [
    "SweepConfig",
    "TrialRecord",
    "DegreeSummary",
    "SweepReport",
    "run_trial",
    "run_sweep",
    "aggregate",
    "write_records_csv",
    "read_records_csv",
    "CSV_HEADER",
]

DEFAULT_Q = 1997
DEFAULT_SIGMA = 4.0 / math.sqrt(2.0 * math.pi)

CSV_HEADER = ["degree", "trial", "success", "failure_kind", "time_s", "root_hermite", "seed"]


@dataclass(frozen=True)
class SweepConfig:
    degrees: tuple
    q: int = DEFAULT_Q
    sigma: float = DEFAULT_SIGMA
    trials_per_degree: int = 100
    delta: float = 0.99
    master_seed: int = 0
    output_path: str | None = None
    parallelism: int = 0  # 0 means "use all cores"
    embedding_m: int = 1
    max_iterations: int = 10_000_000

    def __post_init__(self):
        degrees = tuple(sorted(set(int(d) for d in self.degrees)))
        if not degrees:
            raise ValueError("degrees must be non-empty")
        if any(d < 1 for d in degrees):
            raise ValueError("degrees must be positive")
        object.__setattr__(self, "degrees", degrees)
        if self.trials_per_degree < 1:
            raise ValueError("trials_per_degree must be >= 1")

    @property
    def jobs(self) -> int:
        return self.parallelism if self.parallelism > 0 else (os.cpu_count() or 1)


@dataclass(frozen=True)
class TrialRecord:
    degree: int
    trial_index: int
    success: bool
    failure_kind: str
    wall_time_s: float
    root_hermite: float
    seed: int

    def __post_init__(self):
        if self.success and self.failure_kind != "none":
            raise ValueError("successful trials must have failure_kind 'none'")


@dataclass(frozen=True)
class DegreeSummary:
    degree: int
    trials: int
    successes: int
    success_rate: float
    mean_time_s: float


@dataclass
class SweepReport:
    summaries: list[DegreeSummary]
    records: list[TrialRecord] = field(repr=False, default_factory=list)

    def summary_for(self, degree: int) -> DegreeSummary:
        for s in self.summaries:
            if s.degree == degree:
                return s
        raise KeyError(f"no summary for degree {degree}")


def _trial_seed_sequence(master_seed: int, degree: int, trial_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(degree, trial_index))


def run_trial(cfg: SweepConfig, degree: int, trial_index: int) -> TrialRecord:
    """One keygen -> encrypt -> attack -> check cycle.

    The recorded time is the attack's own window (embedding pipeline start
    to secret recovery); instance generation and encryption sit outside it.
    Internal failures become failure kinds, never exceptions.
    """
    ss = _trial_seed_sequence(cfg.master_seed, degree, trial_index)
    seed = int(ss.generate_state(1, np.uint64)[0])
    try:
        ss_key, ss_msg, ss_enc = ss.spawn(3)
        ctx = RingContext(degree, cfg.q)
        gauss = GaussianParams(cfg.sigma)
        kp = keygen(ctx, np.random.default_rng(ss_key), gauss)
        m = random_plaintext(ctx, np.random.default_rng(ss_msg))
        c = encrypt(kp.public, m, np.random.default_rng(ss_enc), gauss)
        params = LllParams(delta=cfg.delta, max_iterations=cfg.max_iterations)
        result = attack(kp.public, params)
        success = attack_succeeds(kp, m, c, result)
        failure_kind = "none" if success else result.failure_kind
        return TrialRecord(
            degree=degree,
            trial_index=trial_index,
            success=success,
            failure_kind=failure_kind,
            wall_time_s=result.wall_time_s,
            root_hermite=result.root_hermite,
            seed=seed,
        )
    except Exception:
        # a crashed trial still yields a record so sweeps never lose rows
        return TrialRecord(
            degree=degree,
            trial_index=trial_index,
            success=False,
            failure_kind="none",
            wall_time_s=float("nan"),
            root_hermite=float("nan"),
            seed=seed,
        )


def aggregate(records) -> SweepReport:
    """Per-degree success rate (successes/trials) and mean time over all trials."""
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    by_degree: dict[int, list[TrialRecord]] = {}
    for rec in records:
        by_degree.setdefault(rec.degree, []).append(rec)
    summaries = []
    for degree in sorted(by_degree):
        recs = by_degree[degree]
        successes = sum(1 for r in recs if r.success)
        times = [r.wall_time_s for r in recs if not math.isnan(r.wall_time_s)]
        mean_time = sum(times) / len(times) if times else float("nan")
        summaries.append(
            DegreeSummary(
                degree=degree,
                trials=len(recs),
                successes=successes,
                success_rate=successes / len(recs),
                mean_time_s=mean_time,
            )
        )
    return SweepReport(summaries=summaries, records=records)


def _record_row(rec: TrialRecord) -> list[str]:
    return [
        str(rec.degree),
        str(rec.trial_index),
        "true" if rec.success else "false",
        rec.failure_kind,
        repr(rec.wall_time_s),
        repr(rec.root_hermite),
        str(rec.seed),
    ]


def write_records_csv(path: str, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(_record_row(rec))


def read_records_csv(path: str) -> list[TrialRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header}")
        for row in reader:
            records.append(
                TrialRecord(
                    degree=int(row[0]),
                    trial_index=int(row[1]),
                    success=row[2] == "true",
                    failure_kind=row[3],
                    wall_time_s=float(row[4]),
                    root_hermite=float(row[5]),
                    seed=int(row[6]),
                )
            )
    return records


def _worker(args) -> TrialRecord:
    cfg, degree, trial_index = args
    return run_trial(cfg, degree, trial_index)


def run_sweep(cfg: SweepConfig, progress=None) -> SweepReport:
    """Run trials_per_degree trials for every degree; stream CSV rows as
    trials finish (in deterministic degree/trial order) when output_path is
    set.

    ``progress`` is an optional callable fed each TrialRecord as it is
    committed.
    """
    tasks = [(degree, idx) for degree in cfg.degrees for idx in range(cfg.trials_per_degree)]
    order = {task: i for i, task in enumerate(tasks)}
    results: dict[int, TrialRecord] = {}
    records: list[TrialRecord] = []

    writer = None
    fh = None
    if cfg.output_path is not None:
        fh = open(cfg.output_path, "w", newline="")
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        fh.flush()

    next_to_commit = 0

    def commit_ready():
        nonlocal next_to_commit
        while next_to_commit in results:
            rec = results.pop(next_to_commit)
            records.append(rec)
            if writer is not None:
                writer.writerow(_record_row(rec))
                fh.flush()
            if progress is not None:
                progress(rec)
            next_to_commit += 1

    try:
        if cfg.jobs <= 1 or len(tasks) == 1:
            for degree, idx in tasks:
                rec = run_trial(cfg, degree, idx)
                results[order[(degree, idx)]] = rec
                commit_ready()
        else:
            # compile the reduction kernel before forking so workers inherit it
            lll_reduce([[1, 0], [1, 1]], method="fp")
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                futures = {
                    pool.submit(_worker, (cfg, degree, idx)): (degree, idx)
                    for degree, idx in tasks
                }
                pending = set(futures)
                while pending:
                    done, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in done:
                        task = futures[fut]
                        results[order[task]] = fut.result()
                    commit_ready()
    finally:
        if fh is not None:
            fh.close()

    return SweepReport(summaries=aggregate(records).summaries, records=records)
