"""Usability-evaluation statistics.

Four pieces of the evaluation workflow:

* per-task and overall means over a task/participant grid (completion times
  in seconds, or 1..5 difficulty scores),
* three-point survey summaries: frequency, percentage, mean and standard
  deviation per item, an overall row per factor, and a verdict band for the
  factor mean,
* the problem-discovery curve 1 - (1 - lambda)^n and its inverse,
* subgroup resampling: how much of the full group's problem set random
  subgroups of size k rediscover.

Reported numbers are rounded half-up to two decimals; full precision is
always kept alongside.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np


class StatsError(ValueError):
    """Input data violates a documented invariant."""


class CsvFormatError(ValueError):
    """Input file is not in the expected CSV shape."""


class EmptyMatrix(StatsError):
    pass


class OutOfScale(StatsError):
    pass


class RowSumMismatch(StatsError):
    pass


class BadGroupSize(StatsError):
    pass


def round2(x: float) -> float:
    """Round half-up to two decimals (as printed reports do)."""
    return float(Decimal(str(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


# ---------------------------------------------------------------------------
# task/participant grids


@dataclass(frozen=True, eq=False)
class TaskMatrix:
    """Complete tasks x participants grid of measurements."""

    tasks: tuple[str, ...]
    participants: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.tasks), len(self.participants)):
            raise StatsError(
                f"grid shape {values.shape} does not match "
                f"{len(self.tasks)} tasks x {len(self.participants)} participants"
            )
        if not np.isfinite(values).all():
            raise StatsError("grid has holes or non-finite values")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_csv(cls, path: str | Path) -> "TaskMatrix":
        rows = _read_csv_rows(path)
        if len(rows) < 2 or len(rows[0]) < 2:
            raise CsvFormatError(f"{path}: need a header row and at least one task row")
        participants = tuple(rows[0][1:])
        tasks = []
        values = []
        for row in rows[1:]:
            if len(row) != len(rows[0]):
                raise CsvFormatError(f"{path}: row {row[0]!r} has {len(row) - 1} values, expected {len(participants)}")
            tasks.append(row[0])
            try:
                values.append([float(v) for v in row[1:]])
            except ValueError as e:
                raise CsvFormatError(f"{path}: row {row[0]!r}: {e}") from None
        return cls(tuple(tasks), participants, np.array(values))


@dataclass(frozen=True)
class MeansReport:
    labels: tuple[str, ...]
    per_task: tuple[float, ...]
    overall: float

    @property
    def per_task_rounded(self) -> tuple[float, ...]:
        return tuple(round2(v) for v in self.per_task)

    @property
    def overall_rounded(self) -> float:
        return round2(self.overall)


def task_means(m: TaskMatrix) -> MeansReport:
    """Row means plus the grand mean of a completion-time grid (seconds)."""
    if m.values.size == 0:
        raise EmptyMatrix("no measurements")
    if (m.values <= 0).any():
        raise StatsError("completion times must be positive")
    per_task = tuple(float(v) for v in m.values.mean(axis=1))
    return MeansReport(m.tasks, per_task, float(m.values.mean()))


def difficulty_means(m: TaskMatrix) -> MeansReport:
    """Row means plus the grand mean of a 1..5 difficulty grid."""
    if m.values.size == 0:
        raise EmptyMatrix("no measurements")
    if ((m.values < 1) | (m.values > 5)).any() or (m.values != np.round(m.values)).any():
        raise OutOfScale("difficulty scores must be integers in 1..5")
    per_task = tuple(float(v) for v in m.values.mean(axis=1))
    return MeansReport(m.tasks, per_task, float(m.values.mean()))


# ---------------------------------------------------------------------------
# three-point surveys

LIKERT_CODES = (1, 2, 3)  # No, Partly, Yes

BANDS = (
    ("No", 1.00, 1.66),
    ("Partly", 1.67, 2.33),
    ("Yes", 2.34, 3.00),
)


def classify_band(mean: float) -> str:
    """Verdict for a 1..3 mean: round to two decimals, then inclusive ranges."""
    r = round2(mean)
    for name, lo, hi in BANDS:
        if lo <= r <= hi:
            return name
    raise StatsError(f"mean {mean} outside the 1..3 scale")


@dataclass(frozen=True)
class SurveyItem:
    label: str
    f_no: int
    f_partly: int
    f_yes: int

    def __post_init__(self) -> None:
        for f in (self.f_no, self.f_partly, self.f_yes):
            if f < 0 or f != int(f):
                raise StatsError(f"frequencies must be non-negative integers, got {f}")

    @property
    def total(self) -> int:
        return self.f_no + self.f_partly + self.f_yes


@dataclass(frozen=True)
class SurveyTable:
    """Per-item reply frequencies; every row must sum to the same head count."""

    items: tuple[SurveyItem, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise EmptyMatrix("survey has no items")
        totals = {item.total for item in self.items}
        if len(totals) != 1:
            raise RowSumMismatch(f"item reply counts differ: {sorted(totals)}")
        if self.items[0].total == 0:
            raise RowSumMismatch("zero participants")

    @property
    def participants(self) -> int:
        return self.items[0].total

    @classmethod
    def from_csv(cls, path: str | Path) -> "SurveyTable":
        rows = _read_csv_rows(path)
        if len(rows) < 2:
            raise CsvFormatError(f"{path}: need a header row and at least one item row")
        items = []
        for row in rows[1:]:
            if len(row) != 4:
                raise CsvFormatError(f"{path}: expected 'label,no,partly,yes', got {len(row)} fields")
            try:
                items.append(SurveyItem(row[0], int(row[1]), int(row[2]), int(row[3])))
            except ValueError as e:
                raise CsvFormatError(f"{path}: row {row[0]!r}: {e}") from None
        return cls(tuple(items))


@dataclass(frozen=True)
class ItemStats:
    label: str
    f: tuple[int, int, int]
    pct: tuple[float, float, float]
    mean: float
    std: float


@dataclass(frozen=True)
class SurveyReport:
    items: tuple[ItemStats, ...]
    overall_f: tuple[float, float, float]
    overall_pct: tuple[float, float, float]
    overall_mean: float
    band: str


def survey_stats(table: SurveyTable) -> SurveyReport:
    """Frequency/percentage/mean per item, the factor overall row, and its band."""
    p = table.participants
    items = []
    for item in table.items:
        f = (item.f_no, item.f_partly, item.f_yes)
        mean = sum(code * freq for code, freq in zip(LIKERT_CODES, f)) / p
        mean_sq = sum(code * code * freq for code, freq in zip(LIKERT_CODES, f)) / p
        items.append(
            ItemStats(
                label=item.label,
                f=f,
                pct=tuple(100.0 * freq / p for freq in f),
                mean=mean,
                std=math.sqrt(max(0.0, mean_sq - mean * mean)),
            )
        )
    n = len(items)
    overall_f = tuple(sum(item.f[i] for item in items) / n for i in range(3))
    overall_pct = tuple(sum(item.pct[i] for item in items) / n for i in range(3))
    overall_mean = sum(item.mean for item in items) / n
    return SurveyReport(tuple(items), overall_f, overall_pct, overall_mean, classify_band(overall_mean))


# ---------------------------------------------------------------------------
# problem-discovery model


def discovery_proportion(lam: float, n: int) -> float:
    """Expected fraction of problems found by n evaluators: 1 - (1 - lambda)^n."""
    if not 0.0 < lam <= 1.0:
        raise StatsError(f"lambda {lam} outside (0, 1]")
    if n < 0:
        raise StatsError("evaluator count must be non-negative")
    return 1.0 - (1.0 - lam) ** n


def solve_lambda(target_p: float, n: int) -> float:
    """Per-user discovery probability hitting target_p with n evaluators."""
    if not 0.0 < target_p < 1.0:
        raise StatsError(f"target proportion {target_p} outside (0, 1)")
    if n < 1:
        raise StatsError("evaluator count must be positive")
    return 1.0 - (1.0 - target_p) ** (1.0 / n)


# ---------------------------------------------------------------------------
# subgroup resampling


@dataclass(frozen=True, eq=False)
class DiscoveryMatrix:
    """Users x problems hit grid; a cell is true when that user found that problem."""

    found: np.ndarray

    def __post_init__(self) -> None:
        found = np.asarray(self.found, dtype=bool)
        if found.ndim != 2 or found.shape[0] < 1:
            raise StatsError("need a 2-D grid with at least one user")
        object.__setattr__(self, "found", found)

    @property
    def users(self) -> int:
        return self.found.shape[0]

    @property
    def problems(self) -> int:
        """Problems found by at least one user in the full group."""
        return int(self.found.any(axis=0).sum())

    @classmethod
    def from_csv(cls, path: str | Path) -> "DiscoveryMatrix":
        rows = _read_csv_rows(path)
        if len(rows) < 2 or len(rows[0]) < 2:
            raise CsvFormatError(f"{path}: need a header row and at least one user row")
        width = len(rows[0])
        grid = []
        for row in rows[1:]:
            if len(row) != width:
                raise CsvFormatError(f"{path}: row {row[0]!r} has {len(row) - 1} cells, expected {width - 1}")
            try:
                cells = [int(v) for v in row[1:]]
            except ValueError as e:
                raise CsvFormatError(f"{path}: row {row[0]!r}: {e}") from None
            if any(v not in (0, 1) for v in cells):
                raise CsvFormatError(f"{path}: row {row[0]!r}: cells must be 0 or 1")
            grid.append(cells)
        return cls(np.array(grid, dtype=bool))


def synthetic_discovery_matrix(users: int, problems: int, hit_prob: float, seed: int) -> DiscoveryMatrix:
    """Seeded random hit grid, e.g. for resampling demonstrations."""
    rng = np.random.default_rng(seed)
    return DiscoveryMatrix(rng.random((users, problems)) < hit_prob)


@dataclass(frozen=True)
class ResampleReport:
    k: int
    trials: int
    min_pct: float
    mean_pct: float
    std_pct: float


def subgroup_resample(d: DiscoveryMatrix, k: int, trials: int, rng_seed: int = 0) -> ResampleReport:
    """Sample k users without replacement per trial; report min/mean/std coverage.

    Coverage is the percentage of the full group's problems the subgroup
    finds. Each trial draws from its own seeded stream, so results are
    deterministic for a given seed regardless of evaluation order. The spread
    is the population standard deviation over trials.
    """
    if not 1 <= k <= d.users:
        raise BadGroupSize(f"group size {k} outside 1..{d.users}")
    if trials < 1:
        raise StatsError("need at least one trial")
    full = d.found.any(axis=0)
    denom = int(full.sum())
    cols = d.found[:, full]
    pcts = np.empty(trials, dtype=float)
    for i in range(trials):
        rng = np.random.default_rng((rng_seed, i))
        picked = rng.choice(d.users, size=k, replace=False)
        if denom == 0:
            pcts[i] = 100.0  # vacuously complete
        else:
            pcts[i] = 100.0 * int(cols[picked].any(axis=0).sum()) / denom
    return ResampleReport(k, trials, float(pcts.min()), float(pcts.mean()), float(pcts.std()))


# ---------------------------------------------------------------------------


def _read_csv_rows(path: str | Path) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as e:
        raise CsvFormatError(f"{path}: {e}") from None
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    return [[cell.strip() for cell in row] for row in rows]
