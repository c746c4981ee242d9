"""Quantitative evaluation: published table reproduction, semantics agreement, sweeps."""
from __future__ import annotations

import functools
import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import polars as pl

from .bsef import ExtractionConfig, extract_qbaf, uniform_scores
from .config.settings import TABLE_TOLERANCE, Settings
from .core import DecisionModel
from .exceptions import ConfigError, EmptySequenceError, LengthMismatchError
from .framework import BipolarFramework, running_example, validate_for_decisions
from .preferences import GapKind, PreferenceOrdering, parse_dsl
from .semantics import SemanticsKind, decide, evaluate

logger = logging.getLogger(__name__)

MAX_SEED = 2**64


def _check_interval(name: str, interval: Tuple[float, float]) -> None:
    low, high = interval
    if not 0.0 <= low <= high <= 1.0:
        raise ConfigError(f"{name} must satisfy 0 <= low <= high <= 1, got {interval}")


@dataclass(frozen=True)
class StudyConfig:
    sample_count: int
    seed: int
    centralisation: bool = False
    normalisation: bool = False
    top_range: Tuple[float, float] = (0.55, 1.0)
    bot_range: Tuple[float, float] = (0.0, 0.45)
    ratio_choices: Tuple[float, ...] = (2.0, 3.0, 4.0, 5.0, 6.0)
    delta: float = 1.0
    framework: BipolarFramework = field(default_factory=running_example)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ConfigError(f"sample_count must be positive, got {self.sample_count}")
        if not 0 <= self.seed < MAX_SEED:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.centralisation and self.normalisation:
            raise ConfigError("centralisation and normalisation modes are exclusive")
        _check_interval("top_range", self.top_range)
        _check_interval("bot_range", self.bot_range)
        if self.centralisation and self.top_range[0] < 0.5:
            raise ConfigError("centralisation needs top_range within [0.5, 1]")
        if not self.centralisation and self.bot_range[1] > self.top_range[0]:
            raise ConfigError(
                f"bot_range {self.bot_range} must lie below top_range {self.top_range}"
            )
        if not self.ratio_choices:
            raise ConfigError("ratio_choices must not be empty")
        if any(not ratio > 1.0 for ratio in self.ratio_choices):
            raise ConfigError(f"every ratio must exceed 1, got {self.ratio_choices}")
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if len(self.framework.non_decisions) < 2:
            raise ConfigError("sampling orderings needs at least two non-decision arguments")

    @classmethod
    def from_settings(
        cls, settings: Settings, sample_count: int, seed: int, **overrides: Any
    ) -> "StudyConfig":
        values: Dict[str, Any] = {
            "top_range": settings.top_range,
            "bot_range": settings.bot_range,
            "ratio_choices": settings.ratio_choices,
            "delta": settings.delta,
            "workers": settings.workers,
        }
        values.update(overrides)
        return cls(sample_count=sample_count, seed=seed, **values)


@functools.lru_cache(maxsize=None)
def fubini(n: int) -> int:
    """Number of ordered partitions of an n-element set."""
    if n == 0:
        return 1
    return sum(math.comb(n, k) * fubini(n - k) for k in range(1, n + 1))


def _ordered_partition(rng: np.random.Generator, items: List[str]) -> List[List[str]]:
    tiers: List[List[str]] = []
    remaining = list(items)
    while remaining:
        m = len(remaining)
        sizes = np.arange(1, m + 1)
        weights = np.array([math.comb(m, j) * fubini(m - j) for j in sizes], dtype=float)
        size = int(rng.choice(sizes, p=weights / weights.sum()))
        chosen = set(rng.choice(remaining, size=size, replace=False).tolist())
        tiers.append(sorted(chosen))
        remaining = [arg for arg in remaining if arg not in chosen]
    return tiers


def sample_scenario(
    rng: np.random.Generator, config: StudyConfig
) -> Tuple[PreferenceOrdering, ExtractionConfig]:
    """A uniformly random ordering of the non-decision arguments with random design choices."""
    arguments = sorted(config.framework.non_decisions)
    tiers = _ordered_partition(rng, arguments)
    # A single tier expresses no preference; draw again.
    while len(tiers) < 2:
        tiers = _ordered_partition(rng, arguments)
    gaps = [
        GapKind.MUCH_GREATER if rng.integers(0, 2) else GapKind.GREATER
        for _ in range(len(tiers) - 1)
    ]
    ordering = PreferenceOrdering.from_tiers(tiers, gaps)

    if config.normalisation:
        top, bot = 1.0, 0.0
    elif config.centralisation:
        top = float(rng.uniform(*config.top_range))
        bot = 1.0 - top
    else:
        top = float(rng.uniform(*config.top_range))
        bot = min(float(rng.uniform(*config.bot_range)), top)
    ratio = float(rng.choice(config.ratio_choices))
    extraction = ExtractionConfig.nu1(config.delta, ratio * config.delta, top, bot)
    logger.debug("sampled %s with %s", ordering, extraction.to_fields())
    return ordering, extraction


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one sample, fixed by the seed and the sample index."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def cohen_kappa(labels1: Sequence[str], labels2: Sequence[str]) -> float:
    if len(labels1) != len(labels2):
        raise LengthMismatchError(
            f"label sequences differ in length: {len(labels1)} vs {len(labels2)}"
        )
    if not labels1:
        raise EmptySequenceError("kappa needs at least one label pair")
    categories = sorted(set(labels1) | set(labels2))
    index = {label: i for i, label in enumerate(categories)}
    confusion = np.zeros((len(categories), len(categories)), dtype=np.int64)
    np.add.at(
        confusion,
        (np.array([index[x] for x in labels1]), np.array([index[x] for x in labels2])),
        1,
    )
    n = int(confusion.sum())
    observed = int(np.trace(confusion))
    expected = int(np.dot(confusion.sum(axis=1), confusion.sum(axis=0)))
    if expected == n * n:
        return 1.0 if observed == n else 0.0
    return (n * observed - expected) / (n * n - expected)


def _pair_key(first: SemanticsKind, second: SemanticsKind) -> str:
    return f"{first.label}-{second.label}"


@dataclass(frozen=True)
class StudyReport:
    sample_count: int
    seed: int
    centralisation: bool
    normalisation: bool
    agreement: Mapping[str, float]
    kappa: Mapping[str, float]
    decision_counts: Mapping[str, Mapping[str, int]]
    tie_counts: Mapping[str, int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "centralisation": self.centralisation,
            "normalisation": self.normalisation,
            "agreement": dict(self.agreement),
            "kappa": dict(self.kappa),
            "decision_counts": {k: dict(v) for k, v in self.decision_counts.items()},
            "tie_counts": dict(self.tie_counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _run_sample(config: StudyConfig, index: int) -> Tuple[str, ...]:
    ordering, extraction = sample_scenario(sample_rng(config.seed, index), config)
    model = DecisionModel(config.framework, ordering, extraction)
    return tuple(model.decide(kind).label for kind in SemanticsKind)


def run_agreement_study(config: StudyConfig) -> StudyReport:
    """Decide every sampled scenario under all semantics and compare the decisions.

    Results land in per-index slots, so the report does not depend on ``workers``.
    """
    validate_for_decisions(config.framework).raise_for_violations()
    logger.info(
        "running %d samples (seed %d, %d worker(s))",
        config.sample_count,
        config.seed,
        config.workers,
    )
    slots: List[Optional[Tuple[str, ...]]] = [None] * config.sample_count
    indices = range(config.sample_count)
    if config.workers == 1:
        for i in indices:
            slots[i] = _run_sample(config, i)
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for i, labels in zip(indices, pool.map(lambda j: _run_sample(config, j), indices)):
                slots[i] = labels

    kinds = list(SemanticsKind)
    columns = {kind: [row[k] for row in slots if row is not None] for k, kind in enumerate(kinds)}
    agreement: Dict[str, float] = {}
    kappa: Dict[str, float] = {}
    for first, second in itertools.combinations(kinds, 2):
        key = _pair_key(first, second)
        agreement[key] = float(
            np.mean(np.array(columns[first]) == np.array(columns[second]))
        )
        kappa[key] = cohen_kappa(columns[first], columns[second])

    decision_counts: Dict[str, Dict[str, int]] = {}
    tie_counts: Dict[str, int] = {}
    for kind in kinds:
        labels, counts = np.unique(np.array(columns[kind]), return_counts=True)
        decision_counts[kind.label] = {str(l): int(c) for l, c in zip(labels, counts)}
        tie_counts[kind.label] = decision_counts[kind.label].get("TIE", 0)
    logger.info("agreement %s, kappa %s", agreement, kappa)
    return StudyReport(
        sample_count=config.sample_count,
        seed=config.seed,
        centralisation=config.centralisation,
        normalisation=config.normalisation,
        agreement=agreement,
        kappa=kappa,
        decision_counts=decision_counts,
        tie_counts=tie_counts,
    )


@dataclass(frozen=True)
class TableRow:
    preferences: Optional[str]
    top: Optional[float]
    bot: Optional[float]
    ratio: Optional[float]
    # Published (slow, fast) strengths per semantics, and the option chosen.
    published: Mapping[SemanticsKind, Tuple[float, float]]
    chosen: str


def _row(
    preferences: Optional[str],
    top: Optional[float],
    bot: Optional[float],
    ratio: Optional[float],
    qe: Tuple[float, float],
    eb: Tuple[float, float],
    df: Tuple[float, float],
    chosen: str,
) -> TableRow:
    published = {SemanticsKind.QE: qe, SemanticsKind.EB: eb, SemanticsKind.DFQUAD: df}
    return TableRow(preferences, top, bot, ratio, published, chosen)


PUBLISHED_TABLE: Tuple[TableRow, ...] = (
    _row(None, None, None, None, (0.5, 0.51), (0.50, 0.52), (0.44, 0.63), "fast"),
    _row("c = f >> b = e > a = d", 0.9, 0.1, 3, (0.58, 0.33), (0.56, 0.39), (0.78, 0.23), "slow"),
    _row("c = f >> b = e > a = d", 0.9, 0.1, 5, (0.57, 0.32), (0.55, 0.39), (0.79, 0.2), "slow"),
    _row("c = f >> b = e > a = d", 0.75, 0.25, 5, (0.52, 0.4), (0.53, 0.43), (0.63, 0.38), "slow"),
    _row("b = e > a = d >> c = f", 0.8, 0.2, 3, (0.5, 0.63), (0.52, 0.60), (0.28, 0.87), "fast"),
    _row("b = e > a = d >> c = f", 0.6, 0.4, 3, (0.5, 0.53), (0.5, 0.54), (0.40, 0.71), "fast"),
    _row("a = d >> c = f > b = e", 0.8, 0.2, 4, (0.36, 0.6), (0.4, 0.59), (0.15, 0.76), "fast"),
    _row("a = d >> c = f > b = e", 1.0, 0.0, 4, (0.25, 0.7), (0.37, 0.65), (0.0, 0.9), "fast"),
)

OPTIONS = ("slow", "fast")
REPRODUCTION_COLUMNS = (
    "row",
    "semantics",
    "option",
    "computed",
    "paper",
    "delta",
    "decision_match",
)


@dataclass(frozen=True)
class ReproductionCell:
    row: int
    semantics: SemanticsKind
    option: str
    computed: float
    paper: float
    decision_match: bool

    @property
    def delta(self) -> float:
        return self.computed - self.paper


@dataclass(frozen=True)
class ReproductionReport:
    cells: Tuple[ReproductionCell, ...]

    def mismatches(self, tolerance: float = TABLE_TOLERANCE) -> List[ReproductionCell]:
        return [cell for cell in self.cells if abs(cell.delta) > tolerance]

    @property
    def decision_matches(self) -> int:
        """Number of (row, semantics) pairs whose chosen option agrees with the published one."""
        return len({(c.row, c.semantics) for c in self.cells if c.decision_match})

    @property
    def decision_total(self) -> int:
        return len({(c.row, c.semantics) for c in self.cells})

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "row": [c.row for c in self.cells],
                "semantics": [c.semantics.value for c in self.cells],
                "option": [c.option for c in self.cells],
                "computed": [c.computed for c in self.cells],
                "paper": [c.paper for c in self.cells],
                "delta": [c.delta for c in self.cells],
                "decision_match": [c.decision_match for c in self.cells],
            }
        )


def reproduce_published_tables(
    framework: Optional[BipolarFramework] = None,
    rows: Sequence[TableRow] = PUBLISHED_TABLE,
) -> ReproductionReport:
    """Evaluate the published preference/design-choice rows on the feeding-pace framework.

    Rows without preferences use 0.5 everywhere; the others use nu1 with delta = 1.
    """
    framework = framework or running_example()
    slow, fast = framework.decisions
    option_of = {slow: OPTIONS[0], fast: OPTIONS[1]}
    cells: List[ReproductionCell] = []
    for number, row in enumerate(rows, start=1):
        if row.preferences is None:
            scores = uniform_scores(framework)
        else:
            assert row.top is not None and row.bot is not None and row.ratio is not None
            extraction = ExtractionConfig.nu1(1.0, float(row.ratio), row.top, row.bot)
            scores = extract_qbaf(framework, parse_dsl(row.preferences), extraction)
        for kind in SemanticsKind:
            strengths = evaluate(framework, scores, kind)
            outcome = decide(strengths, framework.decisions)
            chosen = "tie" if outcome.is_tie else option_of[outcome.label]
            for decision, published in zip((slow, fast), row.published[kind]):
                cell = ReproductionCell(
                    row=number,
                    semantics=kind,
                    option=option_of[decision],
                    computed=strengths[decision],
                    paper=published,
                    decision_match=chosen == row.chosen,
                )
                if abs(cell.delta) > TABLE_TOLERANCE:
                    logger.warning(
                        "row %d %s %s: computed %.4f, published %.2f",
                        number,
                        kind.label,
                        cell.option,
                        cell.computed,
                        cell.paper,
                    )
                cells.append(cell)
    return ReproductionReport(tuple(cells))


SWEEP_COLUMNS = ("top", "bot", "ratio", "semantics", "decision", "strength", "winner")


def sensitivity_sweep(
    framework: BipolarFramework,
    ordering: PreferenceOrdering,
    tops: Sequence[float] = (0.55, 0.6, 0.7, 0.8, 0.9, 1.0),
    ratios: Sequence[float] = (2.0, 3.0, 4.0, 5.0, 6.0),
    kinds: Sequence[SemanticsKind] = tuple(SemanticsKind),
    delta: float = 1.0,
) -> pl.DataFrame:
    """Decision strengths over centralised ranges (bot = 1 - top) and much-greater ratios."""
    rows = []
    for top in tops:
        bot = 1.0 - top
        for ratio in ratios:
            extraction = ExtractionConfig.nu1(delta, ratio * delta, top, bot)
            scores = extract_qbaf(framework, ordering, extraction)
            for kind in kinds:
                kind = SemanticsKind(kind)
                strengths = evaluate(framework, scores, kind)
                outcome = decide(strengths, framework.decisions)
                for decision in framework.decisions:
                    rows.append(
                        (
                            float(top),
                            bot,
                            float(ratio),
                            kind.value,
                            decision,
                            strengths[decision],
                            outcome.label,
                        )
                    )
    return pl.DataFrame(
        rows,
        schema={
            "top": pl.Float64,
            "bot": pl.Float64,
            "ratio": pl.Float64,
            "semantics": pl.Utf8,
            "decision": pl.Utf8,
            "strength": pl.Float64,
            "winner": pl.Utf8,
        },
        orient="row",
    )
