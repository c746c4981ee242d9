"""Base score extraction: preference ordering -> distances -> base scores.

Distances grow from 1 at the most preferred tier by ``delta`` per GREATER gap and by
``big_delta`` per MUCH_GREATER gap; the span D is the distance of the least preferred
tier. Two extraction functions turn distances into scores:

- ``nu1`` (adaptable range): ``bot + (top - bot) * (D - d) / (D - 1)``
- ``nu2`` (adaptable squeezing): ``(D - d + alpha) / (D - 1 + beta)``

Both are evaluated exactly on the shortest decimal form of their inputs and rounded
once, so decimal parameters give the nearest binary64 to the decimal result.
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Dict, Mapping, Optional, Tuple, Union

from .config.settings import DECISION_BASE_SCORE
from .exceptions import CoverageError, ParamError
from .framework import BipolarFramework, ScoreAssignment, validate_for_decisions
from .preferences import GapKind, PreferenceOrdering

logger = logging.getLogger(__name__)


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParamError(f"{name} must be finite, got {value}")
    return value


def _decimal(value: float) -> Fraction:
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class GapWeights:
    """Distance increments: ``delta`` for GREATER gaps, ``big_delta`` for MUCH_GREATER."""

    delta: float
    big_delta: float

    def __post_init__(self) -> None:
        for name, value in (("delta", self.delta), ("Delta", self.big_delta)):
            if _finite(name, value) <= 0.0:
                raise ParamError(f"{name} must be positive, got {value}")
        if not self.separates_gap_kinds:
            logger.warning(
                "Delta=%s does not exceed delta=%s; much-greater gaps will not "
                "outweigh greater gaps",
                self.big_delta,
                self.delta,
            )

    @property
    def separates_gap_kinds(self) -> bool:
        return self.big_delta > self.delta

    @property
    def ratio(self) -> float:
        return self.big_delta / self.delta

    def increment(self, gap: GapKind) -> float:
        return self.delta if gap is GapKind.GREATER else self.big_delta


@dataclass(frozen=True)
class DistanceAssignment:
    distances: Mapping[str, float]
    span: float

    def __getitem__(self, arg: str) -> float:
        return self.distances[arg]


def assign_distances(ordering: PreferenceOrdering, weights: GapWeights) -> DistanceAssignment:
    exact = Fraction(1)
    distances: Dict[str, float] = {}
    for position, tier in enumerate(ordering.tiers):
        if position:
            exact += _decimal(weights.increment(ordering.gaps[position - 1]))
        for arg in sorted(tier):
            distances[arg] = float(exact)
    # The span is the accumulated distance of the last tier, i.e. 1 + n*delta + m*Delta.
    span = float(exact)
    assert span > 1.0, "at least two tiers and positive weights give a span above 1"
    logger.debug("distances for %s: %s (span %s)", ordering, distances, span)
    return DistanceAssignment(distances=distances, span=span)


@dataclass(frozen=True)
class RangeParams:
    top: float
    bot: float

    def __post_init__(self) -> None:
        top, bot = _finite("top", self.top), _finite("bot", self.bot)
        if not 0.0 <= bot <= top <= 1.0:
            raise ParamError(f"need 0 <= bot <= top <= 1, got top={top}, bot={bot}")


@dataclass(frozen=True)
class SqueezeParams:
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        alpha, beta = _finite("alpha", self.alpha), _finite("beta", self.beta)
        if alpha < 0.0 or beta < 0.0:
            raise ParamError(f"alpha and beta must be non-negative, got {alpha}, {beta}")
        if alpha > beta:
            raise ParamError(f"alpha={alpha} exceeds beta={beta}; scores would pass 1")


class ExtractionFunction(ABC):
    """Base class for functions mapping distances to base scores."""

    name: ClassVar[str]

    @abstractmethod
    def score(self, distance: float, span: float) -> float:
        """Base score at ``distance`` for an ordering of the given span."""

    @abstractmethod
    def limits(self, span: float) -> Tuple[float, float]:
        """Scores actually given to the most and least preferred tiers."""

    @abstractmethod
    def to_fields(self) -> Dict[str, Optional[float]]:
        pass

    def extract(
        self, ordering: PreferenceOrdering, distances: DistanceAssignment
    ) -> ScoreAssignment:
        missing = sorted(ordering.arguments.difference(distances.distances))
        if missing:
            raise CoverageError(f"no distance for {', '.join(missing)}")
        return ScoreAssignment(
            {
                arg: self.score(distances[arg], distances.span)
                for arg in sorted(ordering.arguments)
            }
        )


@dataclass(frozen=True)
class RangeExtraction(ExtractionFunction):
    params: RangeParams
    name: ClassVar[str] = "nu1"

    def score(self, distance: float, span: float) -> float:
        # Weighted form keeps the end tiers exactly at top and bot.
        span_, distance_ = _decimal(span), _decimal(distance)
        weight = (span_ - distance_) / (span_ - 1)
        top, bot = _decimal(self.params.top), _decimal(self.params.bot)
        return float(top * weight + bot * (1 - weight))

    def limits(self, span: float) -> Tuple[float, float]:
        return self.params.top, self.params.bot

    def to_fields(self) -> Dict[str, Optional[float]]:
        return {"top": self.params.top, "bot": self.params.bot, "alpha": None, "beta": None}


@dataclass(frozen=True)
class SqueezeExtraction(ExtractionFunction):
    params: SqueezeParams
    name: ClassVar[str] = "nu2"

    def score(self, distance: float, span: float) -> float:
        span_, distance_ = _decimal(span), _decimal(distance)
        alpha, beta = _decimal(self.params.alpha), _decimal(self.params.beta)
        return float((span_ - distance_ + alpha) / (span_ - 1 + beta))

    def limits(self, span: float) -> Tuple[float, float]:
        return self.score(1.0, span), self.score(span, span)

    def to_fields(self) -> Dict[str, Optional[float]]:
        return {"top": None, "bot": None, "alpha": self.params.alpha, "beta": self.params.beta}


def nu1(
    ordering: PreferenceOrdering, distances: DistanceAssignment, params: RangeParams
) -> ScoreAssignment:
    return RangeExtraction(params).extract(ordering, distances)


def nu2(
    ordering: PreferenceOrdering, distances: DistanceAssignment, params: SqueezeParams
) -> ScoreAssignment:
    return SqueezeExtraction(params).extract(ordering, distances)


@dataclass(frozen=True)
class ExtractionConfig:
    """Gap weights plus the extraction function applied to the resulting distances."""

    weights: GapWeights
    function: ExtractionFunction

    @classmethod
    def nu1(cls, delta: float, big_delta: float, top: float, bot: float) -> "ExtractionConfig":
        return cls(GapWeights(delta, big_delta), RangeExtraction(RangeParams(top, bot)))

    @classmethod
    def nu2(
        cls, delta: float, big_delta: float, alpha: float, beta: float
    ) -> "ExtractionConfig":
        return cls(GapWeights(delta, big_delta), SqueezeExtraction(SqueezeParams(alpha, beta)))

    @classmethod
    def from_fields(
        cls,
        delta: float,
        big_delta: float,
        function: str,
        top: Optional[float] = None,
        bot: Optional[float] = None,
        alpha: Optional[float] = None,
        beta: Optional[float] = None,
    ) -> "ExtractionConfig":
        if function == RangeExtraction.name:
            if top is None or bot is None:
                raise ParamError("nu1 needs both top and bot")
            if alpha is not None or beta is not None:
                raise ParamError("alpha and beta only apply to nu2")
            return cls.nu1(delta, big_delta, top, bot)
        if function == SqueezeExtraction.name:
            if alpha is None or beta is None:
                raise ParamError("nu2 needs both alpha and beta")
            if top is not None or bot is not None:
                raise ParamError("top and bot only apply to nu1")
            return cls.nu2(delta, big_delta, alpha, beta)
        raise ParamError(f"unknown extraction function {function!r}; use nu1 or nu2")

    def to_fields(self) -> Dict[str, Union[str, float, None]]:
        fields: Dict[str, Union[str, float, None]] = {
            "delta": self.weights.delta,
            "Delta": self.weights.big_delta,
            "function": self.function.name,
        }
        fields.update(self.function.to_fields())
        return fields

    def distances(self, ordering: PreferenceOrdering) -> DistanceAssignment:
        return assign_distances(ordering, self.weights)

    def extract(self, ordering: PreferenceOrdering) -> ScoreAssignment:
        return self.function.extract(ordering, self.distances(ordering))

    def limits(self, ordering: PreferenceOrdering) -> Tuple[float, float]:
        return self.function.limits(self.distances(ordering).span)


def uniform_scores(
    framework: BipolarFramework, value: float = DECISION_BASE_SCORE
) -> ScoreAssignment:
    """Every non-decision argument at ``value``; decisions at the decision base score."""
    return ScoreAssignment(
        {
            arg: DECISION_BASE_SCORE if arg in framework.decisions else value
            for arg in sorted(framework.arguments)
        }
    )


def extract_qbaf(
    framework: BipolarFramework, ordering: PreferenceOrdering, config: ExtractionConfig
) -> ScoreAssignment:
    """Base scores for every argument: ordering-driven for options' reasons, 0.5 for decisions."""
    validate_for_decisions(framework).raise_for_violations()
    check_coverage(framework, ordering)
    extracted = config.extract(ordering)
    scores = {
        arg: DECISION_BASE_SCORE if arg in framework.decisions else extracted[arg]
        for arg in sorted(framework.arguments)
    }
    return ScoreAssignment(scores)


def check_coverage(framework: BipolarFramework, ordering: PreferenceOrdering) -> None:
    """Raise unless the ordering ranks exactly the non-decision arguments."""
    decisions = sorted(ordering.arguments.intersection(framework.decisions))
    missing = sorted(framework.non_decisions.difference(ordering.arguments))
    unknown = sorted(ordering.arguments.difference(framework.arguments))
    if decisions or missing or unknown:
        problems = []
        if decisions:
            problems.append(f"ordering mentions decision arguments {', '.join(decisions)}")
        if missing:
            problems.append(f"ordering misses {', '.join(missing)}")
        if unknown:
            problems.append(f"ordering mentions unknown arguments {', '.join(unknown)}")
        raise CoverageError("; ".join(problems))
