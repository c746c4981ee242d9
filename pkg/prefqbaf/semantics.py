"""Gradual semantics over acyclic QBAFs.

Each semantics is an aggregation of attacker and supporter strengths followed by an
influence function applied to the base score:

- QE: sum aggregation, 2-max influence
- EB: sum aggregation, Euler-based influence
- DF-QuAD: product aggregation, linear influence
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import polars as pl

from .config.settings import SCORE_TOLERANCE
from .exceptions import CoverageError, DomainError, EmptyDecisionError, ValidationError
from .framework import ArgumentValues, BipolarFramework, topological_order

logger = logging.getLogger(__name__)


class SemanticsKind(str, Enum):
    QE = "qe"
    EB = "eb"
    DFQUAD = "dfquad"

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {SemanticsKind.QE: "QE", SemanticsKind.EB: "EB", SemanticsKind.DFQUAD: "DF"}


class Polarity(str, Enum):
    ATTACK = "attack"
    SUPPORT = "support"


class StrengthAssignment(ArgumentValues):
    """Final strengths sigma."""

    quantity = "strength"


AggregationFunction = Callable[[Sequence[float], Sequence[float]], float]
InfluenceFunction = Callable[[float, float], float]


def sum_aggregation(attackers: Sequence[float], supporters: Sequence[float]) -> float:
    """Energy: total support minus total attack."""
    return math.fsum(supporters) - math.fsum(attackers)


def product_aggregation(attackers: Sequence[float], supporters: Sequence[float]) -> float:
    """F(supporters) - F(attackers) with F(v) = 1 - prod(1 - v) and F of nothing = 0."""
    # Sorted so that equal multisets give bit-identical products.
    return math.prod(1.0 - a for a in sorted(attackers)) - math.prod(
        1.0 - s for s in sorted(supporters)
    )


def _clip(value: float) -> float:
    # Rounding can push a result a hair outside [0, 1].
    return min(1.0, max(0.0, value))


def _h(x: float) -> float:
    x = max(0.0, x)
    return x * x / (1.0 + x * x)


def qe_influence(tau: float, aggregate: float) -> float:
    return _clip(tau - tau * _h(-aggregate) + (1.0 - tau) * _h(aggregate))


def euler_influence(tau: float, aggregate: float) -> float:
    return _clip(1.0 - (1.0 - tau * tau) / (1.0 + tau * math.exp(aggregate)))


def linear_influence(tau: float, aggregate: float) -> float:
    if aggregate <= 0.0:
        return _clip(tau + tau * aggregate)
    return _clip(tau + (1.0 - tau) * aggregate)


@dataclass(frozen=True)
class GradualSemantics:
    """A gradual semantics as an aggregation function paired with an influence function."""

    kind: SemanticsKind
    aggregation: AggregationFunction
    influence: InfluenceFunction

    def combine(
        self, tau: float, attackers: Iterable[float], supporters: Iterable[float]
    ) -> float:
        attackers, supporters = list(attackers), list(supporters)
        _check_unit("base score", [tau])
        _check_unit("attacker strength", attackers)
        _check_unit("supporter strength", supporters)
        return self.influence(tau, self.aggregation(attackers, supporters))


def _check_unit(what: str, values: Iterable[float]) -> None:
    for value in values:
        # Also rejects NaN.
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{what} {value} is outside [0, 1]")


SEMANTICS: Dict[SemanticsKind, GradualSemantics] = {
    SemanticsKind.QE: GradualSemantics(SemanticsKind.QE, sum_aggregation, qe_influence),
    SemanticsKind.EB: GradualSemantics(SemanticsKind.EB, sum_aggregation, euler_influence),
    SemanticsKind.DFQUAD: GradualSemantics(
        SemanticsKind.DFQUAD, product_aggregation, linear_influence
    ),
}


def get_semantics(kind: "SemanticsKind | str") -> GradualSemantics:
    try:
        return SEMANTICS[SemanticsKind(kind)]
    except ValueError:
        supported = ", ".join(k.value for k in SemanticsKind)
        raise DomainError(f"unsupported semantics {kind!r}; use one of {supported}") from None


def get_polarity(polarity: "Polarity | str") -> Polarity:
    try:
        return Polarity(polarity)
    except ValueError:
        supported = ", ".join(p.value for p in Polarity)
        raise DomainError(f"unsupported polarity {polarity!r}; use one of {supported}") from None


def combine_qe(tau: float, attackers: Iterable[float], supporters: Iterable[float]) -> float:
    return SEMANTICS[SemanticsKind.QE].combine(tau, attackers, supporters)


def combine_eb(tau: float, attackers: Iterable[float], supporters: Iterable[float]) -> float:
    return SEMANTICS[SemanticsKind.EB].combine(tau, attackers, supporters)


def combine_dfquad(
    tau: float, attackers: Iterable[float], supporters: Iterable[float]
) -> float:
    return SEMANTICS[SemanticsKind.DFQUAD].combine(tau, attackers, supporters)


def _check_order(framework: BipolarFramework, order: Sequence[str]) -> None:
    if sorted(order) != sorted(framework.arguments):
        raise ValidationError("evaluation order must list every argument exactly once")
    position = {arg: i for i, arg in enumerate(order)}
    for source, target, _ in framework.edges:
        if position[source] > position[target]:
            raise ValidationError(
                f"evaluation order places {target} before its parent {source}"
            )


def evaluate(
    framework: BipolarFramework,
    scores: Mapping[str, float],
    kind: "SemanticsKind | str",
    order: Optional[Sequence[str]] = None,
) -> StrengthAssignment:
    """Final strengths in one pass over a topological order.

    Any valid ``order`` gives the same result: every argument is combined from its
    parents' final strengths, and aggregation does not depend on parent order.
    """
    semantics = get_semantics(kind)
    missing = sorted(framework.arguments.difference(scores))
    extra = sorted(set(scores).difference(framework.arguments))
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"no base score for {', '.join(missing)}")
        if extra:
            parts.append(f"base scores for unknown arguments {', '.join(extra)}")
        raise CoverageError("; ".join(parts))

    if order is None:
        order = topological_order(framework)
    else:
        _check_order(framework, order)

    strengths: Dict[str, float] = {}
    for arg in order:
        strengths[arg] = semantics.combine(
            scores[arg],
            [strengths[a] for a in framework.attackers[arg]],
            [strengths[s] for s in framework.supporters[arg]],
        )
    logger.debug("%s strengths: %s", semantics.kind.label, strengths)
    return StrengthAssignment({arg: strengths[arg] for arg in sorted(strengths)})


TIE = "TIE"


@dataclass(frozen=True)
class DecisionOutcome:
    winners: Tuple[str, ...]
    strengths: Mapping[str, float]

    @property
    def is_tie(self) -> bool:
        return len(self.winners) > 1

    @property
    def label(self) -> str:
        """The single winner, or ``TIE``."""
        return TIE if self.is_tie else self.winners[0]

    def to_dict(self) -> Dict[str, object]:
        return {
            "winners": list(self.winners),
            "label": self.label,
            "strengths": dict(self.strengths),
        }


def decide(
    strengths: Mapping[str, float],
    decisions: Sequence[str],
    tolerance: float = SCORE_TOLERANCE,
) -> DecisionOutcome:
    if not decisions:
        raise EmptyDecisionError("no decision arguments to choose from")
    unknown = [d for d in decisions if d not in strengths]
    if unknown:
        raise CoverageError(f"no strength for decisions {', '.join(unknown)}")
    best = max(strengths[d] for d in decisions)
    winners = tuple(d for d in decisions if best - strengths[d] <= tolerance)
    return DecisionOutcome(winners, {d: strengths[d] for d in decisions})


def influence_curve(
    kind: "SemanticsKind | str",
    polarity: "Polarity | str",
    influencer_strength: float,
    grid_size: int,
) -> List[Tuple[float, float]]:
    """Strength of an argument with a single influencer, as a function of its base score."""
    semantics = get_semantics(kind)
    polarity = get_polarity(polarity)
    _check_unit("influencer strength", [influencer_strength])
    if grid_size < 2:
        raise DomainError(f"grid_size must be at least 2, got {grid_size}")
    influencer = [influencer_strength]
    attackers = influencer if polarity is Polarity.ATTACK else []
    supporters = influencer if polarity is Polarity.SUPPORT else []
    curve = []
    for i in range(grid_size):
        tau = i / (grid_size - 1)
        curve.append((tau, semantics.combine(tau, attackers, supporters)))
    return curve


INFLUENCE_COLUMNS = ("semantics", "polarity", "influencer", "tau", "sigma")


def influence_table(
    kinds: Sequence["SemanticsKind | str"] = tuple(SemanticsKind),
    polarities: Sequence["Polarity | str"] = tuple(Polarity),
    influencers: Sequence[float] = (0.25, 0.5, 0.75, 1.0),
    grid_size: int = 101,
) -> pl.DataFrame:
    rows = []
    for kind in kinds:
        kind = get_semantics(kind).kind
        for polarity in polarities:
            polarity = get_polarity(polarity)
            for influencer in influencers:
                for tau, sigma in influence_curve(kind, polarity, influencer, grid_size):
                    rows.append((kind.value, polarity.value, float(influencer), tau, sigma))
    return pl.DataFrame(
        rows,
        schema={
            "semantics": pl.Utf8,
            "polarity": pl.Utf8,
            "influencer": pl.Float64,
            "tau": pl.Float64,
            "sigma": pl.Float64,
        },
        orient="row",
    )
