"""Executable checks of the axioms and properties a base score extraction should meet.

Violations are returned as data in :class:`CheckReport` / :class:`PropertyReport`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .bsef import ExtractionConfig
from .config.settings import SCORE_TOLERANCE
from .exceptions import CoverageError
from .preferences import (
    PreferenceOrdering,
    Relation,
    adjacent_pairs,
    are_isomorphic,
    extend_with_equal,
    render,
)


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class CheckReport:
    name: str
    status: CheckStatus
    counterexamples: Tuple[Tuple[str, ...], ...] = ()
    details: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "counterexamples": [list(c) for c in self.counterexamples],
            "details": list(self.details),
        }


def _report(name: str, counterexamples: List[Tuple[str, ...]], details: List[str]) -> CheckReport:
    status = CheckStatus.FAIL if counterexamples else CheckStatus.PASS
    return CheckReport(name, status, tuple(counterexamples), tuple(details))


def _require_cover(ordering: PreferenceOrdering, scores: Mapping[str, float]) -> None:
    missing = sorted(ordering.arguments.difference(scores))
    if missing:
        raise CoverageError(f"no score for {', '.join(missing)}")


def check_axiom1(
    ordering: PreferenceOrdering,
    scores: Mapping[str, float],
    tolerance: float = SCORE_TOLERANCE,
) -> CheckReport:
    """Preference coherence: strict preference gives a strictly higher score, indifference an equal one."""
    _require_cover(ordering, scores)
    counterexamples: List[Tuple[str, ...]] = []
    details: List[str] = []
    for position, tier in enumerate(ordering.tiers):
        members = sorted(tier)
        for a, b in itertools.combinations(members, 2):
            if abs(scores[a] - scores[b]) > tolerance:
                counterexamples.append((a, b))
                details.append(f"{a} ~ {b} but scores differ: {scores[a]} vs {scores[b]}")
        for lower in ordering.tiers[position + 1:]:
            for a in members:
                for b in sorted(lower):
                    if not scores[a] - scores[b] > tolerance:
                        counterexamples.append((a, b))
                        details.append(
                            f"{a} is preferred to {b} but {scores[a]} <= {scores[b]}"
                        )
    return _report("axiom1", counterexamples, details)


_STRICTER_THAN = (
    (Relation.MUCH_GREATER, Relation.GREATER),
    (Relation.GREATER, Relation.EQUAL),
    (Relation.MUCH_GREATER, Relation.EQUAL),
)


def check_axiom2(
    ordering: PreferenceOrdering,
    scores: Mapping[str, float],
    tolerance: float = SCORE_TOLERANCE,
) -> CheckReport:
    """Relation coherence over adjacent pairs: much-greater gaps > greater gaps > indifference.

    Each counterexample is ``(a, b, c, d)``: the difference a-b should have exceeded c-d.
    With no indifferent pairs the weaker side is the zero difference and only ``(a, b)``
    is reported.
    """
    _require_cover(ordering, scores)
    differences: Dict[Relation, List[Tuple[Tuple[str, ...], float]]] = {
        Relation.EQUAL: [],
        Relation.GREATER: [],
        Relation.MUCH_GREATER: [],
    }
    for a, b, kind in adjacent_pairs(ordering):
        difference = scores[a] - scores[b]
        if kind is Relation.EQUAL:
            difference = abs(difference)
        differences[kind].append(((a, b), difference))

    counterexamples: List[Tuple[str, ...]] = []
    details: List[str] = []
    for stronger, weaker in _STRICTER_THAN:
        weaker_values = differences[weaker]
        if not weaker_values and weaker is Relation.EQUAL:
            weaker_values = [((), 0.0)]
        for pair, value in differences[stronger]:
            for other, other_value in weaker_values:
                if not value - other_value > tolerance:
                    counterexamples.append(pair + other)
                    details.append(
                        f"{stronger.value} difference {value} of {pair} does not exceed "
                        f"{weaker.value} difference {other_value}"
                    )
    return _report("axiom2", counterexamples, details)


def check_axiom3(
    config: ExtractionConfig,
    o1: PreferenceOrdering,
    o2: PreferenceOrdering,
    tolerance: float = SCORE_TOLERANCE,
) -> CheckReport:
    """Structure coherence: non-isomorphic orderings must not receive identical scores."""
    if o1.arguments != o2.arguments:
        raise CoverageError("orderings must range over the same arguments")
    if are_isomorphic(o1, o2):
        return CheckReport(
            "axiom3",
            CheckStatus.NOT_APPLICABLE,
            details=(f"{render(o1)} and {render(o2)} are isomorphic",),
        )
    first, second = config.extract(o1), config.extract(o2)
    if any(abs(first[arg] - second[arg]) > tolerance for arg in o1.arguments):
        return CheckReport("axiom3", CheckStatus.PASS)
    return CheckReport(
        "axiom3",
        CheckStatus.FAIL,
        counterexamples=(tuple(sorted(o1.arguments)),),
        details=(f"{render(o1)} and {render(o2)} receive identical scores",),
    )


@dataclass(frozen=True)
class PropertyReport:
    normalisation: bool
    centralisation: bool
    regularity: bool
    stability: bool
    achieved_top: float
    achieved_bot: float
    differences: Mapping[Relation, Tuple[float, ...]]
    unstable: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "normalisation": self.normalisation,
            "centralisation": self.centralisation,
            "regularity": self.regularity,
            "stability": self.stability,
            "achieved_top": self.achieved_top,
            "achieved_bot": self.achieved_bot,
            "differences": {k.value: list(v) for k, v in self.differences.items()},
            "unstable": list(self.unstable),
        }


def _fresh_argument(ordering: PreferenceOrdering, position: int) -> str:
    candidate = f"fresh_{position}"
    while candidate in ordering:
        candidate += "_"
    return candidate


def check_properties(
    ordering: PreferenceOrdering,
    scores: Mapping[str, float],
    config: ExtractionConfig,
    tolerance: float = SCORE_TOLERANCE,
) -> PropertyReport:
    _require_cover(ordering, scores)
    top = max(scores[arg] for arg in ordering.tiers[0])
    bot = min(scores[arg] for arg in ordering.tiers[-1])

    differences: Dict[Relation, List[float]] = {}
    for a, b, kind in adjacent_pairs(ordering):
        differences.setdefault(kind, []).append(scores[a] - scores[b])
    regularity = all(max(v) - min(v) <= tolerance for v in differences.values())

    # Adding one indifferent argument per tier must leave every existing score in place.
    unstable = set()
    for position, tier in enumerate(ordering.tiers):
        extended = extend_with_equal(ordering, _fresh_argument(ordering, position), min(tier))
        rescored = config.extract(extended)
        for arg in ordering.arguments:
            if abs(rescored[arg] - scores[arg]) > tolerance:
                unstable.add(arg)

    return PropertyReport(
        normalisation=abs(top - 1.0) <= tolerance and abs(bot) <= tolerance,
        centralisation=abs(top - (1.0 - bot)) <= tolerance,
        regularity=regularity,
        stability=not unstable,
        achieved_top=top,
        achieved_bot=bot,
        differences={k: tuple(v) for k, v in differences.items()},
        unstable=tuple(sorted(unstable)),
    )


@dataclass(frozen=True)
class AxiomSuiteReport:
    axiom1: CheckReport
    axiom2: CheckReport
    properties: PropertyReport
    axiom3: Optional[CheckReport] = None

    def to_dict(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "axiom1": self.axiom1.to_dict(),
            "axiom2": self.axiom2.to_dict(),
            "properties": self.properties.to_dict(),
        }
        if self.axiom3 is not None:
            report["axiom3"] = self.axiom3.to_dict()
        return report


def check_suite(
    ordering: PreferenceOrdering,
    config: ExtractionConfig,
    other: Optional[PreferenceOrdering] = None,
) -> AxiomSuiteReport:
    scores = config.extract(ordering)
    return AxiomSuiteReport(
        axiom1=check_axiom1(ordering, scores),
        axiom2=check_axiom2(ordering, scores),
        properties=check_properties(ordering, scores, config),
        axiom3=check_axiom3(config, ordering, other) if other is not None else None,
    )
