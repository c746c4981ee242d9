"""Bipolar argumentation frameworks and the structural checks needed before deciding.

A framework is acyclic and shaped as a forest rooted at its decision arguments; base
scores are attached through a :class:`ScoreAssignment` to form the quantitative variant.
"""
from __future__ import annotations

import functools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
)

import networkx as nx

from .config.settings import DECISION_BASE_SCORE, SCORE_TOLERANCE
from .exceptions import CoverageError, CycleError, ValidationError

logger = logging.getLogger(__name__)

ArgumentId = str
Edge = Tuple[ArgumentId, ArgumentId]

_ID_PATTERN = re.compile(r"[A-Za-z0-9_]+")


def is_argument_id(value: object) -> bool:
    return isinstance(value, str) and _ID_PATTERN.fullmatch(value) is not None


def check_argument_id(value: object) -> ArgumentId:
    if not isinstance(value, str) or not is_argument_id(value):
        raise ValidationError(
            f"invalid argument id {value!r}: expected letters, digits or underscore"
        )
    return value


class EdgeKind(str, Enum):
    ATTACK = "attack"
    SUPPORT = "support"


@dataclass(frozen=True)
class BipolarFramework:
    """Arguments with attack and support relations and designated decision arguments."""

    arguments: FrozenSet[ArgumentId]
    attacks: FrozenSet[Edge]
    supports: FrozenSet[Edge]
    decisions: Tuple[ArgumentId, ...]
    labels: Tuple[Tuple[ArgumentId, str], ...] = ()

    @classmethod
    def create(
        cls,
        arguments: Iterable[ArgumentId],
        attacks: Iterable[Iterable[ArgumentId]] = (),
        supports: Iterable[Iterable[ArgumentId]] = (),
        decisions: Iterable[ArgumentId] = (),
        labels: Optional[Mapping[ArgumentId, str]] = None,
    ) -> "BipolarFramework":
        arguments = list(arguments)
        if len(set(arguments)) != len(arguments):
            seen: Dict[str, int] = {}
            for arg in arguments:
                seen[arg] = seen.get(arg, 0) + 1
            duplicated = sorted(a for a, n in seen.items() if n > 1)
            raise ValidationError(f"duplicate argument ids: {', '.join(duplicated)}")
        return cls(
            arguments=frozenset(arguments),
            attacks=frozenset(_as_edge(e) for e in attacks),
            supports=frozenset(_as_edge(e) for e in supports),
            decisions=tuple(decisions),
            labels=tuple(sorted((labels or {}).items())),
        )

    def __post_init__(self) -> None:
        for arg in self.arguments:
            check_argument_id(arg)
        for kind, edges in ((EdgeKind.ATTACK, self.attacks), (EdgeKind.SUPPORT, self.supports)):
            for source, target in sorted(edges):
                if source not in self.arguments or target not in self.arguments:
                    raise ValidationError(
                        f"{kind.value} ({source}, {target}) references an unknown argument"
                    )
                if source == target:
                    raise ValidationError(f"self-edge {kind.value} ({source}, {target})")
        both = self.attacks & self.supports
        if both:
            source, target = min(both)
            raise ValidationError(f"({source}, {target}) is both an attack and a support")
        if not self.decisions:
            raise ValidationError("a framework needs at least one decision argument")
        if len(set(self.decisions)) != len(self.decisions):
            raise ValidationError(f"duplicate decisions: {list(self.decisions)}")
        unknown = [d for d in self.decisions if d not in self.arguments]
        if unknown:
            raise ValidationError(f"decisions not among the arguments: {unknown}")
        for arg, _ in self.labels:
            if arg not in self.arguments:
                raise ValidationError(f"label given for unknown argument {arg}")

    @property
    def non_decisions(self) -> FrozenSet[ArgumentId]:
        return self.arguments.difference(self.decisions)

    @property
    def edges(self) -> List[Tuple[ArgumentId, ArgumentId, EdgeKind]]:
        tagged = [(s, t, EdgeKind.ATTACK) for s, t in self.attacks]
        tagged += [(s, t, EdgeKind.SUPPORT) for s, t in self.supports]
        return sorted(tagged)

    def label(self, arg: ArgumentId) -> Optional[str]:
        return dict(self.labels).get(arg)

    @cached_property
    def graph(self) -> "nx.DiGraph":
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.arguments))
        for source, target, kind in self.edges:
            graph.add_edge(source, target, kind=kind)
        return graph

    @cached_property
    def attackers(self) -> Dict[ArgumentId, Tuple[ArgumentId, ...]]:
        return _parents(self.arguments, self.attacks)

    @cached_property
    def supporters(self) -> Dict[ArgumentId, Tuple[ArgumentId, ...]]:
        return _parents(self.arguments, self.supports)


def _as_edge(edge: Iterable[ArgumentId]) -> Edge:
    pair = tuple(edge)
    if len(pair) != 2:
        raise ValidationError(f"edge must be a (source, target) pair, got {pair!r}")
    return pair[0], pair[1]


def _parents(arguments: FrozenSet[str], edges: FrozenSet[Edge]) -> Dict[str, Tuple[str, ...]]:
    parents: Dict[str, List[str]] = {arg: [] for arg in arguments}
    for source, target in edges:
        parents[target].append(source)
    return {arg: tuple(sorted(found)) for arg, found in parents.items()}


class Condition(str, Enum):
    """Conditions a framework must meet to be evaluated for its decisions."""

    DECISION_SOURCE = "i"
    PATH_TO_DECISION = "ii"
    ACYCLIC = "iii"


@dataclass(frozen=True)
class Violation:
    condition: Condition
    subject: Tuple[ArgumentId, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_for_violations(self) -> None:
        if self.violations:
            raise ValidationError("; ".join(v.message for v in self.violations))


@functools.lru_cache(maxsize=256)
def validate_for_decisions(framework: BipolarFramework) -> ValidationReport:
    violations: List[Violation] = []
    decisions = set(framework.decisions)

    for source, target, kind in framework.edges:
        if source in decisions:
            towards = "decision" if target in decisions else "non-decision"
            violations.append(
                Violation(
                    Condition.DECISION_SOURCE,
                    (source, target),
                    f"{kind.value} ({source}, {target}) leaves decision {source} "
                    f"towards a {towards} argument",
                )
            )

    graph = framework.graph
    reaching = set()
    for decision in framework.decisions:
        reaching |= nx.ancestors(graph, decision)
    for arg in sorted(framework.non_decisions - reaching):
        violations.append(
            Violation(
                Condition.PATH_TO_DECISION,
                (arg,),
                f"argument {arg} has no path to a decision argument",
            )
        )

    cycles = sorted(
        tuple(sorted(component))
        for component in nx.strongly_connected_components(graph)
        if len(component) > 1
    )
    for component in cycles:
        violations.append(
            Violation(
                Condition.ACYCLIC,
                component,
                f"arguments {', '.join(component)} lie on a cycle",
            )
        )
    return ValidationReport(tuple(violations))


def topological_order(framework: BipolarFramework) -> List[ArgumentId]:
    """Sources first, layer by layer; ids sorted within each layer."""
    return list(_topological_order(framework))


@functools.lru_cache(maxsize=256)
def _topological_order(framework: BipolarFramework) -> Tuple[ArgumentId, ...]:
    try:
        generations = list(nx.topological_generations(framework.graph))
    except nx.NetworkXUnfeasible:
        cycle = nx.find_cycle(framework.graph)
        raise CycleError(sorted({edge[0] for edge in cycle})) from None
    order = tuple(arg for generation in generations for arg in sorted(generation))
    logger.debug("evaluation order: %s", " ".join(order))
    return order


class ArgumentValues(Mapping[ArgumentId, float]):
    """Immutable mapping from argument to a value in [0, 1]."""

    quantity = "value"

    def __init__(self, values: Mapping[ArgumentId, float]):
        checked: Dict[ArgumentId, float] = {}
        for arg, value in values.items():
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{self.quantity} of {arg} is {value}, outside [0, 1]")
            checked[arg] = value
        self._values = checked

    def __getitem__(self, arg: ArgumentId) -> float:
        return self._values[arg]

    def __iter__(self) -> Iterator[ArgumentId]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v:.6g}" for k, v in sorted(self._values.items()))
        return f"{type(self).__name__}({inner})"

    def as_dict(self) -> Dict[ArgumentId, float]:
        return dict(self._values)

    def is_close(self, other: Mapping[ArgumentId, float], tolerance: float = SCORE_TOLERANCE) -> bool:
        if set(self) != set(other):
            return False
        return all(abs(self[arg] - other[arg]) <= tolerance for arg in self)


class ScoreAssignment(ArgumentValues):
    """Base scores tau; paired with a framework it forms a QBAF."""

    quantity = "base score"


def validate_scores(framework: BipolarFramework, scores: Mapping[ArgumentId, float]) -> None:
    """Raise unless ``scores`` covers exactly the arguments and fixes decisions at 0.5."""
    missing = sorted(framework.arguments.difference(scores))
    extra = sorted(set(scores).difference(framework.arguments))
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing scores for {', '.join(missing)}")
        if extra:
            parts.append(f"scores for unknown arguments {', '.join(extra)}")
        raise CoverageError("; ".join(parts))
    for decision in framework.decisions:
        if scores[decision] != DECISION_BASE_SCORE:
            raise ValidationError(
                f"decision {decision} has base score {scores[decision]}, "
                f"expected {DECISION_BASE_SCORE}"
            )


def running_example() -> BipolarFramework:
    """Feeding-pace framework: decide between moving slowly (D1) and fast (D2)."""
    return BipolarFramework.create(
        arguments=["a", "b", "c", "d", "e", "f", "D1", "D2"],
        attacks=[("a", "D1"), ("e", "b"), ("f", "D2")],
        supports=[("c", "b"), ("b", "D1"), ("e", "d"), ("d", "D2")],
        decisions=["D1", "D2"],
        labels={
            "a": "eating slowly causes boredom",
            "b": "eating slowly does not stress the patient",
            "c": "the patient is vulnerable and stress must be avoided",
            "d": "eating slowly reduces time with a visiting niece",
            "e": "talking to the niece will relax the patient",
            "f": "eating quickly carries a low risk of dysphagia",
            "D1": "slow",
            "D2": "fast",
        },
    )
