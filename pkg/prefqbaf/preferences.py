"""Preference orderings over arguments: indifference, strict and much-greater preference.

Orderings are total: a sequence of tiers of mutually indifferent arguments, most
preferred first, separated by gaps of kind GREATER (``>``) or MUCH_GREATER (``>>``).
The concrete syntax is a small DSL::

    c = f >> b = e > a = d
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

from .exceptions import (
    DuplicateArgumentError,
    PreferenceError,
    PreferenceSyntaxError,
    SingleTierError,
    UnknownArgumentError,
)
from .framework import is_argument_id


class GapKind(str, Enum):
    GREATER = "greater"
    MUCH_GREATER = "much_greater"

    @property
    def symbol(self) -> str:
        return ">" if self is GapKind.GREATER else ">>"


class Relation(str, Enum):
    EQUAL = "equal"
    GREATER = "greater"
    MUCH_GREATER = "much_greater"
    REVERSED_GREATER = "reversed_greater"
    REVERSED_MUCH_GREATER = "reversed_much_greater"

    @classmethod
    def from_gap(cls, gap: GapKind) -> "Relation":
        return cls.GREATER if gap is GapKind.GREATER else cls.MUCH_GREATER

    @property
    def is_strict(self) -> bool:
        return self in (Relation.GREATER, Relation.MUCH_GREATER)

    def reversed(self) -> "Relation":
        return _REVERSED[self]


_REVERSED = {
    Relation.EQUAL: Relation.EQUAL,
    Relation.GREATER: Relation.REVERSED_GREATER,
    Relation.MUCH_GREATER: Relation.REVERSED_MUCH_GREATER,
    Relation.REVERSED_GREATER: Relation.GREATER,
    Relation.REVERSED_MUCH_GREATER: Relation.MUCH_GREATER,
}


@dataclass(frozen=True)
class PreferenceOrdering:
    """Total preference ordering as tiers (most preferred first) and the gaps between them."""

    tiers: Tuple[FrozenSet[str], ...]
    gaps: Tuple[GapKind, ...]

    @classmethod
    def from_tiers(
        cls, tiers: Sequence[Iterable[str]], gaps: Sequence[Union[GapKind, str]]
    ) -> "PreferenceOrdering":
        tier_lists = [list(tier) for tier in tiers]
        seen: set = set()
        for tier in tier_lists:
            for arg in tier:
                if arg in seen:
                    raise DuplicateArgumentError(f"argument {arg} appears in more than one place")
                seen.add(arg)
        return cls(
            tiers=tuple(frozenset(tier) for tier in tier_lists),
            gaps=tuple(GapKind(gap) for gap in gaps),
        )

    def __post_init__(self) -> None:
        if len(self.tiers) < 2:
            raise SingleTierError(
                "an ordering needs at least two tiers; with one tier no preference is expressed"
            )
        if len(self.gaps) != len(self.tiers) - 1:
            raise PreferenceError(
                f"{len(self.tiers)} tiers need {len(self.tiers) - 1} gaps, got {len(self.gaps)}"
            )
        seen: set = set()
        for tier in self.tiers:
            if not tier:
                raise PreferenceError("tiers must not be empty")
            for arg in tier:
                if not is_argument_id(arg):
                    raise PreferenceError(f"invalid argument id {arg!r}")
            overlap = seen & tier
            if overlap:
                raise DuplicateArgumentError(
                    f"arguments {', '.join(sorted(overlap))} appear in more than one tier"
                )
            seen |= tier

    def __str__(self) -> str:
        return render(self)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {arg: i for i, tier in enumerate(self.tiers) for arg in tier}

    @property
    def arguments(self) -> FrozenSet[str]:
        return frozenset(self._index)

    def __contains__(self, arg: object) -> bool:
        return arg in self._index

    def tier_index(self, arg: str) -> int:
        try:
            return self._index[arg]
        except KeyError:
            raise UnknownArgumentError(f"argument {arg} is not in the ordering") from None

    def prefers(self, a: str, b: str) -> bool:
        """Weak preference: a is at least as preferred as b."""
        return self.tier_index(a) <= self.tier_index(b)

    @property
    def gap_counts(self) -> Tuple[int, int]:
        """Number of GREATER and MUCH_GREATER gaps."""
        much = sum(1 for gap in self.gaps if gap is GapKind.MUCH_GREATER)
        return len(self.gaps) - much, much


def render(ordering: PreferenceOrdering) -> str:
    parts = [" = ".join(sorted(ordering.tiers[0]))]
    for gap, tier in zip(ordering.gaps, ordering.tiers[1:]):
        parts.append(gap.symbol)
        parts.append(" = ".join(sorted(tier)))
    return " ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<much>>>)|(?P<greater>>)|(?P<equal>=)|(?P<id>[A-Za-z0-9_]+)|(?P<bad>\S))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> Iterator[Token]:
    position = 0
    while True:
        match = _TOKEN.match(text, position)
        if match is None:
            return
        kind = match.lastgroup or "bad"
        if kind == "bad":
            raise PreferenceSyntaxError(
                f"unexpected character {match.group(kind)!r}", match.start(kind)
            )
        yield Token(kind, match.group(kind), match.start(kind))
        position = match.end()


def parse_dsl(text: str) -> PreferenceOrdering:
    """Parse ``tier (('>' | '>>') tier)*`` where ``tier = id ('=' id)*``."""
    tiers: List[List[str]] = [[]]
    gaps: List[GapKind] = []
    seen: set = set()
    expect_id = True
    last_position = 0
    for token in tokenize(text):
        last_position = token.position
        if expect_id:
            if token.kind != "id":
                raise PreferenceSyntaxError(
                    f"expected an argument id, found {token.text!r}", token.position
                )
            if token.text in seen:
                raise DuplicateArgumentError(f"argument {token.text} appears more than once")
            seen.add(token.text)
            tiers[-1].append(token.text)
            expect_id = False
            continue
        if token.kind == "much":
            gaps.append(GapKind.MUCH_GREATER)
            tiers.append([])
        elif token.kind == "greater":
            gaps.append(GapKind.GREATER)
            tiers.append([])
        elif token.kind != "equal":
            raise PreferenceSyntaxError(
                f"expected '=', '>' or '>>', found {token.text!r}", token.position
            )
        expect_id = True
    if expect_id:
        if not seen:
            raise PreferenceSyntaxError("empty preference ordering", last_position)
        raise PreferenceSyntaxError("ordering ends without an argument id", len(text))
    if len(tiers) < 2:
        raise SingleTierError(f"{text.strip()!r} has no '>' or '>>'; nothing is preferred")
    return PreferenceOrdering.from_tiers(tiers, gaps)


def relation(ordering: PreferenceOrdering, a: str, b: str) -> Relation:
    """Relation of a to b; a chain is MUCH_GREATER if any gap along it is."""
    i, j = ordering.tier_index(a), ordering.tier_index(b)
    if i == j:
        return Relation.EQUAL
    low, high = min(i, j), max(i, j)
    much = any(gap is GapKind.MUCH_GREATER for gap in ordering.gaps[low:high])
    forward = Relation.MUCH_GREATER if much else Relation.GREATER
    return forward if i < j else forward.reversed()


def adjacent_pairs(ordering: PreferenceOrdering) -> List[Tuple[str, str, Relation]]:
    """Indifferent pairs within each tier, then cross pairs of consecutive tiers."""
    pairs: List[Tuple[str, str, Relation]] = []
    for tier in ordering.tiers:
        for a, b in itertools.combinations(sorted(tier), 2):
            pairs.append((a, b, Relation.EQUAL))
    for gap, upper, lower in zip(ordering.gaps, ordering.tiers, ordering.tiers[1:]):
        label = Relation.from_gap(gap)
        for a in sorted(upper):
            for b in sorted(lower):
                pairs.append((a, b, label))
    return pairs


def extremes(ordering: PreferenceOrdering) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    return ordering.tiers[0], ordering.tiers[-1]


def are_isomorphic(o1: PreferenceOrdering, o2: PreferenceOrdering) -> bool:
    """Tier-size sequences match; gap kinds are not compared."""
    if len(o1.arguments) != len(o2.arguments):
        return False
    return [len(t) for t in o1.tiers] == [len(t) for t in o2.tiers]


def extend_with_equal(
    ordering: PreferenceOrdering, new_arg: str, anchor: str
) -> PreferenceOrdering:
    if new_arg in ordering:
        raise DuplicateArgumentError(f"argument {new_arg} is already in the ordering")
    position = ordering.tier_index(anchor)
    tiers = list(ordering.tiers)
    tiers[position] = tiers[position] | {new_arg}
    return PreferenceOrdering(tiers=tuple(tiers), gaps=ordering.gaps)
