"""JSON documents for frameworks and QBAFs.

A document lists arguments, attacks, supports and decisions, and may carry a preference
ordering (DSL string), extraction parameters and base scores. See ``docs/source/formats.md``.
"""
from __future__ import annotations

import json
import sys
from abc import ABC, abstractmethod
from typing import IO, Any, Dict, List, Literal, Mapping, NamedTuple, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from .bsef import ExtractionConfig
from .exceptions import ParseError, SchemaError, StorageError
from .framework import (
    BipolarFramework,
    ScoreAssignment,
    validate_for_decisions,
    validate_scores,
)
from .preferences import PreferenceOrdering, parse_dsl, render

Source = Union[str, IO[str]]

STDIO = "-"
SIGNIFICANT_DIGITS = 12


class StorageAdapter(ABC):
    @abstractmethod
    def read_text(self, source: Source) -> str:
        pass

    @abstractmethod
    def write_text(self, dest: Source, text: str) -> None:
        pass


class LocalStorageAdapter(StorageAdapter):
    """Local files, open text streams, and ``-`` for stdin/stdout."""

    def read_text(self, source: Source) -> str:
        if not isinstance(source, str):
            return source.read()
        if source == STDIO:
            return sys.stdin.read()
        try:
            with open(source, "r", encoding="utf-8") as fh:
                return fh.read()
        except UnicodeDecodeError as e:
            raise ParseError(f"{source} is not UTF-8: {e.reason}", 1, 1) from e
        except OSError as e:
            raise StorageError(f"cannot read {source}: {e}") from e

    def write_text(self, dest: Source, text: str) -> None:
        if not isinstance(dest, str):
            dest.write(text)
            return
        if dest == STDIO:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        try:
            with open(dest, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as e:
            raise StorageError(f"cannot write {dest}: {e}") from e


class ArgumentEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    label: Optional[str] = None


class ExtractionFields(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    delta: float
    big_delta: float = Field(alias="Delta")
    function: Literal["nu1", "nu2"]
    top: Optional[float] = None
    bot: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None

    def to_config(self) -> ExtractionConfig:
        return ExtractionConfig.from_fields(
            self.delta,
            self.big_delta,
            self.function,
            top=self.top,
            bot=self.bot,
            alpha=self.alpha,
            beta=self.beta,
        )


class FrameworkDocument(BaseModel):
    """Schema of framework / QBAF documents; unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid")

    arguments: List[ArgumentEntry]
    attacks: List[Tuple[str, str]] = []
    supports: List[Tuple[str, str]] = []
    decisions: List[str]
    preferences: Optional[str] = None
    extraction: Optional[ExtractionFields] = None
    base_scores: Optional[Dict[str, float]] = None

    def to_framework(self) -> BipolarFramework:
        return BipolarFramework.create(
            arguments=[entry.id for entry in self.arguments],
            attacks=self.attacks,
            supports=self.supports,
            decisions=self.decisions,
            labels={e.id: e.label for e in self.arguments if e.label is not None},
        )


class LoadedFramework(NamedTuple):
    framework: BipolarFramework
    ordering: Optional[PreferenceOrdering]
    extraction: Optional[ExtractionConfig]
    base_scores: Optional[ScoreAssignment]


def parse_document(text: str) -> FrameworkDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg}", e.lineno, e.colno) from e
    try:
        return FrameworkDocument.model_validate(raw)
    except PydanticValidationError as e:
        locations = [".".join(str(part) for part in err["loc"]) for err in e.errors()]
        details = "; ".join(
            f"{loc or '<document>'}: {err['msg']}" for loc, err in zip(locations, e.errors())
        )
        raise SchemaError(f"invalid document: {details}", locations) from e


def load_framework(
    source: Source, adapter: Optional[StorageAdapter] = None
) -> LoadedFramework:
    """Read and fully validate a document from a path, ``-`` or a text stream."""
    adapter = adapter or LocalStorageAdapter()
    document = parse_document(adapter.read_text(source))
    framework = document.to_framework()
    validate_for_decisions(framework).raise_for_violations()
    ordering = parse_dsl(document.preferences) if document.preferences is not None else None
    extraction = document.extraction.to_config() if document.extraction is not None else None
    scores = None
    if document.base_scores is not None:
        validate_scores(framework, document.base_scores)
        scores = ScoreAssignment(document.base_scores)
    return LoadedFramework(framework, ordering, extraction, scores)


def _number(value: float) -> float:
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def to_document(
    framework: BipolarFramework,
    scores: Optional[Mapping[str, float]] = None,
    ordering: Optional[PreferenceOrdering] = None,
    extraction: Optional[ExtractionConfig] = None,
) -> Dict[str, Any]:
    arguments: List[Dict[str, str]] = []
    for arg in sorted(framework.arguments):
        entry = {"id": arg}
        label = framework.label(arg)
        if label is not None:
            entry["label"] = label
        arguments.append(entry)
    document: Dict[str, Any] = {
        "arguments": arguments,
        "attacks": [list(edge) for edge in sorted(framework.attacks)],
        "supports": [list(edge) for edge in sorted(framework.supports)],
        "decisions": list(framework.decisions),
    }
    if ordering is not None:
        document["preferences"] = render(ordering)
    if extraction is not None:
        document["extraction"] = {
            k: _number(v) if isinstance(v, float) else v
            for k, v in extraction.to_fields().items()
        }
    if scores is not None:
        document["base_scores"] = {arg: _number(scores[arg]) for arg in sorted(scores)}
    return document


def dump_document(document: Mapping[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_qbaf(
    framework: BipolarFramework,
    scores: Mapping[str, float],
    dest: Source,
    ordering: Optional[PreferenceOrdering] = None,
    extraction: Optional[ExtractionConfig] = None,
    adapter: Optional[StorageAdapter] = None,
) -> None:
    """Write the framework with its base scores; output bytes depend only on the inputs."""
    validate_scores(framework, scores)
    adapter = adapter or LocalStorageAdapter()
    text = dump_document(to_document(framework, scores, ordering, extraction))
    adapter.write_text(dest, text)
