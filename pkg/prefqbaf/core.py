from __future__ import annotations

from typing import Dict, Mapping, Optional

from .axioms import AxiomSuiteReport, check_suite
from .bsef import ExtractionConfig, check_coverage, extract_qbaf
from .exceptions import ParamError
from .framework import BipolarFramework, ScoreAssignment, validate_scores
from .preferences import PreferenceOrdering
from .semantics import (
    DecisionOutcome,
    SemanticsKind,
    StrengthAssignment,
    decide,
    evaluate,
)
from .storage import Source, load_framework


class DecisionModel:
    """A framework plus the inputs that fix its base scores.

    Base scores come either from a preference ordering and an extraction config, or
    are given directly.
    """

    def __init__(
        self,
        framework: BipolarFramework,
        ordering: Optional[PreferenceOrdering] = None,
        extraction: Optional[ExtractionConfig] = None,
        base_scores: Optional[Mapping[str, float]] = None,
    ):
        self.framework = framework
        self.ordering = ordering
        self.extraction = extraction
        self._given_scores = base_scores
        self._scores: Optional[ScoreAssignment] = None

    @classmethod
    def from_document(cls, source: Source) -> "DecisionModel":
        loaded = load_framework(source)
        return cls(
            loaded.framework,
            ordering=loaded.ordering,
            extraction=loaded.extraction,
            base_scores=loaded.base_scores,
        )

    def base_scores(self) -> ScoreAssignment:
        if self._scores is None:
            self._scores = self._resolve_scores()
        return self._scores

    def _resolve_scores(self) -> ScoreAssignment:
        if self._given_scores is not None:
            validate_scores(self.framework, self._given_scores)
            return ScoreAssignment(self._given_scores)
        if self.ordering is None or self.extraction is None:
            raise ParamError(
                "base scores need either explicit values or preferences plus an extraction config"
            )
        return extract_qbaf(self.framework, self.ordering, self.extraction)

    def strengths(self, kind: "SemanticsKind | str" = SemanticsKind.QE) -> StrengthAssignment:
        return evaluate(self.framework, self.base_scores(), kind)

    def decide(self, kind: "SemanticsKind | str" = SemanticsKind.QE) -> DecisionOutcome:
        return decide(self.strengths(kind), self.framework.decisions)

    def decide_all(self) -> Dict[SemanticsKind, DecisionOutcome]:
        return {kind: self.decide(kind) for kind in SemanticsKind}

    def check(self, other: Optional[PreferenceOrdering] = None) -> AxiomSuiteReport:
        """Axioms and properties of the extraction on this model's ordering."""
        if self.ordering is None or self.extraction is None:
            raise ParamError("checking needs preferences and an extraction config")
        check_coverage(self.framework, self.ordering)
        return check_suite(self.ordering, self.extraction, other)
