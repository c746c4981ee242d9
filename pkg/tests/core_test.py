import json

import pytest

from prefqbaf.bsef import ExtractionConfig, uniform_scores
from prefqbaf.core import DecisionModel
from prefqbaf.exceptions import CoverageError, ParamError, ValidationError
from prefqbaf.framework import running_example
from prefqbaf.preferences import parse_dsl
from prefqbaf.semantics import SemanticsKind


@pytest.fixture
def model():
    """Feeding-pace model with c = f >> b = e > a = d and nu1 over [0.2, 0.8]."""
    return DecisionModel(
        running_example(),
        ordering=parse_dsl("c = f >> b = e > a = d"),
        extraction=ExtractionConfig.nu1(1.0, 3.0, 0.8, 0.2),
    )


def test_base_scores(model):
    """Test scores are extracted from the ordering."""
    scores = model.base_scores()
    assert scores["c"] == 0.8
    assert scores["D1"] == 0.5
    assert model.base_scores() is scores


def test_decide(model):
    """Test the slow option wins under every semantics."""
    assert model.decide().label == "D1"
    outcomes = model.decide_all()
    assert set(outcomes) == set(SemanticsKind)
    assert all(outcome.label == "D1" for outcome in outcomes.values())


def test_strengths(model):
    """Test strengths cover every argument."""
    strengths = model.strengths("eb")
    assert set(strengths) == model.framework.arguments


def test_given_scores():
    """Test explicit base scores bypass extraction."""
    framework = running_example()
    model = DecisionModel(framework, base_scores=uniform_scores(framework))
    assert model.decide(SemanticsKind.QE).label == "D2"
    with pytest.raises(ParamError):
        model.check()


def test_given_scores_validated():
    """Test explicit base scores must fix decisions at 0.5."""
    framework = running_example()
    scores = {arg: 0.6 for arg in framework.arguments}
    with pytest.raises(ValidationError):
        DecisionModel(framework, base_scores=scores).decide()


def test_no_scores():
    """Test a model without scores or preferences cannot decide."""
    with pytest.raises(ParamError):
        DecisionModel(running_example()).decide()


def test_check(model):
    """Test the extraction passes its checks on this ordering."""
    report = model.check(parse_dsl("a = b = c > d = e = f"))
    assert report.axiom1.passed
    assert report.axiom2.passed
    assert report.axiom3.passed
    assert report.properties.centralisation
    assert not report.properties.normalisation
    assert report.properties.achieved_top == 0.8


def test_from_document(tmp_path):
    """Test building a model from a stored document."""
    document = {
        "arguments": [{"id": x} for x in ["a", "b", "c", "d", "e", "f", "D1", "D2"]],
        "attacks": [["a", "D1"], ["e", "b"], ["f", "D2"]],
        "supports": [["c", "b"], ["b", "D1"], ["e", "d"], ["d", "D2"]],
        "decisions": ["D1", "D2"],
        "preferences": "c = f >> b = e > a = d",
        "extraction": {"delta": 1, "Delta": 3, "function": "nu1", "top": 0.8, "bot": 0.2},
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    model = DecisionModel.from_document(str(path))
    assert model.decide().label == "D1"


def test_check_needs_coverage():
    """Test checks refuse an ordering that leaves reasons unranked."""
    model = DecisionModel(
        running_example(),
        ordering=parse_dsl("c = f >> b = e"),
        extraction=ExtractionConfig.nu1(1.0, 3.0, 0.8, 0.2),
    )
    with pytest.raises(CoverageError):
        model.check()
