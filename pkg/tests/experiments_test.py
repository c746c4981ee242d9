import json
from collections import Counter

import numpy as np
import pytest

from prefqbaf.config.settings import Settings
from prefqbaf.exceptions import ConfigError, EmptySequenceError, LengthMismatchError
from prefqbaf.experiments import (
    PUBLISHED_TABLE,
    SWEEP_COLUMNS,
    StudyConfig,
    cohen_kappa,
    fubini,
    reproduce_published_tables,
    run_agreement_study,
    sample_rng,
    sample_scenario,
    sensitivity_sweep,
)
from prefqbaf.framework import BipolarFramework, running_example
from prefqbaf.preferences import parse_dsl
from prefqbaf.semantics import SemanticsKind


@pytest.fixture
def config():
    """Small uncentred study over the feeding-pace framework."""
    return StudyConfig(sample_count=200, seed=7)


@pytest.fixture(scope="module")
def reproduction():
    """Recomputed published table."""
    return reproduce_published_tables()


def _cell(report, row, kind, option):
    for cell in report.cells:
        if (cell.row, cell.semantics, cell.option) == (row, kind, option):
            return cell
    raise KeyError((row, kind, option))


def test_kappa_examples():
    """Test kappa on hand-computed label sequences."""
    assert cohen_kappa(["x", "x", "y", "y"], ["x", "x", "y", "y"]) == 1.0
    assert cohen_kappa(["x", "y"], ["y", "x"]) == -1.0
    assert cohen_kappa(["x", "x", "y", "y"], ["x", "y", "x", "y"]) == 0.0
    assert cohen_kappa(["x", "x"], ["x", "x"]) == 1.0
    first = ["D1", "D1", "D2", "D2", "D2"]
    second = ["D1", "D2", "D2", "D2", "D2"]
    assert cohen_kappa(first, second) == pytest.approx((0.8 - 0.56) / (1 - 0.56))


def test_kappa_errors():
    """Test kappa needs equally long, non-empty sequences."""
    with pytest.raises(LengthMismatchError):
        cohen_kappa(["x"], ["x", "y"])
    with pytest.raises(EmptySequenceError):
        cohen_kappa([], [])


def test_kappa_bounded():
    """Test kappa never exceeds 1 and equals 1 against itself."""
    rng = np.random.default_rng(3)
    for _ in range(500):
        size = int(rng.integers(1, 30))
        first = list(rng.choice(["D1", "D2", "TIE"], size=size))
        second = list(rng.choice(["D1", "D2", "TIE"], size=size))
        assert cohen_kappa(first, second) <= 1.0
        assert cohen_kappa(first, first) == 1.0


def test_fubini():
    """Test the ordered-partition counts."""
    assert [fubini(n) for n in range(7)] == [1, 1, 3, 13, 75, 541, 4683]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"sample_count": 0, "seed": 1},
        {"sample_count": 10, "seed": -1},
        {"sample_count": 10, "seed": 2**64},
        {"sample_count": 10, "seed": 1, "centralisation": True, "normalisation": True},
        {"sample_count": 10, "seed": 1, "top_range": (0.9, 0.6)},
        {"sample_count": 10, "seed": 1, "bot_range": (0.0, 0.7)},
        {"sample_count": 10, "seed": 1, "centralisation": True, "top_range": (0.3, 1.0)},
        {"sample_count": 10, "seed": 1, "ratio_choices": ()},
        {"sample_count": 10, "seed": 1, "ratio_choices": (1.0, 2.0)},
        {"sample_count": 10, "seed": 1, "delta": 0.0},
        {"sample_count": 10, "seed": 1, "workers": 0},
    ],
)
def test_study_config_errors(kwargs):
    """Test invalid study configurations are rejected."""
    with pytest.raises(ConfigError):
        StudyConfig(**kwargs)


def test_study_config_small_framework():
    """Test sampling needs at least two reasons to order."""
    framework = BipolarFramework.create(arguments=["a", "D"], supports=[("a", "D")], decisions=["D"])
    with pytest.raises(ConfigError):
        StudyConfig(sample_count=1, seed=1, framework=framework)


def test_study_config_from_settings():
    """Test settings supply defaults and keyword overrides win."""
    settings = Settings(workers=3, ratio_choices=(2.0, 3.0))
    config = StudyConfig.from_settings(settings, 5, 11, centralisation=True, workers=2)
    assert config.workers == 2
    assert config.ratio_choices == (2.0, 3.0)
    assert config.centralisation


def test_sample_scenario_deterministic(config):
    """Test a sample depends only on the seed and its index."""
    first = sample_scenario(sample_rng(7, 3), config)
    second = sample_scenario(sample_rng(7, 3), config)
    other = [sample_scenario(sample_rng(7, i), config) for i in range(20)]
    assert first == second
    assert len(set(other)) > 1


def test_sample_scenario_modes():
    """Test the sampled range respects the chosen mode."""
    centred = StudyConfig(sample_count=1, seed=1, centralisation=True)
    normalised = StudyConfig(sample_count=1, seed=1, normalisation=True)
    plain = StudyConfig(sample_count=1, seed=1)
    for index in range(200):
        rng = sample_rng(1, index)
        ordering, extraction = sample_scenario(rng, centred)
        top, bot = extraction.limits(ordering)
        assert 0.55 <= top <= 1.0
        assert top + bot == pytest.approx(1.0, abs=1e-12)
        assert extraction.weights.ratio in (2.0, 3.0, 4.0, 5.0, 6.0)

        ordering, extraction = sample_scenario(sample_rng(1, index), normalised)
        assert extraction.limits(ordering) == (1.0, 0.0)

        ordering, extraction = sample_scenario(sample_rng(1, index), plain)
        top, bot = extraction.limits(ordering)
        assert 0.0 <= bot <= 0.45 and 0.55 <= top <= 1.0
        assert ordering.arguments == frozenset("abcdef")


def test_sampled_tier_counts(config):
    """Test every tier count from 2 to 6 occurs and single tiers never do."""
    counts = Counter(
        len(sample_scenario(sample_rng(99, i), config)[0].tiers) for i in range(10_000)
    )
    assert set(counts) == {2, 3, 4, 5, 6}
    # Six singleton tiers make up 720 of the 4682 multi-tier partitions.
    assert counts[6] / 10_000 == pytest.approx(720 / 4682, abs=0.03)


def test_agreement_study(config):
    """Test the report shape and internal consistency."""
    report = run_agreement_study(config)
    assert set(report.agreement) == {"QE-EB", "QE-DF", "EB-DF"}
    assert set(report.kappa) == set(report.agreement)
    for kind in SemanticsKind:
        counts = report.decision_counts[kind.label]
        assert sum(counts.values()) == 200
        assert set(counts) <= {"D1", "D2", "TIE"}
        assert report.tie_counts[kind.label] == counts.get("TIE", 0)
    assert all(0.0 <= value <= 1.0 for value in report.agreement.values())
    assert all(value <= 1.0 for value in report.kappa.values())
    payload = json.loads(report.to_json())
    assert payload["sample_count"] == 200
    assert payload["seed"] == 7


def test_agreement_study_worker_independent(config):
    """Test thread count does not change the result."""
    single = run_agreement_study(config)
    threaded = run_agreement_study(
        StudyConfig(sample_count=200, seed=7, workers=4)
    )
    assert single.to_json() == threaded.to_json()


def test_agreement_study_repeatable():
    """Test rerunning with the same seed gives the same report."""
    first = run_agreement_study(StudyConfig(sample_count=100, seed=1, centralisation=True))
    second = run_agreement_study(StudyConfig(sample_count=100, seed=1, centralisation=True))
    assert first == second
    assert first.centralisation and not first.normalisation


@pytest.mark.slow
def test_centralised_study_agreement():
    """Test QE and EB agree far more often than either agrees with DF-QuAD."""
    report = run_agreement_study(
        StudyConfig(sample_count=30_000, seed=2024, centralisation=True, workers=4)
    )
    assert report.agreement["QE-EB"] >= 0.9
    assert report.agreement["QE-EB"] > report.agreement["QE-DF"]
    assert report.agreement["QE-EB"] > report.agreement["EB-DF"]
    assert report.kappa["QE-EB"] >= 0.8
    assert report.kappa["QE-EB"] > report.kappa["QE-DF"]
    assert report.kappa["QE-EB"] > report.kappa["EB-DF"]


def test_reproduction_decisions(reproduction):
    """Test every recomputed decision matches the published one."""
    assert reproduction.decision_total == len(PUBLISHED_TABLE) * 3
    assert reproduction.decision_matches == reproduction.decision_total
    assert len(reproduction.cells) == len(PUBLISHED_TABLE) * 3 * 2


# Cells where the feeding-pace framework departs from the published two-decimal values.
DIVERGENT_CELLS = {(row, SemanticsKind.DFQUAD, "slow") for row in range(1, 9)} | {
    (4, SemanticsKind.QE, "fast")
}


def test_reproduction_values(reproduction):
    """Test every other cell stays within 0.02 of the published value."""
    for cell in reproduction.cells:
        if (cell.row, cell.semantics, cell.option) not in DIVERGENT_CELLS:
            assert abs(cell.delta) <= 0.02, cell
    assert _cell(reproduction, 2, SemanticsKind.QE, "slow").computed == pytest.approx(
        0.57, abs=0.01
    )
    assert _cell(reproduction, 2, SemanticsKind.QE, "fast").computed == pytest.approx(
        0.33, abs=0.01
    )
    assert _cell(reproduction, 1, SemanticsKind.DFQUAD, "fast").computed == pytest.approx(
        0.625
    )
    assert _cell(reproduction, 6, SemanticsKind.QE, "slow").computed == pytest.approx(
        0.50, abs=0.01
    )
    assert _cell(reproduction, 6, SemanticsKind.QE, "fast").computed == pytest.approx(
        0.53, abs=0.01
    )


def test_reproduction_mismatches(reproduction):
    """Test exactly the divergent cells are surfaced, with their recomputed values."""
    flagged = {(c.row, c.semantics, c.option) for c in reproduction.mismatches()}
    assert flagged == DIVERGENT_CELLS
    expected_df_slow = (0.5, 0.81, 0.8222, 0.6806, 0.335, 0.465, 0.248, 0.1)
    for row, value in enumerate(expected_df_slow, start=1):
        cell = _cell(reproduction, row, SemanticsKind.DFQUAD, "slow")
        assert cell.computed == pytest.approx(value, abs=1e-4)
    assert _cell(reproduction, 4, SemanticsKind.QE, "fast").computed == pytest.approx(
        0.4235, abs=1e-3
    )


def test_reproduction_frame(reproduction):
    """Test the tabular export."""
    frame = reproduction.to_frame()
    assert frame.columns == [
        "row",
        "semantics",
        "option",
        "computed",
        "paper",
        "delta",
        "decision_match",
    ]
    assert frame.height == 48
    assert set(frame["semantics"].to_list()) == {"qe", "eb", "dfquad"}


def test_sensitivity_sweep():
    """Test the sweep covers the grid and stays in range."""
    frame = sensitivity_sweep(
        running_example(),
        parse_dsl("c = f >> b = e > a = d"),
        tops=(0.6, 0.9),
        ratios=(2.0, 5.0),
    )
    assert tuple(frame.columns) == SWEEP_COLUMNS
    assert frame.height == 2 * 2 * 3 * 2
    assert frame["bot"].to_list()[0] == pytest.approx(0.4)
    assert all(0.0 <= s <= 1.0 for s in frame["strength"].to_list())
    assert set(frame["winner"].to_list()) <= {"D1", "D2", "TIE"}
