"""MAE, per-age MAE, band accuracy, and service comparison."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agestack.core.types import AgeRange
from agestack.errors import CoverageMismatch, EmptyInput, OutOfRange
from agestack.metrics import (
    PairedSample,
    band_accuracy,
    compare_services,
    mae,
    mae_per_age,
    predicted_band,
    round_half_up,
)


def paired(values):
    return [PairedSample(f"s{i}", p, r) for i, (p, r) in enumerate(values)]


# Five hand-computed fixtures: (pairs, expected MAE). Dyadic values keep
# the arithmetic exact; the tolerance is 1e-12 regardless.
MAE_FIXTURES = [
    ([(17.0, 17)], 0.0),
    ([(18.0, 17), (16.0, 17)], 1.0),
    ([(15.25, 16), (18.5, 18), (2.0, 0)], (0.75 + 0.5 + 2.0) / 3.0),
    ([(0.0, 25), (25.0, 0)], 25.0),
    ([(3.5, 3), (3.5, 4), (10.0, 10), (21.0, 17)], (0.5 + 0.5 + 0.0 + 4.0) / 4.0),
]


@pytest.mark.parametrize("pairs,expected", MAE_FIXTURES)
def test_mae_hand_fixtures(pairs, expected):
    assert abs(mae(paired(pairs)) - expected) < 1e-12


def test_mae_rejects_empty():
    with pytest.raises(EmptyInput):
        mae([])


def test_mae_per_age_hand_fixture():
    samples = paired([(1.0, 0), (3.0, 0), (5.5, 5), (25.0, 17)])
    per_age = mae_per_age(samples)
    assert list(per_age) == [0, 5, 17]  # ascending ages
    assert abs(per_age[0] - 2.0) < 1e-12
    assert abs(per_age[5] - 0.5) < 1e-12
    assert abs(per_age[17] - 8.0) < 1e-12


def test_mae_per_age_matches_overall():
    samples = paired([(4.0, 3), (2.0, 3), (9.0, 8), (8.25, 8)])
    per_age = mae_per_age(samples)
    weighted = (2 * per_age[3] + 2 * per_age[8]) / 4
    assert abs(weighted - mae(samples)) < 1e-12


def test_round_half_up():
    assert round_half_up(16.5) == 17
    assert round_half_up(17.4999) == 17
    assert round_half_up(2.5) == 3
    assert round_half_up(2.4) == 2
    assert round_half_up(0.5) == 1
    assert round_half_up(-0.5) == 0
    assert round_half_up(-0.6) == -1
    assert round_half_up(10.0) == 10


def test_predicted_band_rounds_then_clamps():
    assert predicted_band(5.4) is AgeRange.B0_5
    assert predicted_band(5.5) is AgeRange.B6_10
    assert predicted_band(15.5) is AgeRange.B16_17
    assert predicted_band(17.49) is AgeRange.B16_17
    assert predicted_band(17.5) is AgeRange.B18_25
    assert predicted_band(31.2) is AgeRange.B18_25  # clamped to 25
    assert predicted_band(0.0) is AgeRange.B0_5


def test_band_accuracy_hand_fixture():
    # Ages 16 and 17 only: 3 of 4 predictions land inside [16-17].
    samples = paired([(16.2, 16), (17.6, 17), (16.9, 17), (15.5, 16)])
    table = band_accuracy(samples)
    assert set(table.per_band) == {AgeRange.B16_17}
    assert abs(table.per_band[AgeRange.B16_17] - 0.75) < 1e-12
    assert abs(table.average - 0.75) < 1e-12


def test_band_accuracy_averages_over_present_bands_only():
    samples = paired(
        [
            (2.0, 2),  # [0-5] hit
            (9.0, 7),  # [6-10] hit
            (20.0, 12),  # [11-15] miss
            (12.0, 13),  # [11-15] hit
        ]
    )
    table = band_accuracy(samples)
    assert AgeRange.B16_17 not in table.per_band
    assert AgeRange.B18_25 not in table.per_band
    assert abs(table.per_band[AgeRange.B11_15] - 0.5) < 1e-12
    assert abs(table.average - (1.0 + 1.0 + 0.5) / 3.0) < 1e-12


def test_band_accuracy_rejects_empty():
    with pytest.raises(EmptyInput):
        band_accuracy([])


def test_paired_sample_validation():
    with pytest.raises(OutOfRange):
        PairedSample("s1", 17.0, -1)
    with pytest.raises(ValueError):
        PairedSample("s1", float("inf"), 17)


def test_compare_services_perfect_first():
    by_estimator = {
        "sharp": paired([(10.0, 10), (20.0, 20)]),
        "blunt": paired([(11.0, 10), (21.0, 20)]),
    }
    ranked = compare_services(by_estimator)
    assert ranked[0] == ("sharp", 0.0)
    assert ranked[1][0] == "blunt"
    assert abs(ranked[1][1] - 1.0) < 1e-12


def test_compare_services_tie_breaks_lexicographic():
    by_estimator = {
        "zeta": paired([(11.0, 10)]),
        "alpha": paired([(9.0, 10)]),
    }
    assert [name for name, _ in compare_services(by_estimator)] == ["alpha", "zeta"]


def test_compare_services_coverage_mismatch():
    full = paired([(10.0, 10), (20.0, 20), (5.0, 5)])
    partial = full[:2]  # missing one subject
    short = full[:1]
    with pytest.raises(CoverageMismatch) as err:
        compare_services({"full": full, "partial": partial, "short": short})
    # first offender by estimator id order
    assert err.value.estimator_id == "partial"
    assert err.value.missing_count == 1


@settings(max_examples=200, deadline=None)
@given(
    left=st.lists(
        st.tuples(
            st.floats(min_value=0, max_value=60, allow_nan=False),
            st.integers(min_value=0, max_value=25),
        ),
        min_size=1,
        max_size=30,
    ),
    right=st.lists(
        st.tuples(
            st.floats(min_value=0, max_value=60, allow_nan=False),
            st.integers(min_value=0, max_value=25),
        ),
        min_size=1,
        max_size=30,
    ),
)
def test_mae_concatenation_identity(left, right):
    a = [PairedSample(f"l{i}", p, r) for i, (p, r) in enumerate(left)]
    b = [PairedSample(f"r{i}", p, r) for i, (p, r) in enumerate(right)]
    combined = mae(a + b)
    weighted = (len(a) * mae(a) + len(b) * mae(b)) / (len(a) + len(b))
    assert abs(combined - weighted) < 1e-9


@settings(max_examples=100, deadline=None)
@given(
    pairs=st.lists(
        st.tuples(
            st.floats(min_value=0, max_value=60, allow_nan=False),
            st.integers(min_value=0, max_value=25),
        ),
        min_size=2,
        max_size=20,
    )
)
def test_mae_permutation_invariant(pairs):
    samples = [PairedSample(f"s{i}", p, r) for i, (p, r) in enumerate(pairs)]
    assert abs(mae(samples) - mae(list(reversed(samples)))) < 1e-12
