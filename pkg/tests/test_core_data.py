"""Domain types, curation, and the CSV schemas."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agestack.core import (
    AgeRange,
    Gender,
    Manifest,
    Prediction,
    Source,
    SubjectRecord,
    band_of,
    curate_balanced,
    format_real,
    parse_manifest,
    parse_predictions,
    parse_records,
    render_manifest,
    render_predictions,
    render_records,
    validate_age,
)
from agestack.errors import (
    DuplicateSubjectId,
    EmptyInput,
    OutOfRange,
    SchemaError,
    UnbalancedManifest,
    UnderfilledAge,
    UsageError,
)

# The five published bands, pinned age by age.
EXPECTED_BANDS = (
    [(a, AgeRange.B0_5) for a in range(0, 6)]
    + [(a, AgeRange.B6_10) for a in range(6, 11)]
    + [(a, AgeRange.B11_15) for a in range(11, 16)]
    + [(a, AgeRange.B16_17) for a in range(16, 18)]
    + [(a, AgeRange.B18_25) for a in range(18, 26)]
)


def make_record(subject_id="s1", age=17, **kwargs):
    defaults = dict(
        gender=Gender.UNKNOWN,
        source=Source.SYNTHETIC,
        license_tag="cc0",
        image_ref=f"img/{subject_id}.png",
    )
    defaults.update(kwargs)
    return SubjectRecord(subject_id=subject_id, age=age, **defaults)


def balanced_records(quota, age_min=0, age_max=3):
    return [
        make_record(f"a{age:02d}-{i}", age)
        for age in range(age_min, age_max + 1)
        for i in range(quota)
    ]


# ------------------------------------------------------------------ bands


def test_band_of_exhaustive():
    assert len(EXPECTED_BANDS) == 26
    for age, band in EXPECTED_BANDS:
        assert band_of(age) is band


def test_band_of_rejects_out_of_range():
    for bad in (26, 40, 130):
        with pytest.raises(OutOfRange):
            band_of(bad)
    with pytest.raises(OutOfRange):
        band_of(-1)


def test_band_bounds_and_midpoints():
    assert [b.value for b in AgeRange] == [(0, 5), (6, 10), (11, 15), (16, 17), (18, 25)]
    assert [b.midpoint for b in AgeRange] == [2.5, 8.0, 13.0, 16.5, 21.5]
    assert [b.label for b in AgeRange] == ["0-5", "6-10", "11-15", "16-17", "18-25"]


def test_validate_age():
    assert validate_age(0) == 0
    assert validate_age(130) == 130
    with pytest.raises(OutOfRange):
        validate_age(-1)
    with pytest.raises(OutOfRange):
        validate_age(131)
    with pytest.raises(OutOfRange):
        validate_age(17.0)
    with pytest.raises(OutOfRange):
        validate_age(True)


# ------------------------------------------------------------------ types


def test_subject_record_rejects_csv_unsafe_id():
    with pytest.raises(ValueError):
        make_record(subject_id="a,b")
    with pytest.raises(ValueError):
        make_record(subject_id="")
    with pytest.raises(ValueError):
        make_record(license_tag='cc"0')


def test_subject_record_allows_commas_in_image_ref():
    rec = make_record(image_ref="dir,with,commas/img.png")
    assert rec.image_ref == "dir,with,commas/img.png"


def test_manifest_enforces_balance():
    records = balanced_records(2) + [make_record("extra", 0)]
    with pytest.raises(UnbalancedManifest):
        Manifest.from_records(records)


def test_manifest_rejects_duplicates():
    records = balanced_records(1)
    records[1] = make_record(records[0].subject_id, records[1].age)
    with pytest.raises(DuplicateSubjectId):
        Manifest.from_records(records)


def test_manifest_from_records_derives_shape():
    manifest = Manifest.from_records(balanced_records(3, age_min=5, age_max=7))
    assert manifest.declared_age_min == 5
    assert manifest.declared_age_max == 7
    assert manifest.per_age_quota == 3
    assert len(manifest) == 9
    assert manifest.age_by_subject()["a05-0"] == 5


def test_manifest_rejects_empty():
    with pytest.raises(EmptyInput):
        Manifest.from_records([])


def test_prediction_validation():
    with pytest.raises(ValueError):
        Prediction(subject_id="s1", estimator_id="aws", point=-0.1)
    with pytest.raises(ValueError):
        Prediction(subject_id="s1", estimator_id="aws", point=float("nan"))
    with pytest.raises(ValueError):
        Prediction(subject_id="s1", estimator_id="aws", point=17.0, low=20.0, high=15.0)
    with pytest.raises(ValueError):
        Prediction(subject_id="s1", estimator_id="aws", point=17.0, latency_ms=-1.0)
    with pytest.raises(ValueError):
        Prediction(subject_id="s1", estimator_id="aws", point=17.0, raw_digest="XYZ")


# --------------------------------------------------------------- curation


def test_curate_selects_quota_per_age():
    pool = balanced_records(5, age_min=0, age_max=2)
    manifest = curate_balanced(pool, quota=3, age_min=0, age_max=2, seed=0)
    assert manifest.per_age_quota == 3
    assert len(manifest) == 9
    assert set(manifest.subject_ids()) <= {r.subject_id for r in pool}


def test_curate_deterministic_and_seed_sensitive():
    pool = balanced_records(6, age_min=0, age_max=1)
    a = curate_balanced(pool, quota=2, age_min=0, age_max=1, seed=9)
    b = curate_balanced(pool, quota=2, age_min=0, age_max=1, seed=9)
    c = curate_balanced(pool, quota=2, age_min=0, age_max=1, seed=10)
    assert a.subject_ids() == b.subject_ids()
    assert a.subject_ids() != c.subject_ids()  # 6 choose 2 twice; collision unlikely


def test_curate_underfilled_age():
    pool = balanced_records(2, age_min=0, age_max=1) + [make_record("x", 2)]
    with pytest.raises(UnderfilledAge) as err:
        curate_balanced(pool, quota=2, age_min=0, age_max=2, seed=0)
    assert err.value.age == 2
    assert err.value.available == 1
    assert err.value.quota == 2


def test_curate_ignores_out_of_range_candidates():
    pool = balanced_records(2, age_min=0, age_max=1) + [make_record("old", 80)]
    manifest = curate_balanced(pool, quota=2, age_min=0, age_max=1, seed=0)
    assert "old" not in manifest.subject_ids()


def test_curate_argument_validation():
    pool = balanced_records(1)
    with pytest.raises(UsageError):
        curate_balanced(pool, quota=0, age_min=0, age_max=3, seed=0)
    with pytest.raises(UsageError):
        curate_balanced(pool, quota=1, age_min=3, age_max=0, seed=0)


@settings(max_examples=40, deadline=None)
@given(
    quota=st.integers(min_value=1, max_value=3),
    extra=st.lists(st.integers(min_value=0, max_value=3), max_size=8),
    seed=st.integers(min_value=0, max_value=2**64 - 1),
)
def test_curate_property_balanced_subset(quota, extra, seed):
    pool = balanced_records(quota, age_min=0, age_max=3)
    pool += [make_record(f"x{i}", age) for i, age in enumerate(extra)]
    manifest = curate_balanced(pool, quota=quota, age_min=0, age_max=3, seed=seed)
    ages = [r.age for r in manifest.records]
    for age in range(4):
        assert ages.count(age) == quota
    assert set(manifest.subject_ids()) <= {r.subject_id for r in pool}


# --------------------------------------------------------------- schemas


GOLDEN_MANIFEST = (
    "subject_id,age,gender,source,license_tag,image_ref\n"
    "a00-0,0,unknown,synthetic,cc0,img/a00-0.png\n"
    "a01-0,1,unknown,synthetic,cc0,img/a01-0.png\n"
)


def test_manifest_golden_bytes():
    manifest = Manifest.from_records(balanced_records(1, age_min=0, age_max=1))
    assert render_manifest(manifest) == GOLDEN_MANIFEST


def test_manifest_roundtrip():
    manifest = Manifest.from_records(balanced_records(2, age_min=3, age_max=6))
    again = parse_manifest(render_manifest(manifest))
    assert again == manifest


def test_records_roundtrip_with_quoted_image_ref():
    records = [make_record("s1", 4, image_ref='we,ird"path\nwith everything')]
    text = render_records(records)
    assert parse_records(text) == records


def test_parse_records_bad_header():
    with pytest.raises(SchemaError) as err:
        parse_records("subject,age\nx,1\n")
    assert err.value.line == 1


def test_parse_records_bad_age_position():
    text = GOLDEN_MANIFEST + "a02-0,twelve,unknown,synthetic,cc0,img.png\n"
    with pytest.raises(SchemaError) as err:
        parse_records(text)
    assert err.value.line == 4
    assert err.value.column == "age"


def test_parse_records_bad_enum():
    text = (
        "subject_id,age,gender,source,license_tag,image_ref\n"
        "s1,3,robot,synthetic,cc0,img.png\n"
    )
    with pytest.raises(SchemaError) as err:
        parse_records(text)
    assert err.value.column == "gender"


def test_parse_records_duplicate_subject():
    text = GOLDEN_MANIFEST + "a00-0,2,unknown,synthetic,cc0,img.png\n"
    with pytest.raises(DuplicateSubjectId):
        parse_records(text)


def test_parse_records_field_count():
    with pytest.raises(SchemaError) as err:
        parse_records("subject_id,age,gender,source,license_tag,image_ref\ns1,3\n")
    assert err.value.line == 2


def test_parse_manifest_rejects_unbalanced_file():
    text = GOLDEN_MANIFEST + "a01-1,1,unknown,synthetic,cc0,img.png\n"
    with pytest.raises(UnbalancedManifest):
        parse_manifest(text)


GOLDEN_PREDICTIONS = (
    "subject_id,estimator_id,point,low,high,latency_ms,raw_digest\n"
    "s1,aws,15,15,22,102.5,ab12\n"
    "s2,azure,24.458333,,,,\n"
)


def test_predictions_golden_bytes():
    rows = [
        Prediction("s1", "aws", 15.0, low=15.0, high=22.0, latency_ms=102.5, raw_digest="ab12"),
        Prediction("s2", "azure", 24.458333),
    ]
    assert render_predictions(rows) == GOLDEN_PREDICTIONS


def test_predictions_roundtrip():
    rows = [
        Prediction("s1", "aws", 15.0, low=15.0, high=22.0, latency_ms=102.5, raw_digest="ab12"),
        Prediction("s2", "azure", 24.458333),
    ]
    assert parse_predictions(render_predictions(rows)) == rows


def test_parse_predictions_duplicate_pair():
    text = GOLDEN_PREDICTIONS + "s1,aws,16,,,,\n"
    with pytest.raises(SchemaError):
        parse_predictions(text)


def test_parse_predictions_bad_point():
    text = (
        "subject_id,estimator_id,point,low,high,latency_ms,raw_digest\n"
        "s1,aws,not-a-number,,,,\n"
    )
    with pytest.raises(SchemaError) as err:
        parse_predictions(text)
    assert err.value.column == "point"


def test_format_real():
    assert format_real(15.0) == "15"
    assert format_real(24.458333) == "24.458333"
    assert format_real(2.5) == "2.5"
    assert format_real(-0.0000001) == "0"
    assert format_real(0.0) == "0"
    assert format_real(1.0000005) == "1.000001"  # at most six fractional digits
    assert format_real(-3.25) == "-3.25"


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0, max_value=130, allow_nan=False))
def test_format_real_parses_back_close(x):
    assert abs(float(format_real(x)) - x) <= 5e-7


@settings(max_examples=50, deadline=None)
@given(
    points=st.lists(
        st.floats(min_value=0, max_value=99, allow_nan=False), min_size=1, max_size=10
    )
)
def test_predictions_roundtrip_property(points):
    rows = [Prediction(f"s{i}", "e", round(p, 6)) for i, p in enumerate(points)]
    assert parse_predictions(render_predictions(rows)) == rows
