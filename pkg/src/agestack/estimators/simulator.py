"""Biased-service simulator: piecewise-linear bias plus seeded noise.

A profile describes one service's systematic error as bias knots
(age, offset) and noise knots (age, sigma). Between knots both curves
interpolate linearly; outside the knot range they extend flat, so any
profile covers the whole 0..=25 range. A simulated prediction is

    max(clamp_min, age + bias(age) + sigma(age) * z)

with z drawn from the project PRNG's Box-Muller stream. Profiles live
in a versioned INI file, not in code.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from importlib import resources

from agestack.core.types import Manifest, Prediction, SubjectRecord
from agestack.errors import InvalidProfile, MissingSubject
from agestack.estimators.base import EstimatorAdapter
from agestack.rng import SplitMix64, stream_seed

PROFILE_FORMAT_VERSION = 1

Knots = tuple[tuple[int, float], ...]


def _validate_knots(knots: Knots, what: str, non_negative: bool) -> None:
    if not knots:
        raise InvalidProfile(f"{what} needs at least one knot")
    ages = [age for age, _ in knots]
    if any(b <= a for a, b in zip(ages, ages[1:])):
        raise InvalidProfile(f"{what} knot ages must be strictly increasing, got {ages}")
    for age, value in knots:
        if age != int(age):
            raise InvalidProfile(f"{what} knot ages must be integers, got {age!r}")
        if non_negative and value < 0:
            raise InvalidProfile(f"{what} values must be >= 0, got {value} at age {age}")


def piecewise(knots: Knots, age: float) -> float:
    """Linear interpolation between knots, flat beyond the endpoints."""
    if age <= knots[0][0]:
        return knots[0][1]
    if age >= knots[-1][0]:
        return knots[-1][1]
    for (a0, v0), (a1, v1) in zip(knots, knots[1:]):
        if a0 <= age <= a1:
            return v0 + (v1 - v0) * (age - a0) / (a1 - a0)
    raise AssertionError("unreachable: knots cover the clamped range")


@dataclass(frozen=True)
class BiasProfile:
    """One simulated service's systematic error shape."""

    estimator_id: str
    bias_knots: Knots
    noise_sigma_knots: Knots
    clamp_min: float = 0.0

    def __post_init__(self):
        if not self.estimator_id:
            raise InvalidProfile("estimator_id must be non-empty")
        _validate_knots(self.bias_knots, "bias", non_negative=False)
        _validate_knots(self.noise_sigma_knots, "sigma", non_negative=True)

    def bias(self, age: float) -> float:
        return piecewise(self.bias_knots, age)

    def sigma(self, age: float) -> float:
        return piecewise(self.noise_sigma_knots, age)


def simulate(profile: BiasProfile, subjects: Manifest, seed: int) -> list[Prediction]:
    """One prediction per manifest record, in manifest order.

    The noise stream is keyed by (seed, estimator_id) so several
    profiles run under one top-level seed draw independent noise, and
    one unit normal is consumed per record even where sigma is zero, so
    editing a profile's sigma at one age never shifts another age's draw.
    """
    rng = SplitMix64(stream_seed(seed, profile.estimator_id))
    out = []
    for record in subjects.records:
        noise = rng.normal() * profile.sigma(record.age)
        point = max(profile.clamp_min, record.age + profile.bias(record.age) + noise)
        out.append(
            Prediction(
                subject_id=record.subject_id,
                estimator_id=profile.estimator_id,
                point=point,
            )
        )
    return out


class SimulatorAdapter(EstimatorAdapter):
    """Precomputes the full simulated run so predict() is a pure lookup."""

    def __init__(self, profile: BiasProfile, subjects: Manifest, seed: int):
        self.estimator_id = profile.estimator_id
        self.profile = profile
        self._by_subject = {p.subject_id: p for p in simulate(profile, subjects, seed)}

    def predict(self, record: SubjectRecord) -> Prediction:
        try:
            return self._by_subject[record.subject_id]
        except KeyError:
            raise MissingSubject(record.subject_id, self.estimator_id) from None


def _parse_knots(raw: str, section: str, key: str) -> Knots:
    knots = []
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        age_part, sep, value_part = chunk.partition(":")
        if not sep:
            raise InvalidProfile(f"[{section}] {key}: expected age:value, got {chunk!r}")
        try:
            knots.append((int(age_part), float(value_part)))
        except ValueError:
            raise InvalidProfile(f"[{section}] {key}: bad knot {chunk!r}") from None
    return tuple(knots)


def parse_profiles(text: str) -> dict[str, BiasProfile]:
    """Parse the INI profile format; see profiles/default.ini for shape."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise InvalidProfile(f"unparseable profile file: {exc}") from None
    if "meta" not in parser or "version" not in parser["meta"]:
        raise InvalidProfile("profile file must carry [meta] version")
    version = parser["meta"].getint("version")
    if version != PROFILE_FORMAT_VERSION:
        raise InvalidProfile(
            f"profile format version {version} unsupported (expected {PROFILE_FORMAT_VERSION})"
        )
    profiles = {}
    for section in parser.sections():
        if section == "meta":
            continue
        body = parser[section]
        for key in body:
            if key not in ("bias", "sigma"):
                raise InvalidProfile(f"[{section}] unknown key {key!r}")
        if "bias" not in body or "sigma" not in body:
            raise InvalidProfile(f"[{section}] must define both bias and sigma")
        profiles[section] = BiasProfile(
            estimator_id=section,
            bias_knots=_parse_knots(body["bias"], section, "bias"),
            noise_sigma_knots=_parse_knots(body["sigma"], section, "sigma"),
        )
    if not profiles:
        raise InvalidProfile("profile file defines no profiles")
    return profiles


def load_profiles(path: str) -> dict[str, BiasProfile]:
    with open(path, encoding="utf-8") as handle:
        return parse_profiles(handle.read())


def default_profiles() -> dict[str, BiasProfile]:
    """The five shipped service profiles, packaged with the library."""
    text = (
        resources.files("agestack.estimators")
        .joinpath("profiles")
        .joinpath("default.ini")
        .read_text(encoding="utf-8")
    )
    return parse_profiles(text)
