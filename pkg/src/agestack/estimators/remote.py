"""Remote face-API clients with bounded retry and provider parsers.

Three response dialects are supported: "aws" (FaceDetails/AgeRange),
"azure" (faceAttributes.age), and "howold" (Faces/attributes.age,
best effort since that service never published a contract). Whenever a
response carries an age range, the emitted point is the LOW bound: the
services' ranges skew high, so the low end is the better age estimate.

Only 429 and 5xx responses are retried, with exponential backoff
through an injectable sleep; auth failures and malformed payloads fail
fast. Real calls cost money and are never exercised by tests, which run
against a local mock server speaking the same dialects.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import httpx

from agestack.core.types import Prediction, SubjectRecord
from agestack.errors import (
    AuthError,
    InvalidHyperparameter,
    NoFaceDetected,
    ProtocolError,
    RateLimited,
    RemoteTimeout,
)
from agestack.estimators.base import EstimatorAdapter

PROVIDERS = ("aws", "azure", "howold")


@dataclass(frozen=True)
class RemoteConfig:
    """Connection settings for one remote estimator."""

    estimator_id: str
    provider: str
    endpoint: str
    credentials_env: str
    timeout_s: float = 10.0
    retry_budget: int = 3
    backoff_base_s: float = 0.5

    def __post_init__(self):
        if self.provider not in PROVIDERS:
            raise InvalidHyperparameter(
                f"provider must be one of {PROVIDERS}, got {self.provider!r}"
            )
        if self.retry_budget < 0:
            raise InvalidHyperparameter(f"retry_budget must be >= 0, got {self.retry_budget}")
        if self.timeout_s <= 0:
            raise InvalidHyperparameter(f"timeout_s must be > 0, got {self.timeout_s}")
        if self.backoff_base_s < 0:
            raise InvalidHyperparameter(
                f"backoff_base_s must be >= 0, got {self.backoff_base_s}"
            )


ParsedAge = tuple[float, float | None, float | None]  # point, low, high


def _digest(body: bytes) -> str:
    return hashlib.sha256(body).hexdigest()


def _json_or_protocol_error(body: bytes):
    try:
        return json.loads(body.decode("utf-8"))
    except (ValueError, UnicodeDecodeError):
        raise ProtocolError(200, _digest(body)) from None


def parse_aws(body: bytes) -> ParsedAge:
    payload = _json_or_protocol_error(body)
    try:
        faces = payload["FaceDetails"]
        if not faces:
            raise NoFaceDetected("provider reported zero faces")
        age_range = faces[0]["AgeRange"]
        low = float(age_range["Low"])
        high = float(age_range["High"])
    except (KeyError, TypeError, ValueError):
        raise ProtocolError(200, _digest(body)) from None
    return low, low, high  # point = low: the range's low bound


def parse_azure(body: bytes) -> ParsedAge:
    payload = _json_or_protocol_error(body)
    try:
        if not payload:
            raise NoFaceDetected("provider reported zero faces")
        age = float(payload[0]["faceAttributes"]["age"])
    except (KeyError, TypeError, ValueError, IndexError):
        raise ProtocolError(200, _digest(body)) from None
    return age, None, None


def parse_howold(body: bytes) -> ParsedAge:
    payload = _json_or_protocol_error(body)
    try:
        faces = payload["Faces"]
        if not faces:
            raise NoFaceDetected("provider reported zero faces")
        age = float(faces[0]["attributes"]["age"])
    except (KeyError, TypeError, ValueError):
        raise ProtocolError(200, _digest(body)) from None
    return age, None, None


_PARSERS: dict[str, Callable[[bytes], ParsedAge]] = {
    "aws": parse_aws,
    "azure": parse_azure,
    "howold": parse_howold,
}

_AUTH_HEADERS = {
    "aws": "X-Api-Key",
    "azure": "Ocp-Apim-Subscription-Key",
    "howold": "Authorization",
}


class RemoteClient:
    """One provider endpoint plus retry policy, behind predict()."""

    def __init__(
        self,
        config: RemoteConfig,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
        clock: Callable[[], float] = time.perf_counter,
    ):
        self.config = config
        self._sleep = sleep
        self._clock = clock
        self._client = httpx.Client(transport=transport, timeout=config.timeout_s)
        self.last_retries = 0  # retries spent on the most recent call

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        token = os.environ.get(self.config.credentials_env, "")
        if not token:
            raise AuthError(
                f"environment variable {self.config.credentials_env!r} is empty or unset"
            )
        header = _AUTH_HEADERS[self.config.provider]
        value = f"Bearer {token}" if header == "Authorization" else token
        return {header: value, "Content-Type": "application/octet-stream"}

    def predict(self, subject_id: str, image_bytes: bytes) -> Prediction:
        headers = self._headers()
        retries = 0
        while True:
            started = self._clock()
            try:
                response = self._client.post(
                    self.config.endpoint, content=image_bytes, headers=headers
                )
            except httpx.TimeoutException as exc:
                raise RemoteTimeout(str(exc)) from None
            latency_ms = (self._clock() - started) * 1000.0
            status = response.status_code
            if status in (401, 403):
                raise AuthError(f"provider rejected credentials with status {status}")
            if status == 429 or status >= 500:
                if retries >= self.config.retry_budget:
                    if status == 429:
                        raise RateLimited(retries)
                    raise ProtocolError(status, _digest(response.content))
                self._sleep(self.config.backoff_base_s * (2.0**retries))
                retries += 1
                continue
            if status != 200:
                raise ProtocolError(status, _digest(response.content))
            self.last_retries = retries
            point, low, high = _PARSERS[self.config.provider](response.content)
            return Prediction(
                subject_id=subject_id,
                estimator_id=self.config.estimator_id,
                point=point,
                low=low,
                high=high,
                latency_ms=latency_ms,
                raw_digest=_digest(response.content),
            )


def remote_predict(
    config: RemoteConfig, image_bytes: bytes, subject_id: str = "adhoc"
) -> Prediction:
    """One-shot convenience wrapper around a throwaway client."""
    client = RemoteClient(config)
    try:
        return client.predict(subject_id, image_bytes)
    finally:
        client.close()


class RemoteAdapter(EstimatorAdapter):
    """Feeds manifest image files to a remote client during harvest."""

    def __init__(self, client: RemoteClient, image_root: str):
        self.estimator_id = client.config.estimator_id
        self.returns_range = client.config.provider == "aws"
        self.client = client
        self.image_root = Path(image_root)

    def predict(self, record: SubjectRecord) -> Prediction:
        image_bytes = (self.image_root / record.image_ref).read_bytes()
        return self.client.predict(record.subject_id, image_bytes)
