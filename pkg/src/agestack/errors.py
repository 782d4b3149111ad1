"""Exception taxonomy shared by the core library, service, and CLI.

The service maps these onto HTTP statuses and the CLI onto exit codes:
``UsageError`` -> 400 / exit 1, ``DataError`` -> 422 / exit 2,
``RemoteBudgetExceeded`` -> 502 / exit 3.
"""

from __future__ import annotations


class AgeStackError(Exception):
    """Base class for every error raised by this package."""


class UsageError(AgeStackError):
    """Invalid parameters or flags (caller mistake, not bad data)."""


class InvalidHyperparameter(UsageError):
    pass


class InvalidProfile(UsageError):
    """Bias profile violates its structural invariants."""


class DataError(AgeStackError):
    """Input data violates a schema or a dataset invariant."""


class OutOfRange(DataError):
    """Age outside the range an operation is defined on."""


class EmptyInput(DataError):
    pass


class UnderfilledAge(DataError):
    """An age bucket has fewer candidates than the requested quota."""

    def __init__(self, age: int, available: int, quota: int):
        super().__init__(
            f"age {age}: {available} candidate(s) available, quota {quota}"
        )
        self.age = age
        self.available = available
        self.quota = quota


class SchemaError(DataError):
    """Malformed CSV cell or structural schema violation."""

    def __init__(self, line: int | None, column: str | None, reason: str):
        loc = f"line {line}" if line is not None else "file"
        if column:
            loc += f", column {column!r}"
        super().__init__(f"{loc}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class DuplicateSubjectId(DataError):
    def __init__(self, subject_id: str):
        super().__init__(f"duplicate subject_id {subject_id!r}")
        self.subject_id = subject_id


class UnbalancedManifest(DataError):
    """Record set does not hold an equal per-age count over its range."""


class CoverageMismatch(DataError):
    """An estimator does not cover the full subject set."""

    def __init__(self, estimator_id: str, missing_count: int):
        super().__init__(
            f"estimator {estimator_id!r} is missing {missing_count} subject(s)"
        )
        self.estimator_id = estimator_id
        self.missing_count = missing_count


class UnknownEstimator(DataError):
    def __init__(self, estimator_id: str):
        super().__init__(f"no predictions for estimator {estimator_id!r}")
        self.estimator_id = estimator_id


class MissingSubject(DataError):
    def __init__(self, subject_id: str, estimator_id: str = ""):
        detail = f" in {estimator_id!r}" if estimator_id else ""
        super().__init__(f"no recorded prediction for {subject_id!r}{detail}")
        self.subject_id = subject_id
        self.estimator_id = estimator_id


class TooFewSubjects(DataError):
    pass


class DimensionMismatch(DataError):
    """Matrix/vector shapes disagree with each other or with a model."""


class NonFiniteLoss(AgeStackError):
    """Divergence guard tripped during gradient descent."""


class RemoteError(AgeStackError):
    """Base class for remote estimator call failures."""


class AuthError(RemoteError):
    pass


class RateLimited(RemoteError):
    def __init__(self, retries: int):
        super().__init__(f"still rate-limited after {retries} retries")
        self.retries = retries


class NoFaceDetected(RemoteError):
    pass


class ProtocolError(RemoteError):
    def __init__(self, status: int, body_digest: str):
        super().__init__(f"unexpected response status {status} (body sha256 {body_digest[:12]}...)")
        self.status = status
        self.body_digest = body_digest


class RemoteTimeout(RemoteError):
    pass


class RemoteBudgetExceeded(RemoteError):
    """Harvest accumulated more per-subject failures than its budget."""

    def __init__(self, failures: int, budget: int):
        super().__init__(f"{failures} failures exceeded the budget of {budget}")
        self.failures = failures
        self.budget = budget
