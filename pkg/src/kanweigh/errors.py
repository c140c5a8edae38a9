"""Exception types and enumeration-cap policy."""
from __future__ import annotations

import os

#: Default bound on raw enumeration spaces (candidate families, tuples, ...).
DEFAULT_MAX_CANDIDATES = 10_000_000

#: Default bound on the number of presheaves a closure run may accumulate.
DEFAULT_MAX_CLOSURE_ELEMENTS = 512


class KanweighError(Exception):
    """Base class for all library errors."""


class ValidationError(KanweighError):
    """An input document or constructed entity violates a law.

    ``violations`` lists one message per violated invariant, each naming the
    offending entry.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ShapeMismatchError(KanweighError):
    """Operands have incompatible sources/targets."""


class ResourceCapError(KanweighError):
    """A raw search space exceeds the configured cap.

    Maps to CLI exit code 2; the computation is refused, never truncated.
    """

    def __init__(self, cap_name: str, limit: int, required: int):
        self.cap_name = cap_name
        self.limit = limit
        self.required = required
        super().__init__(
            f"resource cap exceeded: {cap_name} needs {required} > limit {limit}"
        )


class InternalCheckError(KanweighError):
    """Two independent procedures disagreed: an implementation bug, never bad data."""


def resolve_cap(cap: int | None) -> int:
    """Effective enumeration cap: explicit value, else env override, else default."""
    if cap is not None:
        return cap
    env = os.environ.get("KANWEIGH_MAX_CANDIDATES")
    if env is not None:
        return int(env)
    return DEFAULT_MAX_CANDIDATES


def check_cap(cap_name: str, required: int, cap: int | None) -> None:
    limit = resolve_cap(cap)
    if required > limit:
        raise ResourceCapError(cap_name, limit, required)
