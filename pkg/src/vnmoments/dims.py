from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True, order=True)
class Dims:
    """Subsystem dimensions with the standing assumption 1 <= m <= n."""

    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError(f"{name} must be an integer, got {v!r}")
        if not 1 <= self.m <= self.n:
            raise DomainError(f"dimensions must satisfy 1 <= m <= n, got m={self.m}, n={self.n}")

    @property
    def mn(self) -> int:
        return self.m * self.n

    @property
    def alpha(self) -> int:
        """Laguerre weight exponent n - m."""
        return self.n - self.m


def as_dims(d, n=None) -> Dims:
    if isinstance(d, Dims):
        return d
    if n is not None:
        return Dims(d, n)
    m, n = d
    return Dims(m, n)
