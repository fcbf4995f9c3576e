from __future__ import annotations

from numbers import Integral


def check_natural(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < 0:
        raise ValueError(f"{name} must be a natural number, got {value!r}")
    return int(value)


def check_positive(value, name: str) -> int:
    value = check_natural(value, name)
    if value == 0:
        raise ValueError(f"{name} must be positive")
    return value


def check_bit(value, name: str) -> int:
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")
    return int(value)


def check_fitted(est, attr: str) -> None:
    if not hasattr(est, attr):
        raise AttributeError(f"{type(est).__name__} is not fitted yet; call fit() first")
