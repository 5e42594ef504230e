"""Global working precision and the certified-comparison failure policy.

Every enclosure in the package is computed at the working precision current
when the operation runs.  Comparisons that cannot be decided (an enclosure
straddling the threshold) raise :class:`PrecisionError`; callers that own a
recomputable pipeline retry through :func:`with_escalation`, which doubles
the precision up to :data:`MAX_PRECISION` and then gives up.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024


class PrecisionError(ArithmeticError):
    """A comparison or enclosure could not be certified at the working precision."""


def _initial() -> int:
    raw = os.environ.get("BADK_PRECISION", "")
    if not raw:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 53 or bits > MAX_PRECISION:
        raise ValueError(f"BADK_PRECISION={bits} outside [53, {MAX_PRECISION}]")
    return bits


_precision = _initial()


def get_precision() -> int:
    return _precision


def set_precision(bits: int) -> None:
    global _precision
    if bits < 53 or bits > MAX_PRECISION:
        raise ValueError(f"precision {bits} outside [53, {MAX_PRECISION}]")
    _precision = bits


@contextmanager
def working_precision(bits: int):
    """Temporarily run at a different working precision."""
    global _precision
    old = _precision
    set_precision(bits)
    try:
        yield bits
    finally:
        _precision = old


def with_escalation(fn, start: int | None = None):
    """Run ``fn(bits)`` retrying at doubled precision after PrecisionError.

    The callable must recompute everything it compares from scratch at the
    given precision; partially cached enclosures defeat the escalation.
    """
    bits = start if start is not None else get_precision()
    while True:
        try:
            with working_precision(bits):
                return fn(bits)
        except PrecisionError:
            if bits >= MAX_PRECISION:
                raise
            bits = min(2 * bits, MAX_PRECISION)
