"""Scoped multiplication counting.

A :class:`CostCounter` is only active inside a ``with counting() as c:``
block and only for the current thread/context, so concurrent evaluations
never share a tally.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass

_active: ContextVar["CostCounter | None"] = ContextVar("fretchet_counter", default=None)


@dataclass
class CostCounter:
    scalar_mults: int = 0


@contextmanager
def counting():
    counter = CostCounter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)


def tally(n=1):
    counter = _active.get()
    if counter is not None:
        counter.scalar_mults += n


def coeff_mul(a, b):
    """Multiply two tensor-term coefficients.

    A factor that is exactly 1.0 is structural (bra/ket/tensor constructors
    emit it) and costs nothing; every other product counts once, zeros
    included.
    """
    if a == 1.0:
        return b
    if b == 1.0:
        return a
    tally()
    return a * b
