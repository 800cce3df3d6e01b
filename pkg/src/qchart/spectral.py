"""Functions on ``spec(y) = {q**m : m >= 0} U {0}``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .params import ChartParams, Field, spectrum_index

__all__ = ["SpectralFunction", "spectral_eval"]


@dataclass(frozen=True)
class SpectralFunction:
    """A bounded function on ``spec(y)`` stored by its samples.

    ``samples[m]`` is ``f(q**m)`` for ``0 <= m < len(samples)``.  The value at
    the accumulation point 0 is kept separately (``None`` when unknown), and so
    is the derivative there when the function is differentiable (``None``
    otherwise).  Values beyond the last sample are unknown; operations that
    would need them fail instead of extrapolating.
    """

    samples: tuple
    value_at_zero: complex | None = 0j
    derivative_at_zero: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_callable(
        cls,
        func: Callable,
        length: int,
        q: float,
        *,
        derivative_at_zero=None,
        field: Field | None = None,
    ) -> SpectralFunction:
        """Sample ``func`` at ``q**m`` for ``m < length`` and at 0."""
        field = field or Field()
        samples = tuple(field.scalar(func(field.power(q, m))) for m in range(length))
        value0 = field.scalar(func(field.real(0)))
        if derivative_at_zero is not None:
            derivative_at_zero = field.scalar(derivative_at_zero)
        return cls(samples, value0, derivative_at_zero)

    @classmethod
    def constant(cls, value, length: int, field: Field | None = None) -> SpectralFunction:
        field = field or Field()
        v = field.scalar(value)
        return cls((v,) * length, v, field.scalar(0))

    @classmethod
    def delta(cls, m: int, length: int, field: Field | None = None) -> SpectralFunction:
        """Indicator of the single spectral point ``q**m``."""
        field = field or Field()
        one, zero = field.scalar(1), field.scalar(0)
        return cls(tuple(one if j == m else zero for j in range(length)), zero, zero)

    # -- shape ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def differentiable(self) -> bool:
        return self.derivative_at_zero is not None

    @property
    def sup(self) -> float:
        """Largest sampled magnitude."""
        return max((abs(v) for v in self.samples), default=0.0)

    def truncate(self, length: int) -> SpectralFunction:
        return SpectralFunction(self.samples[:length], self.value_at_zero, self.derivative_at_zero)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: SpectralFunction) -> SpectralFunction:
        n = min(len(self), len(other))
        d = None
        if self.differentiable and other.differentiable:
            d = self.derivative_at_zero + other.derivative_at_zero
        return SpectralFunction(
            tuple(a + b for a, b in zip(self.samples[:n], other.samples[:n])),
            _opt(lambda a, b: a + b, self.value_at_zero, other.value_at_zero),
            d,
        )

    def __mul__(self, other: SpectralFunction) -> SpectralFunction:
        n = min(len(self), len(other))
        d = None
        if (self.differentiable and other.differentiable
                and self.value_at_zero is not None and other.value_at_zero is not None):
            d = (self.derivative_at_zero * other.value_at_zero
                 + self.value_at_zero * other.derivative_at_zero)
        return SpectralFunction(
            tuple(a * b for a, b in zip(self.samples[:n], other.samples[:n])),
            _opt(lambda a, b: a * b, self.value_at_zero, other.value_at_zero),
            d,
        )

    def scale(self, c) -> SpectralFunction:
        d = None if self.derivative_at_zero is None else c * self.derivative_at_zero
        v0 = None if self.value_at_zero is None else c * self.value_at_zero
        return SpectralFunction(tuple(c * v for v in self.samples), v0, d)

    def conj(self) -> SpectralFunction:
        d = None if self.derivative_at_zero is None else self.derivative_at_zero.conjugate()
        v0 = None if self.value_at_zero is None else self.value_at_zero.conjugate()
        return SpectralFunction(tuple(v.conjugate() for v in self.samples), v0, d)

    def shifted(self, b: int, q: float) -> SpectralFunction:
        """The function ``y -> f(q**b * y)`` for ``b >= 0``; consumes ``b`` samples."""
        if b < 0:
            raise ValueError("use padded() for negative shifts")
        if b >= len(self) and len(self) > 0:
            raise ValueError(f"cannot shift by {b}: only {len(self)} samples available")
        d = None if self.derivative_at_zero is None else (q ** b) * self.derivative_at_zero
        return SpectralFunction(self.samples[b:], self.value_at_zero, d)

    def padded(self, a: int, q: float) -> SpectralFunction:
        """The function ``G`` with ``G(q**j) = f(q**(j - a))`` for ``j >= a``
        and ``G(q**j) = 0`` for ``j < a``, i.e. ``s**a f(y) s*(**a)``."""
        if a < 0:
            raise ValueError("padding must be non-negative")
        if a == 0:
            return self
        zero = self.samples[0] * 0 if self.samples else 0j
        d = None if self.derivative_at_zero is None else (q ** -a) * self.derivative_at_zero
        return SpectralFunction((zero,) * a + self.samples, self.value_at_zero, d)

    def map_samples(self, func: Callable[[int, object], object], value_at_zero=None) -> SpectralFunction:
        """Apply ``func(m, value)`` to each sample; the derivative is dropped."""
        return SpectralFunction(
            tuple(func(m, v) for m, v in enumerate(self.samples)), value_at_zero, None
        )

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(abs(v) <= atol for v in self.samples)

    def close_to(self, other: SpectralFunction, rtol: float = 1e-12) -> bool:
        n = min(len(self), len(other))
        return all(
            abs(a - b) <= rtol * max(1.0, abs(a), abs(b))
            for a, b in zip(self.samples[:n], other.samples[:n])
        )


def spectral_eval(f: SpectralFunction, point: float, params: ChartParams):
    """Evaluate ``f`` at a point of ``spec(y)``.

    Raises ``ValueError`` when ``point`` is not ``q**m`` or 0 (within
    ``params.tol`` on a log scale) or when ``m`` lies beyond the samples.
    """
    m = spectrum_index(point, params)
    if m is None:
        raise ValueError(f"{point} is not a point of spec(y) for q={params.q}")
    if m == -1:
        if f.value_at_zero is None:
            raise ValueError("the value at 0 of this function is not known")
        return f.value_at_zero
    if m >= len(f):
        raise ValueError(f"q**{m} lies beyond the {len(f)} stored samples")
    return f.samples[m]


def _opt(op, a, b):
    return None if a is None or b is None else op(a, b)


def as_samples(values: Sequence, field: Field | None = None) -> tuple:
    field = field or Field()
    return tuple(field.scalar(v) for v in values)
