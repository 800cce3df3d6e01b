"""Global chart configuration, basis index sets and truncation windows.

Three Hilbert spaces appear throughout the package:

* ``l2(N)`` with basis ``e_n`` -- the irreducible representation space of the
  quantum disc, truncated to ``0 <= n < dim``;
* ``L2(D_q)`` with basis ``e_{nk}`` -- truncated to ``n < n_max``, ``k < k_max``;
* ``L2(D_q) (x) L2(S^1)`` with basis ``e_{nkl}`` -- additionally
  ``-l_max <= l <= l_max``.

Flat coordinates are row-major in ``(n, k, l)`` with ``l`` offset by ``l_max``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple

import mpmath

__all__ = [
    "ChartParams",
    "BasisIndex",
    "EtaIndex",
    "Field",
    "enumerate_disc_basis",
    "enumerate_chart_basis",
    "disc_flat",
    "chart_flat",
    "circle_flat",
    "eta_to_e",
    "e_to_eta",
    "interior_domain",
    "interior_disc_domain",
    "interior_line_domain",
    "chart_columns",
    "spectrum_index",
]


class Field:
    """Scalar arithmetic used to build operator coefficients.

    ``dps=None`` gives Python ``complex``; an integer gives mpmath numbers with
    that many decimal digits.  Every builder goes through one of these so the
    same code produces double or extended precision operators.
    """

    def __init__(self, dps: int | None = None):
        self.dps = dps
        if dps is None:
            self.ctx = None
        else:
            self.ctx = mpmath.MPContext()
            self.ctx.dps = dps

    @property
    def extended(self) -> bool:
        return self.ctx is not None

    def real(self, x):
        return float(x) if self.ctx is None else self.ctx.mpf(x)

    def scalar(self, x):
        if self.ctx is None:
            return complex(x)
        if isinstance(x, complex):
            return self.ctx.mpc(x.real, x.imag)
        return self.ctx.mpc(x)

    def sqrt(self, x):
        return math.sqrt(x) if self.ctx is None else self.ctx.sqrt(x)

    def power(self, base, exponent):
        if self.ctx is None:
            return float(base) ** exponent
        return self.ctx.power(self.ctx.mpf(base), exponent)

    def weight(self, base, alpha, t):
        """``base**(alpha*t)``.

        In extended precision ``base**alpha`` is formed first so that
        ``alpha*t`` is never rounded to a double; products of weights then
        agree to the working precision.
        """
        if self.ctx is None:
            return float(base) ** (alpha * t)
        return self.ctx.power(self.ctx.power(self.ctx.mpf(base), self.ctx.mpf(alpha)), t)

    def __repr__(self) -> str:
        return f"Field(dps={self.dps})"


@lru_cache(maxsize=None)
def _field(dps: int | None) -> Field:
    return Field(dps)


@dataclass(frozen=True)
class ChartParams:
    """Deformation parameter, weight exponent and truncation window.

    Parameters
    ----------
    q : float
        Deformation parameter, ``0 < q < 1``.
    alpha : float
        Exponent of the weight ``y**alpha`` in the integral, ``alpha > 0``.
    n_max, k_max : int
        Sizes of the opposite index ``n`` and the disc index ``k`` windows.
    l_max : int
        Circle index window ``-l_max <= l <= l_max``.
    tol : float
        Relative tolerance used by the audits.
    dps : int or None
        Decimal digits for extended-precision coefficients; ``None`` means
        IEEE double.
    """

    q: float = 0.5
    alpha: float = 1.0
    n_max: int = 16
    k_max: int = 16
    l_max: int = 4
    tol: float = 1e-12
    dps: int | None = None

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.n_max < 1 or self.k_max < 1:
            raise ValueError("n_max and k_max must be at least 1")
        if self.l_max < 1:
            raise ValueError("l_max must be at least 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.dps is not None and self.dps < 16:
            raise ValueError("dps below double precision is not supported")

    @cached_property
    def field(self) -> Field:
        return _field(self.dps)

    @property
    def n_disc(self) -> int:
        return self.n_max * self.k_max

    @property
    def n_circle(self) -> int:
        return 2 * self.l_max + 1

    @property
    def n_chart(self) -> int:
        return self.n_disc * self.n_circle

    @property
    def m_max(self) -> int:
        """Default number of spectral samples (window plus a shift headroom of 8)."""
        return max(self.n_max, self.k_max) + 8

    def with_precision(self, dps: int | None) -> ChartParams:
        return replace(self, dps=dps)

    def replace(self, **changes) -> ChartParams:
        return replace(self, **changes)


class BasisIndex(NamedTuple):
    """Index ``(n, k, l)`` of the chart basis vector ``e_{nkl}``."""

    n: int
    k: int
    l: int = 0


class EtaIndex(NamedTuple):
    """Index ``(n, k)`` of ``eta_{nk}``; admissible when ``k >= -n``."""

    n: int
    k: int

    @property
    def admissible(self) -> bool:
        return self.n >= 0 and self.k >= -self.n


def enumerate_disc_basis(params: ChartParams) -> list[tuple[int, int]]:
    """All ``(n, k)`` of the window in row-major order.

    The position in the returned list is the flat coordinate used by every
    operator on ``L2(D_q)``.
    """
    return [(n, k) for n in range(params.n_max) for k in range(params.k_max)]


def enumerate_chart_basis(params: ChartParams) -> list[BasisIndex]:
    return [
        BasisIndex(n, k, l)
        for n in range(params.n_max)
        for k in range(params.k_max)
        for l in range(-params.l_max, params.l_max + 1)
    ]


def disc_flat(n: int, k: int, params: ChartParams) -> int | None:
    """Flat coordinate of ``e_{nk}``, or ``None`` outside the window."""
    if 0 <= n < params.n_max and 0 <= k < params.k_max:
        return n * params.k_max + k
    return None


def circle_flat(l: int, params: ChartParams) -> int | None:
    if -params.l_max <= l <= params.l_max:
        return l + params.l_max
    return None


def chart_flat(n: int, k: int, l: int, params: ChartParams) -> int | None:
    d = disc_flat(n, k, params)
    c = circle_flat(l, params)
    if d is None or c is None:
        return None
    return d * params.n_circle + c


def eta_to_e(idx: EtaIndex) -> tuple[int, int]:
    """Map ``eta_{nk}`` to the index of ``e_{n,k+n}``."""
    n, k = idx
    if n < 0 or k < -n:
        raise ValueError(f"eta index {tuple(idx)} is not admissible (need k >= -n >= 0)")
    return n, k + n


def e_to_eta(n: int, k: int) -> EtaIndex:
    """Inverse of :func:`eta_to_e`: ``e_{nk} = eta_{n,k-n}``."""
    if n < 0 or k < 0:
        raise ValueError(f"e index ({n}, {k}) must be non-negative")
    return EtaIndex(n, k - n)


def interior_domain(
    shift_budget: tuple[int, int, int], params: ChartParams
) -> frozenset[BasisIndex]:
    """Chart indices that stay inside the window under any displacement
    bounded by ``shift_budget = (dn, dk, dl)``.

    On this set truncated operator words act exactly as their infinite
    counterparts.  An empty result means the window is too small.
    """
    dn, dk, dl = shift_budget
    if min(dn, dk, dl) < 0:
        raise ValueError("shift budget components must be non-negative")
    return frozenset(
        BasisIndex(n, k, l)
        for n in range(dn, params.n_max - dn)
        for k in range(dk, params.k_max - dk)
        for l in range(-params.l_max + dl, params.l_max - dl + 1)
    )


def interior_disc_domain(budget: tuple[int, int], params: ChartParams) -> list[int]:
    """Flat ``e_{nk}`` coordinates of the interior for a ``(dn, dk)`` budget."""
    dn, dk = budget
    if min(dn, dk) < 0:
        raise ValueError("shift budget components must be non-negative")
    return [
        disc_flat(n, k, params)
        for n in range(dn, params.n_max - dn)
        for k in range(dk, params.k_max - dk)
    ]


def interior_line_domain(budget: int, dim: int) -> list[int]:
    """Interior of a truncated ``l2(N)`` of size ``dim``.

    Only the upper edge is artificial on ``l2(N)``; the bottom edge is kept
    symmetric with :func:`interior_domain` for uniformity.
    """
    if budget < 0:
        raise ValueError("shift budget must be non-negative")
    return list(range(budget, dim - budget))


def chart_columns(domain: Iterable[BasisIndex], params: ChartParams) -> list[int]:
    return sorted(chart_flat(i.n, i.k, i.l, params) for i in domain)


def spectrum_index(point: float, params: ChartParams) -> int | None:
    """Return ``m`` with ``point == q**m`` (relative tolerance ``params.tol``),
    ``-1`` for the accumulation point 0 and ``None`` outside ``spec(y)``."""
    if point == 0.0:
        return -1
    if point < 0.0 or point > 1.0 + params.tol:
        return None
    m = round(math.log(point) / math.log(params.q))
    if m < 0:
        return None
    if abs(math.log(point) - m * math.log(params.q)) <= params.tol * max(1.0, abs(m * math.log(params.q))):
        return m
    return None
