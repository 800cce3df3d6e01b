"""Normal-form arithmetic for bounded functions on the quantum disc.

An element is a finite sum ``sum_{m>=0} s**m g_m(y) + sum_{m>0} g_{-m}(y) s***m``
and is stored as a mapping from the band index ``m`` to the spectral function
``g_m``.  Products are renormalized with the pull-through rules
``f(y) s = s f(qy)``, ``s* f(y) = f(qy) s*``, ``s* s = 1`` and
``s**a f(y) s***a = (f shifted down by a, zero below)``.

Band functions are sampled, so a pull-through ``f(q**b y)`` consumes ``b``
samples of headroom.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from .params import ChartParams, EtaIndex, Field
from .report import ResidualReport
from .sparse import SparseOperator, adjoint, coefficient_error
from .spectral import SpectralFunction

__all__ = [
    "DiscElement",
    "normal_form_product",
    "star",
    "encode_generator",
    "eta_element",
    "monomial",
    "to_matrix",
    "from_matrix",
    "basis_expand",
    "reconstruct",
    "sigma",
    "disc_coefficients",
    "matrix_disc_coefficients",
    "disc_vector",
    "random_element",
    "verify_algebra",
]


@dataclass(frozen=True)
class DiscElement:
    bands: Mapping[int, SpectralFunction] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bands", dict(sorted(self.bands.items())))

    @classmethod
    def band(cls, m: int, g: SpectralFunction) -> DiscElement:
        return cls({m: g})

    @classmethod
    def scalar(cls, value, length: int, fld: Field | None = None) -> DiscElement:
        return cls({0: SpectralFunction.constant(value, length, fld)})

    @property
    def differentiable(self) -> bool:
        """Whether every band function carries a derivative at 0."""
        return all(g.differentiable for g in self.bands.values())

    @property
    def min_length(self) -> int:
        return min((len(g) for g in self.bands.values()), default=0)

    def __add__(self, other: DiscElement) -> DiscElement:
        out = dict(self.bands)
        for m, g in other.bands.items():
            out[m] = out[m] + g if m in out else g
        return DiscElement(out)

    def __sub__(self, other: DiscElement) -> DiscElement:
        return self + other.scale(-1)

    def scale(self, c) -> DiscElement:
        return DiscElement({m: g.scale(c) for m, g in self.bands.items()})

    def truncate(self, length: int) -> DiscElement:
        return DiscElement({m: g.truncate(length) for m, g in self.bands.items()})

    def close_to(self, other: DiscElement, rtol: float = 1e-12) -> bool:
        for m in self.bands.keys() | other.bands.keys():
            a, b = self.bands.get(m), other.bands.get(m)
            if a is None:
                a, b = b, a
            if b is None:
                if not a.is_zero(rtol):
                    return False
            elif not a.close_to(b, rtol):
                return False
        return True


def _band_product(m1: int, g: SpectralFunction, m2: int, h: SpectralFunction, q: float):
    """Normal form of (band m1, g) * (band m2, h) as ``(band, function)``."""
    if m1 >= 0 and m2 >= 0:
        # s^a g s^b h = s^(a+b) g(q^b y) h
        return m1 + m2, g.shifted(m2, q) * h
    if m1 >= 0 and m2 < 0:
        # s^a (gh) s*^b
        a, b = m1, -m2
        prod = g * h
        if a >= b:
            return a - b, prod.padded(b, q)
        return -(b - a), prod.padded(a, q)
    a = -m1
    if m2 >= 0:
        # g s*^a s^b h
        b = m2
        if b >= a:
            return b - a, g.shifted(b - a, q) * h
        return -(a - b), g * h.shifted(a - b, q)
    # g s*^a h s*^b = g h(q^a y) s*^(a+b)
    return m1 + m2, g * h.shifted(a, q)


def normal_form_product(a: DiscElement, b: DiscElement, params: ChartParams) -> DiscElement:
    """Product ``a b`` reduced to normal form.

    Raises ``ValueError`` if a pull-through needs more samples than stored.
    """
    out: dict[int, SpectralFunction] = {}
    for m1, g in a.bands.items():
        for m2, h in b.bands.items():
            m, f = _band_product(m1, g, m2, h, params.q)
            out[m] = out[m] + f if m in out else f
    return DiscElement(out)


def star(a: DiscElement) -> DiscElement:
    """Adjoint: ``(s**m g)* = conj(g) s***m``, so band ``m`` maps to ``-m``."""
    return DiscElement({-m: g.conj() for m, g in a.bands.items()})


def sigma(a: DiscElement, alpha: float, params: ChartParams) -> DiscElement:
    """``y**(-alpha) a y**alpha``: band ``m`` scaled by ``q**(-alpha*m)``."""
    f = params.field
    return DiscElement({m: g.scale(f.weight(params.q, alpha, -m)) for m, g in a.bands.items()})


def encode_generator(name: str, params: ChartParams, index: int = 0, length: int | None = None) -> DiscElement:
    """One-band element for ``z``, ``z*``, ``y``, ``y2``, ``s``, ``s*``, ``1`` or ``delta``.

    ``delta`` is the projector ``delta_{q**index}(y)``.  ``z*`` is obtained from
    ``s* sqrt(1 - y**2)`` by pulling ``s*`` through, giving
    ``sqrt(1 - q**2 y**2) s*``.
    """
    length = params.m_max if length is None else length
    fld = params.field
    q = params.q
    qf = fld.real(q)

    def sample(func, d0):
        return SpectralFunction.from_callable(func, length, q, derivative_at_zero=d0, field=fld)

    if name == "z":
        return DiscElement.band(1, sample(lambda t: fld.sqrt(1 - qf * qf * t * t), 0))
    if name in ("z*", "zstar"):
        return DiscElement.band(-1, sample(lambda t: fld.sqrt(1 - qf * qf * t * t), 0))
    if name == "y":
        return DiscElement.band(0, sample(lambda t: t, 1))
    if name in ("y2", "y^2"):
        return DiscElement.band(0, sample(lambda t: t * t, 0))
    if name == "s":
        return DiscElement.band(1, SpectralFunction.constant(1, length, fld))
    if name in ("s*", "sstar"):
        return DiscElement.band(-1, SpectralFunction.constant(1, length, fld))
    if name == "1":
        return DiscElement.scalar(1, length, fld)
    if name == "delta":
        if index < 0:
            return DiscElement({})
        return DiscElement.band(0, SpectralFunction.delta(index, length, fld))
    raise ValueError(f"unknown generator {name!r}")


def _eta_norm(n: int, params: ChartParams):
    """``q**(-alpha n/2) / sqrt(1 - q)``."""
    f = params.field
    return f.weight(params.q, params.alpha, -n / 2) / f.sqrt(1 - f.real(params.q))


def eta_element(idx: EtaIndex | tuple[int, int], params: ChartParams, length: int | None = None) -> DiscElement:
    """The orthonormal basis element ``eta_{nk} = q**(-alpha n/2)/sqrt(1-q) s^{#k} delta_{q^n}(y)``.

    For ``k < 0`` the projector is pulled through, giving band ``k`` with
    coefficient ``delta_{q^(n+k)}``.  Inadmissible indices (``k < -n``) give
    the zero element.
    """
    n, k = idx
    if n < 0:
        raise ValueError(f"eta index n must be non-negative, got {n}")
    length = params.m_max if length is None else length
    if k < -n:
        return DiscElement({})
    c = _eta_norm(n, params)
    where = n if k >= 0 else n + k
    return DiscElement.band(k, SpectralFunction.delta(where, length, params.field).scale(c))


def monomial(n: int, k: int, params: ChartParams, length: int | None = None) -> DiscElement:
    """``z**n z***k`` in normal form."""
    out = encode_generator("1", params, length=length)
    z = encode_generator("z", params, length=length)
    zs = encode_generator("z*", params, length=length)
    for _ in range(k):
        out = normal_form_product(zs, out, params)
    for _ in range(n):
        out = normal_form_product(z, out, params)
    return out


def to_matrix(a: DiscElement, params: ChartParams, dim: int | None = None) -> SparseOperator:
    """Evaluate ``a`` on ``l2(N)`` truncated to ``dim``.

    Band ``m >= 0`` contributes ``(s**m g(y))[j+m, j] = g(q**j)``; band ``m < 0``
    contributes ``(g(y) s***|m|)[i, i+|m|] = g(q**i)``.
    """
    dim = max(params.n_max, params.k_max) if dim is None else dim
    columns: list[dict] = [dict() for _ in range(dim)]
    for m, g in a.bands.items():
        need = dim - abs(m)
        if need > len(g):
            raise ValueError(f"band {m} has {len(g)} samples, {need} needed for dim {dim}")
        for i in range(max(need, 0)):
            v = g.samples[i]
            row, col = (i + m, i) if m >= 0 else (i, i - m)
            columns[col][row] = columns[col].get(row, 0) + v
    return SparseOperator(dim, dim, [list(c.items()) for c in columns], "element")


def from_matrix(op: SparseOperator) -> DiscElement:
    """Read the bands off a matrix on ``l2(N)``; values at 0 are left unknown."""
    dim = op.domain_dim
    bands: dict[int, list] = {}
    for r, j, v in op.entries():
        m = r - j
        bands.setdefault(m, [0j] * (dim - abs(m)))
        bands[m][j if m >= 0 else r] = v
    return DiscElement({m: SpectralFunction(tuple(s), None, None) for m, s in bands.items()})


def basis_expand(a: DiscElement, params: ChartParams) -> dict[EtaIndex, object]:
    """Coefficients of ``a`` on the ``eta`` basis vectors of the window.

    ``s**k f(y) = sqrt(1-q) sum_n q**(alpha n/2) f(q**n) eta_{n,k}`` and
    ``f(y) s***k = sqrt(1-q) q**(alpha k/2) sum_n q**(alpha n/2) f(q**n) eta_{n+k,-k}``.
    The window is ``eta_{NK}`` with ``N < n_max`` and ``N + K < k_max``.
    """
    f = params.field
    root = f.sqrt(1 - f.real(params.q))
    out: dict[EtaIndex, object] = {}
    for m, g in a.bands.items():
        if m >= 0:
            top = min(params.n_max, params.k_max - m)
            for n in range(max(top, 0)):
                if n >= len(g):
                    raise ValueError(f"band {m} lacks sample {n} needed for the window")
                out[EtaIndex(n, m)] = root * f.weight(params.q, params.alpha, n / 2) * g.samples[n]
        else:
            k = -m
            top = min(params.n_max - k, params.k_max)
            for n in range(max(top, 0)):
                if n >= len(g):
                    raise ValueError(f"band {m} lacks sample {n} needed for the window")
                # q**(alpha k/2) q**(alpha n/2) as one power, so reconstruct divides by the same number
                w = root * f.weight(params.q, params.alpha, (n + k) / 2)
                out[EtaIndex(n + k, m)] = w * g.samples[n]
    return out


def reconstruct(coefficients: Mapping, params: ChartParams) -> DiscElement:
    """Inverse of :func:`basis_expand` on the window; values at 0 are unknown."""
    f = params.field
    root = f.sqrt(1 - f.real(params.q))
    per_band: dict[int, dict[int, object]] = {}
    for (N, K), c in coefficients.items():
        j = N if K >= 0 else N + K
        per_band.setdefault(K, {})[j] = c / (root * f.weight(params.q, params.alpha, N / 2))
    bands = {}
    for K, samples in per_band.items():
        length = max(samples) + 1
        bands[K] = SpectralFunction(tuple(samples.get(j, 0j) for j in range(length)), None, None)
    return DiscElement(bands)


def disc_coefficients(coefficients: Mapping[EtaIndex, object]) -> dict[tuple[int, int], object]:
    """Re-key ``eta`` coefficients by the ``e_{nk}`` index ``(n, k + n)``."""
    return {(n, k + n): c for (n, k), c in coefficients.items()}


def matrix_disc_coefficients(op: SparseOperator, params: ChartParams) -> dict[tuple[int, int], object]:
    """``e_{nk}`` coefficients of the element whose ``l2(N)`` matrix is ``op``.

    ``e_{nk}`` is the scaled matrix unit ``q**(-alpha n/2)/sqrt(1-q) E_{kn}``,
    so the coefficient is ``sqrt(1-q) q**(alpha n/2) op[k, n]``.
    """
    f = params.field
    root = f.sqrt(1 - f.real(params.q))
    out = {}
    for k, n, v in op.entries():
        if n < params.n_max and k < params.k_max:
            out[(n, k)] = root * f.weight(params.q, params.alpha, n / 2) * v
    return out


def disc_vector(coefficients: Mapping[tuple[int, int], object], params: ChartParams) -> list:
    """Dense coefficient list in the flat ``e_{nk}`` order."""
    vec = [params.field.scalar(0)] * params.n_disc
    for (n, k), c in coefficients.items():
        if n < params.n_max and k < params.k_max:
            vec[n * params.k_max + k] = c
    return vec


def random_element(rng, params: ChartParams, bands: tuple[int, ...] = (-2, -1, 0, 1, 2),
                   length: int | None = None, support: int | None = None) -> DiscElement:
    """Element with uniformly random complex samples on the given bands.

    ``rng`` is a ``numpy.random.Generator``.  Every band carries a value and
    a derivative at 0, so the result is flagged differentiable.  With
    ``support`` the band functions vanish from sample ``support`` on (and at
    0), so the element is known exactly rather than up to its unsampled tail.
    """
    length = params.m_max if length is None else length
    fld = params.field
    zero = fld.scalar(0)

    def draw(size):
        re = rng.uniform(-1.0, 1.0, size)
        im = rng.uniform(-1.0, 1.0, size)
        return [fld.scalar(complex(a, b)) for a, b in zip(re, im)]

    out = {}
    for m in bands:
        vals = draw(length + 2)
        if support is None:
            out[m] = SpectralFunction(tuple(vals[:length]), vals[length], vals[length + 1])
        else:
            kept = vals[:support] + [zero] * (length - support)
            out[m] = SpectralFunction(tuple(kept[:length]), zero, zero)
    return DiscElement(out)


def verify_algebra(params: ChartParams, tol: float | None = None, pairs: int = 50,
                   seed: int = 7) -> ResidualReport:
    """Symbolic/matrix consistency on random elements.

    Checks that evaluation on ``l2(N)`` turns products and stars into matrix
    products and adjoints on interior columns, that the ``eta`` expansion
    reconstructs every sample in the window, that monomials close to a single
    band, and that products and stars keep the differentiability flag.
    """
    tol = params.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    dim = max(params.n_max, params.k_max)
    cols = set(range(dim - 4))
    report = ResidualReport()

    def entries(op):
        return {(r, j): v for r, j, v in op.entries() if j in cols}

    worst_prod = worst_star = 0.0
    flags = True
    for _ in range(pairs):
        a = random_element(rng, params, (-1, 0, 1))
        b = random_element(rng, params, (-1, 0, 1))
        ab = normal_form_product(a, b, params)
        flags = flags and ab.differentiable and star(a).differentiable
        lhs = to_matrix(ab, params, dim)
        rhs = to_matrix(a, params, dim) @ to_matrix(b, params, dim)
        worst_prod = max(worst_prod, coefficient_error(entries(lhs), entries(rhs)))
        worst_star = max(worst_star, coefficient_error(
            entries(to_matrix(star(a), params, dim)), entries(adjoint(to_matrix(a, params, dim)))))
    report.add(f"to_matrix(ab) = to_matrix(a) to_matrix(b), {pairs} pairs", "Eq.14", pairs, worst_prod, tol)
    report.add(f"to_matrix(a*) = to_matrix(a)*, {pairs} elements", "Eq.14", pairs, worst_star, tol)
    report.add("products and stars keep derivatives at 0", "Eq.13", pairs, 0.0 if flags else 1.0, tol)

    worst = 0.0
    count = 0
    for _ in range(10):
        a = random_element(rng, params)
        back = reconstruct(basis_expand(a, params), params)
        for m, g in a.bands.items():
            h = back.bands[m]
            top = min(params.n_max - abs(m), params.k_max) if m < 0 else min(params.n_max, params.k_max - m)
            for j in range(top):
                count += 1
                x, y = g.samples[j], h.samples[j]
                worst = max(worst, float(abs(x - y)) / max(1.0, float(abs(x))))
    report.add("eta expansion reconstructs the window", "Prop.1", count, worst, tol)

    worst = 0.0
    count = 0
    for n in range(5):
        for k in range(5 - n):
            count += 1
            mono = monomial(n, k, params)
            bands = [m for m, g in mono.bands.items() if not g.is_zero()]
            if bands != [n - k]:
                worst = max(worst, 1.0)
            mat = to_matrix(mono, params, dim)
            z = to_matrix(encode_generator("z", params), params, dim + 8)
            zs = adjoint(z)
            word = to_matrix(encode_generator("1", params), params, dim + 8)
            for _ in range(k):
                word = zs @ word
            for _ in range(n):
                word = z @ word
            ref = {(r, j): v for r, j, v in word.entries() if r < dim and j < dim - 4}
            worst = max(worst, coefficient_error(entries(mat), ref))
    report.add("z^n z*^k is a single band of index n-k", "Eq.12", count, worst, tol)
    return report
