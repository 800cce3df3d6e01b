"""The weighted trace ``int^alpha``, its twist ``sigma^alpha`` and the inner product.

For an element in normal form only the diagonal band contributes::

    int^alpha(a) = (1-q) Tr(a y**alpha) = (1-q) sum_n g_0(q**n) q**(alpha n)

The series is truncated and every result carries a bound on the dropped tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

import numpy as np

from . import algebra, disc
from .calculus import sigma_matrix
from .algebra import DiscElement
from .params import ChartParams, EtaIndex, interior_disc_domain
from .report import ResidualReport
from .sparse import SparseOperator, adjoint, coefficient_error, relation_residual
from .spectral import SpectralFunction

__all__ = [
    "IntegralResult",
    "IdentityResidual",
    "integral_alpha",
    "integral_alpha_matrix",
    "jackson_integral",
    "sigma_alpha",
    "inner_product",
    "inner_product_result",
    "verify_twisted_trace",
    "verify_op_adjoint",
    "verify_op_adjoint_matrix",
    "gram_deviation",
    "verify_integration",
]


@dataclass(frozen=True)
class IntegralResult:
    """A truncated series value with a bound on the omitted tail."""

    value: complex
    tail_bound: float
    terms_used: int

    def __add__(self, other: IntegralResult) -> IntegralResult:
        return IntegralResult(self.value + other.value, self.tail_bound + other.tail_bound,
                              min(self.terms_used, other.terms_used))


@dataclass(frozen=True)
class IdentityResidual:
    """Difference of the two sides of an integral identity and the tails involved."""

    residual: float
    tail_bound: float

    def within(self, tol: float) -> bool:
        return self.residual <= self.tail_bound + tol


def _tail(sup: float, params: ChartParams, terms: int) -> float:
    q, a = params.q, params.alpha
    return sup * (1 - q) * q ** (a * terms) / (1 - q ** a)


def integral_alpha(elem: DiscElement, params: ChartParams, terms: int | None = None) -> IntegralResult:
    """``(1-q) sum_{n < terms} g_0(q**n) q**(alpha n)``.

    ``terms`` defaults to all stored samples of ``g_0``.  The tail bound is
    ``max|g_0| (1-q) q**(alpha terms)/(1-q**alpha)`` with the maximum taken
    over the stored samples.
    """
    g0 = elem.bands.get(0)
    if g0 is None:
        return IntegralResult(0j, 0.0, 0 if terms is None else terms)
    used = len(g0) if terms is None else min(terms, len(g0))
    fld = params.field
    total = fld.scalar(0)
    for n in range(used):
        total += g0.samples[n] * fld.weight(params.q, params.alpha, n)
    value = (1 - fld.real(params.q)) * total
    return IntegralResult(complex(value), _tail(float(g0.sup), params, used), used)


def integral_alpha_matrix(op: SparseOperator, params: ChartParams) -> IntegralResult:
    """``(1-q) Tr(op y**alpha)`` for an operator on truncated ``l2(N)``."""
    if op.domain_dim != op.codomain_dim:
        raise ValueError("the trace needs a square operator")
    fld = params.field
    total = fld.scalar(0)
    sup = 0.0
    for j in range(op.domain_dim):
        v = op.column(j).get(j, 0)
        sup = max(sup, float(abs(v)))
        total += v * fld.weight(params.q, params.alpha, j)
    value = (1 - fld.real(params.q)) * total
    return IntegralResult(complex(value), _tail(sup, params, op.domain_dim), op.domain_dim)


def jackson_integral(func: Callable[[float], complex], q: float, terms: int) -> complex:
    """``int_0^1 f d_q x = (1-q) sum_n q**n f(q**n)``, truncated to ``terms``."""
    return (1 - q) * sum(q ** n * func(q ** n) for n in range(terms))


def sigma_alpha(elem: DiscElement, exponent_sign: Literal["+", "-"] | int, params: ChartParams) -> DiscElement:
    """``sigma^{+alpha}`` or ``sigma^{-alpha}``: band ``m`` scaled by ``q**(-/+ alpha m)``."""
    if exponent_sign in ("+", 1):
        return algebra.sigma(elem, params.alpha, params)
    if exponent_sign in ("-", -1):
        return algebra.sigma(elem, -params.alpha, params)
    raise ValueError(f"exponent sign must be '+' or '-', got {exponent_sign!r}")


def inner_product_result(f: DiscElement, g: DiscElement, params: ChartParams,
                         terms: int | None = None) -> IntegralResult:
    return integral_alpha(algebra.normal_form_product(algebra.star(f), g, params), params, terms)


def inner_product(f: DiscElement, g: DiscElement, params: ChartParams, terms: int | None = None) -> complex:
    """``<f, g> = int^alpha(f* g)``, antilinear in ``f``."""
    return inner_product_result(f, g, params, terms).value


def verify_twisted_trace(g: DiscElement, h: DiscElement, params: ChartParams) -> IdentityResidual:
    """``|int(g h) - int(sigma^alpha(h) g)|`` together with both tail bounds."""
    lhs = integral_alpha(algebra.normal_form_product(g, h, params), params)
    rhs = integral_alpha(algebra.normal_form_product(sigma_alpha(h, "+", params), g, params), params)
    return IdentityResidual(abs(lhs.value - rhs.value), lhs.tail_bound + rhs.tail_bound)


def _eta_grid(params: ChartParams, size: int) -> list[DiscElement]:
    return [
        algebra.eta_element(EtaIndex(n, k), params)
        for n in range(size)
        for k in range(-n, size)
    ]


def verify_op_adjoint(x: str | DiscElement, params: ChartParams,
                      elements: Iterable[DiscElement] | None = None) -> IdentityResidual:
    """``<f x, g> = <f, g sigma^{-alpha}(x*)>`` over pairs from ``elements``.

    Right multiplication by ``x`` is ``x^op``, so this is the adjoint rule
    ``(x^op)* = sigma^{-alpha}(x*)^op``.  ``x`` is a generator name or an
    element; ``elements`` defaults to a small grid of ``eta_{nk}``.
    """
    xe = algebra.encode_generator(x, params) if isinstance(x, str) else x
    partner = sigma_alpha(algebra.star(xe), "-", params)
    pool = list(elements) if elements is not None else _eta_grid(params, 3)
    worst = 0.0
    tail = 0.0
    for f in pool:
        fx = algebra.normal_form_product(f, xe, params)
        for g in pool:
            lhs = inner_product_result(fx, g, params)
            rhs = inner_product_result(f, algebra.normal_form_product(g, partner, params), params)
            worst = max(worst, abs(lhs.value - rhs.value))
            tail = max(tail, lhs.tail_bound + rhs.tail_bound)
    return IdentityResidual(worst, tail)


def verify_op_adjoint_matrix(params: ChartParams, tol: float | None = None) -> ResidualReport:
    """``(z^op)* = q**-alpha z*^op`` and ``(y^op)* = y^op`` on ``e_{nk}``."""
    tol = params.tol if tol is None else tol
    domain = interior_disc_domain((1, 0), params)
    fld = params.field
    report = ResidualReport()
    zo, zso, yo = disc.build_z_op(params), disc.build_zstar_op(params), disc.build_y_op(params)
    w = fld.weight(params.q, params.alpha, -1)
    report.add("(z^op)* = q^-alpha z*^op", "Eq.21", len(domain),
               relation_residual(adjoint(zo), zso.scale(w), domain), tol)
    report.add("(z*^op)* = q^alpha z^op", "Eq.21", len(domain),
               relation_residual(adjoint(zso), zo.scale(1 / w), domain), tol)
    report.add("(y^op)* = y^op", "Eq.21", len(domain), relation_residual(adjoint(yo), yo, domain), tol)
    return report


def gram_deviation(params: ChartParams) -> tuple[float, float]:
    """Largest ``|<eta_i, eta_j> - delta_ij|`` over all admissible ``eta`` in the
    window, and the largest tail bound met on the way.

    Samples are stored far enough past the window that the tail bound of each
    product drops to about ``1e-12``.
    """
    idx = [EtaIndex(n, k - n) for n in range(params.n_max) for k in range(params.k_max)]
    q, a = params.q, params.alpha
    extra = math.ceil(math.log(1e-12 * (1 - q ** a)) / (a * math.log(q)))
    length = 2 * max(params.n_max, params.k_max) + max(8, extra)
    elems = {i: algebra.eta_element(i, params, length) for i in idx}
    stars = {i: algebra.star(e) for i, e in elems.items()}
    worst = tail = 0.0
    for i in idx:
        for j in idx:
            r = integral_alpha(algebra.normal_form_product(stars[i], elems[j], params), params)
            worst = max(worst, abs(r.value - (1.0 if i == j else 0.0)))
            tail = max(tail, r.tail_bound)
    return worst, tail


def verify_integration(params: ChartParams, tol: float | None = None, samples: int = 20,
                       seed: int = 11) -> ResidualReport:
    """Closed forms, orthonormality and the twisted identities of ``int^alpha``.

    Checks involving truncated series pass when the residual is at most
    ``tol`` plus the reported tail bounds.
    """
    tol = params.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    fld = params.field
    q, a = params.q, params.alpha
    report = ResidualReport()

    worst, tail = gram_deviation(params)
    report.add("<eta_i, eta_j> = delta_ij on the window", "Eq.28", params.n_disc ** 2, worst, tol + tail)

    worst = tail = 0.0
    size = min(6, params.n_max)
    idx = [(n, k) for n in range(size) for k in range(-n, size)]
    raw = {}
    for n, k in idx:
        e = algebra.eta_element((n, k), params)
        raw[(n, k)] = e.scale(fld.sqrt(1 - fld.real(q)) * fld.weight(q, a, n / 2))
    for i in idx:
        for j in idx:
            r = inner_product_result(raw[i], raw[j], params)
            want = (1 - q) * q ** (a * i[0]) if i == j else 0.0
            worst = max(worst, abs(r.value - want))
            tail = max(tail, r.tail_bound)
    report.add("<s^#k delta_n, s^#l delta_m> = (1-q) q^(alpha n) delta", "Eq.28", len(idx) ** 2,
               worst, tol + tail)

    one = algebra.encode_generator("1", params)
    r = integral_alpha(one, params)
    report.add("int 1 = (1-q)/(1-q^alpha)", "Eq.17", 1, abs(r.value - (1 - q) / (1 - q ** a)), tol + r.tail_bound)

    worst = 0.0
    for n in range(params.n_max):
        r = integral_alpha(algebra.encode_generator("delta", params, n), params)
        worst = max(worst, abs(r.value - (1 - q) * q ** (a * n)))
    report.add("int delta_n = (1-q) q^(alpha n)", "Eq.17", params.n_max, worst, tol)

    worst = 0.0
    for _ in range(samples):
        shifted = algebra.random_element(rng, params, (-2, -1, 1, 2))
        worst = max(worst, abs(integral_alpha(shifted, params).value))
    report.add("shift bands integrate to 0", "Eq.17", samples, worst, 0.0)

    worst = tail = 0.0
    dim = params.n_max
    for _ in range(samples):
        elem = algebra.random_element(rng, params)
        sym = integral_alpha(elem, params, dim)
        mat = integral_alpha_matrix(algebra.to_matrix(elem, params, dim), params)
        worst = max(worst, abs(sym.value - mat.value))
        tail = max(tail, sym.tail_bound + mat.tail_bound)
    report.add("(1-q) Tr(a y^alpha) = int a", "Eq.16", samples, worst, tol + tail)

    worst = 0.0
    for _ in range(samples):
        coeffs = rng.uniform(-1.0, 1.0, 4)
        poly = np.polynomial.Polynomial(coeffs)
        g0 = SpectralFunction.from_callable(poly, params.m_max, q, field=fld)
        jack = jackson_integral(lambda x: poly(x) * x ** (a - 1), q, params.m_max)
        worst = max(worst, abs(jack - integral_alpha(DiscElement({0: g0}), params).value))
    report.add("int g(y) = Jackson int_0^1 g(y) y^(alpha-1) d_q y", "Sec.4", samples, worst, tol)

    inv = star_twist = mult = 0.0
    for _ in range(samples):
        g = algebra.random_element(rng, params, (-1, 0, 1))
        h = algebra.random_element(rng, params, (-1, 0, 1))
        back = sigma_alpha(sigma_alpha(g, "+", params), "-", params)
        inv = max(inv, _element_error(back, g))
        lhs = algebra.star(sigma_alpha(h, "+", params))
        rhs = sigma_alpha(algebra.star(h), "-", params)
        star_twist = max(star_twist, _element_error(lhs, rhs))
        lhs = sigma_alpha(algebra.normal_form_product(g, h, params), "+", params)
        rhs = algebra.normal_form_product(sigma_alpha(g, "+", params), sigma_alpha(h, "+", params), params)
        mult = max(mult, _element_error(lhs, rhs))
    report.add("sigma^-alpha sigma^alpha = id", "Sec.4", samples, inv, tol)
    report.add("sigma^alpha(h)* = sigma^-alpha(h*)", "Sec.4", samples, star_twist, tol)
    report.add("sigma^alpha(gh) = sigma^alpha(g) sigma^alpha(h)", "Eq.18", samples, mult, tol)

    worst = 0.0
    for _ in range(samples):
        elem = algebra.random_element(rng, params, (-1, 0, 1))
        mdim = max(params.n_max, params.k_max)
        sym = algebra.to_matrix(algebra.sigma(elem, 2, params), params, mdim)
        mat = sigma_matrix(algebra.to_matrix(elem, params, mdim), 2, params, "line")
        worst = max(worst, coefficient_error({(r, j): v for r, j, v in sym.entries()},
                                             {(r, j): v for r, j, v in mat.entries()}))
    report.add("sigma^2 by bands = y^-2 (.) y^2 on matrices", "Eq.18", samples, worst, tol)

    # compactly supported elements satisfy the identity up to rounding; fully
    # random ones only up to their unsampled tails
    support = params.m_max - 4
    worst = 0.0
    for _ in range(samples):
        g = algebra.random_element(rng, params, support=support)
        h = algebra.random_element(rng, params, support=support)
        worst = max(worst, verify_twisted_trace(g, h, params).residual)
    report.add(f"int gh = int sigma^alpha(h) g, {samples} supported pairs", "Eq.19", samples, worst, tol)
    worst = tail = 0.0
    for _ in range(samples):
        g = algebra.random_element(rng, params)
        h = algebra.random_element(rng, params)
        res = verify_twisted_trace(g, h, params)
        worst = max(worst, res.residual)
        tail = max(tail, res.tail_bound)
    report.add(f"int gh = int sigma^alpha(h) g, {samples} random pairs", "Eq.19", samples,
               worst, tol + tail)

    pool = [algebra.random_element(rng, params, (-1, 0, 1), support=support) for _ in range(samples // 4)]
    for name in ("z", "z*", "y"):
        grid = verify_op_adjoint(name, params)
        rand = verify_op_adjoint(name, params, pool)
        report.add(f"<f {name}, g> = <f, g sigma^-alpha(({name})*)>", "Eq.21",
                   samples, max(grid.residual, rand.residual),
                   tol + max(grid.tail_bound, rand.tail_bound))
    report.extend(verify_op_adjoint_matrix(params, tol))

    worst_sym = 0.0
    smallest = float("inf")
    for _ in range(samples):
        f = algebra.random_element(rng, params, (-1, 0, 1))
        g = algebra.random_element(rng, params, (-1, 0, 1))
        worst_sym = max(worst_sym, abs(inner_product(f, g, params) - inner_product(g, f, params).conjugate()))
        smallest = min(smallest, inner_product(f, f, params).real)
    report.add("<f, g> = conj <g, f>", "Eq.20", samples, worst_sym, tol)
    report.add("<f, f> > 0 on nonzero elements", "Sec.4", samples, 0.0 if smallest > 0 else 1.0, tol)
    return report


def _element_error(a: DiscElement, b: DiscElement) -> float:
    worst = 0.0
    for m in a.bands.keys() | b.bands.keys():
        ga, gb = a.bands.get(m), b.bands.get(m)
        if ga is None or gb is None:
            g = ga if gb is None else gb
            worst = max(worst, float(g.sup))
            continue
        for x, y in zip(ga.samples, gb.samples):
            worst = max(worst, float(abs(x - y)) / max(1.0, float(abs(x))))
    return worst
