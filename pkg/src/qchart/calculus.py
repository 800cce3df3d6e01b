"""The q-difference quotient and the partial derivatives on the quantum disc.

Three independent routes compute ``d/dz`` and ``d/dzbar``:

* commutators, ``d/dz f = (1-q**2)**-1 y**-2 [z*, f]`` and
  ``d/dzbar f = -(1-q**2)**-1 y**-2 [z, f]``;
* closed-form actions on the basis ``e_{nk}``;
* the monomial formulas for ``z**n z***k``.

``y**-2`` is always the exact diagonal ``q**(-2k)``, never a numerical inverse.
The commutators cancel terms of size one and rescale by ``q**(-2k)``, so
double precision loses about ``2k log10(1/q)`` digits on column ``k``;
the verification helpers run those routes with extended precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from . import algebra, disc
from .params import ChartParams, disc_flat, e_to_eta
from .report import ResidualReport
from .sparse import (
    SparseOperator,
    add,
    adjoint,
    apply,
    coefficient_error,
    diagonal,
    from_map,
    identity,
    kron,
    relation_residual,
)
from .spectral import SpectralFunction

__all__ = [
    "nabla_q2",
    "compose_square",
    "ddz_commutator",
    "ddzbar_commutator",
    "ddz_chart_commutator",
    "ddzbar_chart_commutator",
    "ddz_closed_form",
    "ddzbar_closed_form",
    "ddz_closed_form_chart",
    "ddzbar_closed_form_chart",
    "MonomialDerivative",
    "ddz_monomial",
    "ddzbar_monomial",
    "sigma_matrix",
    "verify_basis_routes",
    "verify_monomial_routes",
    "verify_leibniz",
    "verify_spectral_rule",
    "verify_star_compatibility",
    "verify_nabla",
    "verify_calculus",
]

Space = Literal["line", "disc", "chart"]

# Digits kept after the q**(-2k) amplification of the cancelling routes.
ORACLE_DIGITS = 30
NOISE_FLOOR = 1e-25


def oracle_dps(params: ChartParams) -> int:
    """Working precision for the cancelling routes on this window."""
    lost = 2 * (max(params.n_max, params.k_max) + 4) * math.log10(1 / params.q)
    return ORACLE_DIGITS + math.ceil(lost)


# -- q-difference quotient -----------------------------------------------

def nabla_q2(f: SpectralFunction, params: ChartParams) -> SpectralFunction:
    """``x -> (f(x) - f(q**2 x)) / (x - q**2 x)``.

    Sample ``m`` of ``f`` is ``f(q**m)``, so the result has two samples fewer.
    Its value at 0 is ``f'(0)`` when ``f`` carries a derivative there, and
    unknown otherwise (evaluating it at 0 then raises).
    """
    if len(f) < 3:
        raise ValueError("need at least three samples for a q**2 difference")
    fld = params.field
    q = params.q
    out = tuple(
        (f.samples[m] - f.samples[m + 2]) / (fld.power(q, m) - fld.power(q, m + 2))
        for m in range(len(f) - 2)
    )
    return SpectralFunction(out, f.derivative_at_zero, None)


def compose_square(f: SpectralFunction) -> SpectralFunction:
    """``y -> f(y**2)``: sample ``j`` is ``f(q**(2j))``."""
    d = f.derivative_at_zero * 0 if f.differentiable else None
    return SpectralFunction(f.samples[::2], f.value_at_zero, d)


# -- commutator route ----------------------------------------------------

def _space(f: SparseOperator, params: ChartParams, space: Space | None) -> Space:
    if space is not None:
        return space
    if f.shape == (params.n_chart, params.n_chart):
        return "chart"
    if f.shape == (params.n_disc, params.n_disc):
        return "disc"
    return "line"


def _left_generators(params: ChartParams, space: Space, dim: int):
    """``(z, z*, y**-2)`` acting on the given space."""
    if space == "line":
        return (disc.build_z_irreducible(params, dim), disc.build_zstar_irreducible(params, dim),
                disc.build_y_power_irreducible(-2, params, dim))
    z, zs, ym2 = disc.build_z(params), disc.build_zstar(params), disc.build_y_power_disc(-2, params)
    if space == "chart":
        one = identity(params.n_circle, params.field.scalar(1))
        z, zs, ym2 = kron(z, one), kron(zs, one), kron(ym2, one)
    return z, zs, ym2


def _commutator_derivative(f, params, space, which):
    space = _space(f, params, space)
    z, zs, ym2 = _left_generators(params, space, f.domain_dim)
    if z.shape != f.shape:
        raise ValueError(f"operator of shape {f.shape} does not act on the {space} space")
    fld = params.field
    c = 1 / (1 - fld.real(params.q) ** 2)
    g = zs if which == "z" else z
    sign = 1 if which == "z" else -1
    comm = add(g @ f, f @ g, (1, -1))
    return (ym2 @ comm).scale(fld.scalar(sign * c), f"d/d{which}({f.label})")


def ddz_commutator(f: SparseOperator, params: ChartParams, space: Space | None = None) -> SparseOperator:
    """``(1-q**2)**-1 y**-2 [z*, f]`` for a multiplication operator ``f``.

    ``space`` is ``"line"`` (``l2(N)``), ``"disc"`` (left multiplication on
    ``e_{nk}``) or ``"chart"`` (``e_{nkl}``); by default it is read off the
    shape.  Only interior columns are meaningful.
    """
    return _commutator_derivative(f, params, space, "z")


def ddzbar_commutator(f: SparseOperator, params: ChartParams, space: Space | None = None) -> SparseOperator:
    """``-(1-q**2)**-1 y**-2 [z, f]``; see :func:`ddz_commutator`."""
    return _commutator_derivative(f, params, space, "zbar")


def ddz_chart_commutator(params: ChartParams) -> SparseOperator:
    """``d/dz`` as an operator on vectors ``f = sum f_{nk} e_{nk}``.

    Here ``[z*, f] = z* f - f z*`` with the right product realized by the
    opposite operator, so the derivative is
    ``(1-q**2)**-1 y**-2 (z* - z*^op)``.
    """
    fld = params.field
    c = 1 / (1 - fld.real(params.q) ** 2)
    diff = add(disc.build_zstar(params), disc.build_zstar_op(params), (1, -1))
    return (disc.build_y_power_disc(-2, params) @ diff).scale(fld.scalar(c), "d/dz")


def ddzbar_chart_commutator(params: ChartParams) -> SparseOperator:
    """``-(1-q**2)**-1 y**-2 (z - z^op)`` on vectors in the ``e_{nk}`` basis."""
    fld = params.field
    c = 1 / (1 - fld.real(params.q) ** 2)
    diff = add(disc.build_z(params), disc.build_z_op(params), (1, -1))
    return (disc.build_y_power_disc(-2, params) @ diff).scale(fld.scalar(-c), "d/dzbar")


# -- closed form ---------------------------------------------------------

def ddz_closed_form(params: ChartParams) -> SparseOperator:
    """Columns ``d/dz e_{nk} = q**(-2k)/(1-q**2) (q**2 sqrt(1-q**(2k)) e_{n,k-1}
    - q**(alpha/2) sqrt(1-q**(2(n+1))) e_{n+1,k})``."""
    fld = params.field
    q, a = params.q, params.alpha
    km = params.k_max
    c = 1 / (1 - fld.real(q) ** 2)

    def col(j):
        n, k = divmod(j, km)
        w = c * fld.power(q, -2 * k)
        out = []
        if k > 0:
            out.append((disc_flat(n, k - 1, params), fld.scalar(w * fld.power(q, 2) * fld.sqrt(1 - fld.power(q, 2 * k)))))
        out.append((disc_flat(n + 1, k, params),
                    fld.scalar(-w * fld.weight(q, a, 0.5) * fld.sqrt(1 - fld.power(q, 2 * (n + 1))))))
        return out

    return from_map(params.n_disc, col, "d/dz")


def ddzbar_closed_form(params: ChartParams) -> SparseOperator:
    """Columns ``d/dzbar e_{nk} = -q**(-2k)/(1-q**2) (q**-2 sqrt(1-q**(2(k+1))) e_{n,k+1}
    - q**(-alpha/2) sqrt(1-q**(2n)) e_{n-1,k})``."""
    fld = params.field
    q, a = params.q, params.alpha
    km = params.k_max
    c = 1 / (1 - fld.real(q) ** 2)

    def col(j):
        n, k = divmod(j, km)
        w = -c * fld.power(q, -2 * k)
        out = [(disc_flat(n, k + 1, params),
                fld.scalar(w * fld.power(q, -2) * fld.sqrt(1 - fld.power(q, 2 * (k + 1)))))]
        if n > 0:
            out.append((disc_flat(n - 1, k, params),
                        fld.scalar(-w * fld.weight(q, a, -0.5) * fld.sqrt(1 - fld.power(q, 2 * n)))))
        return out

    return from_map(params.n_disc, col, "d/dzbar")


def ddz_closed_form_chart(params: ChartParams) -> SparseOperator:
    """``d/dz`` on ``e_{nkl}``; the circle index is untouched."""
    return kron(ddz_closed_form(params), identity(params.n_circle, params.field.scalar(1)), "d/dz")


def ddzbar_closed_form_chart(params: ChartParams) -> SparseOperator:
    return kron(ddzbar_closed_form(params), identity(params.n_circle, params.field.scalar(1)), "d/dzbar")


# -- monomials -----------------------------------------------------------

@dataclass(frozen=True)
class MonomialDerivative:
    """``coefficient * z**n z***k``; ``coefficient == 0`` means the zero function."""

    coefficient: float
    n: int
    k: int


def _check_exponents(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise ValueError(f"monomial exponents must be non-negative, got ({n}, {k})")


def ddz_monomial(n: int, k: int, params: ChartParams) -> MonomialDerivative:
    """``d/dz (z**n z***k) = q**(-2(n-1)) (1-q**(2n))/(1-q**2) z**(n-1) z***k``."""
    _check_exponents(n, k)
    q = params.q
    if n == 0:
        return MonomialDerivative(0.0, 0, k)
    return MonomialDerivative(q ** (-2 * (n - 1)) * (1 - q ** (2 * n)) / (1 - q * q), n - 1, k)


def ddzbar_monomial(n: int, k: int, params: ChartParams) -> MonomialDerivative:
    """``d/dzbar (z**n z***k) = q**(-2n) (1-q**(2k))/(1-q**2) z**n z***(k-1)``."""
    _check_exponents(n, k)
    q = params.q
    if k == 0:
        return MonomialDerivative(0.0, n, 0)
    return MonomialDerivative(q ** (-2 * n) * (1 - q ** (2 * k)) / (1 - q * q), n, k - 1)


# -- twist ---------------------------------------------------------------

def sigma_matrix(op: SparseOperator, alpha: float, params: ChartParams, space: Space | None = None) -> SparseOperator:
    """``y**(-alpha) op y**alpha`` by diagonal similarity."""
    space = _space(op, params, space)
    if space == "line":
        left = disc.build_y_power_irreducible(-alpha, params, op.domain_dim)
        right = disc.build_y_power_irreducible(alpha, params, op.domain_dim)
    else:
        left = disc.build_y_power_disc(-alpha, params)
        right = disc.build_y_power_disc(alpha, params)
        if space == "chart":
            one = identity(params.n_circle, params.field.scalar(1))
            left, right = kron(left, one), kron(right, one)
    return (left @ op @ right).relabel(f"sigma^{alpha}({op.label})")


# -- verification --------------------------------------------------------

def _interior_keys(params: ChartParams) -> list[tuple[int, int]]:
    return [(n, k) for n in range(params.n_max - 1) for k in range(params.k_max - 1)]


def _column_coefficients(op: SparseOperator, j: int, params: ChartParams) -> dict:
    km = params.k_max
    return {divmod(r, km): v for r, v in op.column(j).items()}


def verify_basis_routes(params: ChartParams, tol: float | None = None) -> ResidualReport:
    """Closed form vs chart commutator vs ``l2(N)`` commutator on each basis column.

    The third route evaluates ``e_{nk}`` as the matrix unit on ``l2(N)``,
    takes the commutator there and reads the coefficients back.
    """
    tol = params.tol if tol is None else tol
    report = ResidualReport()
    keys = _interior_keys(params)
    dim = max(params.n_max, params.k_max) + 2
    for name, closed, chart, line in (
        ("d/dz", ddz_closed_form(params), ddz_chart_commutator(params), ddz_commutator),
        ("d/dzbar", ddzbar_closed_form(params), ddzbar_chart_commutator(params), ddzbar_commutator),
    ):
        worst_chart = worst_line = 0.0
        for n, k in keys:
            j = disc_flat(n, k, params)
            a = _column_coefficients(closed, j, params)
            b = _column_coefficients(chart, j, params)
            elem = algebra.eta_element(e_to_eta(n, k), params, length=dim + 2)
            mat = line(algebra.to_matrix(elem, params, dim), params, "line")
            c = algebra.matrix_disc_coefficients(mat, params)
            worst_chart = max(worst_chart, coefficient_error(a, b))
            worst_line = max(worst_line, coefficient_error(a, c, rows=a.keys() | c.keys()))
        report.add(f"{name}: closed form = chart commutator", "Sec.5", len(keys), worst_chart, tol)
        report.add(f"{name}: closed form = l2(N) commutator", "Eq.11", len(keys), worst_line, tol)
    return report


def _monomial_vector(n: int, k: int, params: ChartParams, length: int) -> list:
    coeffs = algebra.disc_coefficients(algebra.basis_expand(algebra.monomial(n, k, params, length), params))
    return algebra.disc_vector(coeffs, params)


def verify_monomial_routes(params: ChartParams, tol: float | None = None, degree: int = 4,
                           dps: int | None = None) -> ResidualReport:
    """Closed form vs ``l2(N)`` commutator vs monomial formula on ``z**n z***k``.

    The first two routes run with ``dps`` digits; the monomial formula has
    no cancellation and stays in double precision.
    """
    tol = params.tol if tol is None else tol
    mp = params.with_precision(dps or oracle_dps(params))
    report = ResidualReport()
    length = params.m_max + degree + 4
    dim = max(params.n_max, params.k_max) + degree + 1
    keys = _interior_keys(params)
    for name, closed, line, formula in (
        ("d/dz", ddz_closed_form(mp), ddz_commutator, ddz_monomial),
        ("d/dzbar", ddzbar_closed_form(mp), ddzbar_commutator, ddzbar_monomial),
    ):
        worst_a = worst_b = 0.0
        count = 0
        for n in range(degree + 1):
            for k in range(degree + 1 - n):
                count += 1
                vec = _monomial_vector(n, k, mp, length)
                out = apply(closed, vec)
                a = {(j // params.k_max, j % params.k_max): v for j, v in enumerate(out)}
                mat = line(algebra.to_matrix(algebra.monomial(n, k, mp, length), mp, dim), mp, "line")
                b = algebra.matrix_disc_coefficients(mat, mp)
                d = formula(n, k, params)
                if d.coefficient == 0:
                    c = {}
                else:
                    expanded = _monomial_vector(d.n, d.k, params, length)
                    c = {(j // params.k_max, j % params.k_max): d.coefficient * v for j, v in enumerate(expanded)}
                # exact zeros come out of the cancelling routes as noise far
                # below double resolution
                floor = NOISE_FLOOR * max((abs(v) for v in vec), default=1)
                worst_a = max(worst_a, coefficient_error(a, b, rows=keys, atol=floor))
                worst_b = max(worst_b, coefficient_error(a, c, rows=keys, atol=floor))
        report.add(f"{name}: closed form = commutator on monomials", "Eq.11", count, worst_a, tol)
        report.add(f"{name}: closed form = monomial formula", "Sec.3", count, worst_b, tol)
    return report


def _line_ops(params: ChartParams, dim: int):
    z = disc.build_z_irreducible(params, dim)
    zs = disc.build_zstar_irreducible(params, dim)
    y2 = disc.build_y_power_irreducible(2, params, dim)
    return {"z": z, "z^2": z @ z, "y^2": y2, "z*": zs}


def verify_leibniz(params: ChartParams, tol: float | None = None, dps: int | None = None) -> ResidualReport:
    """``D(fg) = D(f) g + sigma^2(f) D(g)`` for ``D`` either derivative,
    ``f in {z, z^2, y^2}`` and ``g in {z*, y^2}``, on ``l2(N)``."""
    tol = params.tol if tol is None else tol
    mp = params.with_precision(dps or oracle_dps(params))
    dim = max(params.n_max, params.k_max)
    ops = _line_ops(mp, dim + 4)
    domain = list(range(dim))
    report = ResidualReport()
    for dname, D in (("d/dz", ddz_commutator), ("d/dzbar", ddzbar_commutator)):
        for fn in ("z", "z^2", "y^2"):
            for gn in ("z*", "y^2"):
                f, g = ops[fn], ops[gn]
                lhs = D(f @ g, mp, "line")
                rhs = add(D(f, mp, "line") @ g, sigma_matrix(f, 2, mp, "line") @ D(g, mp, "line"))
                report.add(f"{dname} Leibniz f={fn}, g={gn}", "Sec.3", len(domain),
                           relation_residual(lhs, rhs, domain), tol)
    return report


def _spectral_samples(name: str, params: ChartParams, length: int, m: int = 1) -> SpectralFunction:
    fld = params.field
    if name == "id":
        return SpectralFunction.from_callable(lambda x: x, length, params.q, derivative_at_zero=1, field=fld)
    if name == "square":
        return SpectralFunction.from_callable(lambda x: x * x, length, params.q, derivative_at_zero=0, field=fld)
    if name == "delta":
        return SpectralFunction.delta(2 * m, length, fld)
    raise ValueError(name)


def verify_spectral_rule(params: ChartParams, tol: float | None = None, dps: int | None = None) -> ResidualReport:
    """``d/dz f(y**2) = -(nabla f)(y**2) z*`` and
    ``d/dzbar f(y**2) = -q**-2 z (nabla f)(y**2)`` on ``l2(N)``."""
    tol = params.tol if tol is None else tol
    mp = params.with_precision(dps or oracle_dps(params))
    dim = max(params.n_max, params.k_max) + 2
    domain = list(range(dim - 2))
    fld = mp.field
    ops = _line_ops(mp, dim)
    report = ResidualReport()
    for name in ("id", "square", "delta"):
        f = _spectral_samples(name, mp, 2 * dim + 4)
        fy2 = diagonal(compose_square(f).samples[:dim])
        nab = diagonal(compose_square(nabla_q2(f, mp)).samples[:dim])
        lhs = ddz_commutator(fy2, mp, "line")
        rhs = (nab @ ops["z*"]).scale(-1)
        report.add(f"d/dz {name}(y^2) = -nabla {name}(y^2) z*", "Sec.3", len(domain),
                   relation_residual(lhs, rhs, domain), tol)
        lhs = ddzbar_commutator(fy2, mp, "line")
        rhs = (ops["z"] @ nab).scale(-fld.power(mp.q, -2))
        report.add(f"d/dzbar {name}(y^2) = -q^-2 z nabla {name}(y^2)", "Sec.3", len(domain),
                   relation_residual(lhs, rhs, domain), tol)
    return report


def verify_star_compatibility(params: ChartParams, tol: float | None = None, dps: int | None = None) -> ResidualReport:
    """``d/dzbar(f*) = sigma^2((d/dz f)*)`` for ``f in {z, z^2, y^2, z*}``."""
    tol = params.tol if tol is None else tol
    mp = params.with_precision(dps or oracle_dps(params))
    dim = max(params.n_max, params.k_max) + 4
    domain = list(range(dim - 4))
    ops = _line_ops(mp, dim)
    report = ResidualReport()
    for name, f in ops.items():
        lhs = ddzbar_commutator(adjoint(f), mp, "line")
        rhs = sigma_matrix(adjoint(ddz_commutator(f, mp, "line")), 2, mp, "line")
        report.add(f"d/dzbar(({name})*) = sigma^2((d/dz {name})*)", "Sec.3", len(domain),
                   relation_residual(lhs, rhs, domain), tol)
    return report


def verify_nabla(params: ChartParams, tol: float | None = None, m: int | None = None,
                 limit_tol: float = 1e-8) -> ResidualReport:
    """``nabla`` of ``x`` is 1 everywhere; ``nabla`` of ``x**2`` at ``q**(2m)``
    is within ``limit_tol`` of its value at 0.

    ``m`` defaults to 25, or more when ``q`` is so close to 1 that
    ``(1+q**2) q**(2m)`` is still above ``limit_tol``.
    """
    tol = params.tol if tol is None else tol
    if m is None:
        m = max(25, math.ceil(math.log(limit_tol / 2) / (2 * math.log(params.q))))
    length = 2 * m + 3
    report = ResidualReport()
    ident = nabla_q2(_spectral_samples("id", params, length), params)
    worst = max(float(abs(v - 1)) for v in ident.samples + (ident.value_at_zero,))
    report.add("nabla x = 1", "Sec.3", len(ident) + 1, worst, 0.0)
    sq = compose_square(nabla_q2(_spectral_samples("square", params, length), params))
    report.add(f"nabla x^2 at q^(2*{m}) -> f'(0)", "Sec.3", 1,
               float(abs(sq.samples[m] - sq.value_at_zero)), limit_tol)
    return report


def verify_calculus(params: ChartParams, tol: float | None = None) -> ResidualReport:
    """All derivative cross-checks; relative tolerance ``tol``."""
    report = ResidualReport()
    for check in (verify_nabla, verify_basis_routes, verify_monomial_routes, verify_leibniz,
                  verify_spectral_rule, verify_star_compatibility):
        report.extend(check(params, tol))
    return report
