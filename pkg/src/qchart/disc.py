"""Matrices of the quantum disc generators.

Two realizations are provided:

* on the irreducible space ``l2(N)`` (basis ``e_j``): the unilateral shift,
  spectral projectors and ``z, z*, y``;
* on ``L2(D_q)`` in the basis ``e_{nk}``: left multiplication by ``z, z*, y``
  (acting on ``k``) and right multiplication ``z^op, z*^op, y^op`` (acting
  on ``n``).

Images leaving the truncation window are dropped, so every operator is total
and exact on interior columns.
"""
from __future__ import annotations

from .params import ChartParams, disc_flat
from .report import ResidualReport
from .sparse import SparseOperator, add, adjoint, compose, diagonal, from_map, identity, relation_residual
from .spectral import SpectralFunction

__all__ = [
    "build_shift",
    "build_shift_adjoint",
    "build_shift_power",
    "build_projector",
    "build_spectral_irreducible",
    "build_y_power_irreducible",
    "build_z_irreducible",
    "build_zstar_irreducible",
    "build_y_irreducible",
    "build_identity_disc",
    "build_spectral_disc",
    "build_y_power_disc",
    "build_z",
    "build_zstar",
    "build_y",
    "build_z_op",
    "build_zstar_op",
    "build_y_op",
    "build_zeta_op",
    "build_zetastar_op",
    "verify_disc_relations",
]


def _lift(j: int, dim: int) -> int | None:
    return j if 0 <= j < dim else None


def _raise_coeff(params: ChartParams, j: int):
    """``sqrt(1 - q**(2(j+1)))``, the coefficient of ``z e_j``."""
    f = params.field
    return f.scalar(f.sqrt(1 - f.power(params.q, 2 * (j + 1))))


def _lower_coeff(params: ChartParams, j: int):
    """``sqrt(1 - q**(2j))``, the coefficient of ``z* e_j``."""
    f = params.field
    return f.scalar(f.sqrt(1 - f.power(params.q, 2 * j)))


# -- l2(N) ---------------------------------------------------------------

def build_shift(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """Unilateral shift ``s e_j = e_{j+1}``; the last column is truncated to zero."""
    dim = params.n_max if dim is None else dim
    one = params.field.scalar(1)
    return from_map(dim, lambda j: [(_lift(j + 1, dim), one)], "s")


def build_shift_adjoint(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``s* e_j = e_{j-1}`` and ``s* e_0 = 0``."""
    dim = params.n_max if dim is None else dim
    one = params.field.scalar(1)
    return from_map(dim, lambda j: [(_lift(j - 1, dim), one)], "s*")


def build_shift_power(k: int, params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``s^{#k}``: ``s**k`` for ``k >= 0`` and ``(s*)**|k|`` otherwise, by repeated composition."""
    dim = params.n_max if dim is None else dim
    step = build_shift(params, dim) if k >= 0 else build_shift_adjoint(params, dim)
    out = identity(dim, params.field.scalar(1))
    for _ in range(abs(k)):
        out = compose(step, out)
    return out.relabel(f"s^#{k}")


def build_projector(n: int, params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``delta_{q^n}(y)``: orthogonal projection onto ``span{e_n}``."""
    dim = params.n_max if dim is None else dim
    if not 0 <= n < dim:
        raise ValueError(f"projector index {n} outside window of size {dim}")
    one = params.field.scalar(1)
    return SparseOperator(dim, dim, [[(j, one)] if j == n else [] for j in range(dim)],
                          f"delta_q^{n}(y)")


def build_spectral_irreducible(
    f: SpectralFunction, params: ChartParams, dim: int | None = None
) -> SparseOperator:
    """``f(y)`` on ``l2(N)``: the diagonal ``f(q**j)``."""
    dim = params.n_max if dim is None else dim
    if len(f) < dim:
        raise ValueError(f"{len(f)} samples cannot fill a window of size {dim}")
    return diagonal(f.samples[:dim], "f(y)")


def build_y_power_irreducible(
    exponent: float, params: ChartParams, dim: int | None = None
) -> SparseOperator:
    """``y**exponent`` as the diagonal ``q**(exponent*j)``; never formed by inversion."""
    dim = params.n_max if dim is None else dim
    f = params.field
    return diagonal([f.scalar(f.power(params.q, exponent * j)) for j in range(dim)],
                    f"y^{exponent}")


def build_z_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``z e_j = sqrt(1 - q**(2(j+1))) e_{j+1}`` on ``l2(N)``."""
    dim = params.n_max if dim is None else dim
    return from_map(dim, lambda j: [(_lift(j + 1, dim), _raise_coeff(params, j))], "z")


def build_zstar_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``z* e_j = sqrt(1 - q**(2j)) e_{j-1}`` on ``l2(N)``."""
    dim = params.n_max if dim is None else dim
    return from_map(dim, lambda j: [(_lift(j - 1, dim), _lower_coeff(params, j))], "z*")


def build_y_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``y e_j = q**j e_j`` on ``l2(N)``."""
    return build_y_power_irreducible(1, params, dim).relabel("y")


# -- L2(D_q), basis e_{nk} -----------------------------------------------

def _disc_map(params: ChartParams, action, label: str) -> SparseOperator:
    km = params.k_max

    def col(j):
        n, k = divmod(j, km)
        return [(disc_flat(n2, k2, params), v) for (n2, k2), v in action(n, k)]

    return from_map(params.n_disc, col, label)


def build_identity_disc(params: ChartParams) -> SparseOperator:
    return identity(params.n_disc, params.field.scalar(1))


def build_spectral_disc(f: SpectralFunction, params: ChartParams) -> SparseOperator:
    """Left multiplication by ``f(y)``: ``e_{nk} -> f(q**k) e_{nk}``."""
    if len(f) < params.k_max:
        raise ValueError(f"{len(f)} samples cannot fill k_max={params.k_max}")
    return _disc_map(params, lambda n, k: [((n, k), f.samples[k])], "f(y)")


def build_y_power_disc(exponent: float, params: ChartParams) -> SparseOperator:
    """Left multiplication by ``y**exponent``: diagonal ``q**(exponent*k)``."""
    f = params.field
    return _disc_map(
        params, lambda n, k: [((n, k), f.scalar(f.power(params.q, exponent * k)))],
        f"y^{exponent}",
    )


def build_z(params: ChartParams) -> SparseOperator:
    """``z e_{nk} = sqrt(1 - q**(2(k+1))) e_{n,k+1}``."""
    return _disc_map(params, lambda n, k: [((n, k + 1), _raise_coeff(params, k))], "z")


def build_zstar(params: ChartParams) -> SparseOperator:
    """``z* e_{nk} = sqrt(1 - q**(2k)) e_{n,k-1}``."""
    return _disc_map(params, lambda n, k: [((n, k - 1), _lower_coeff(params, k))], "z*")


def build_y(params: ChartParams) -> SparseOperator:
    """``y e_{nk} = q**k e_{nk}``."""
    return build_y_power_disc(1, params).relabel("y")


def build_z_op(params: ChartParams) -> SparseOperator:
    """Right multiplication by ``z``: ``e_{nk} -> q**(-alpha/2) sqrt(1 - q**(2n)) e_{n-1,k}``."""
    f = params.field
    w = f.weight(params.q, params.alpha, -0.5)
    return _disc_map(params, lambda n, k: [((n - 1, k), w * _lower_coeff(params, n))], "z^op")


def build_zstar_op(params: ChartParams) -> SparseOperator:
    """Right multiplication by ``z*``: ``e_{nk} -> q**(alpha/2) sqrt(1 - q**(2(n+1))) e_{n+1,k}``."""
    f = params.field
    w = f.weight(params.q, params.alpha, 0.5)
    return _disc_map(params, lambda n, k: [((n + 1, k), w * _raise_coeff(params, n))], "z*^op")


def build_y_op(params: ChartParams) -> SparseOperator:
    """Right multiplication by ``y``: ``e_{nk} -> q**n e_{nk}``."""
    f = params.field
    return _disc_map(params, lambda n, k: [((n, k), f.scalar(f.power(params.q, n)))], "y^op")


def build_zeta_op(params: ChartParams) -> SparseOperator:
    """``zeta^op = q**(alpha/2) z^op``, a backward shift in ``n``."""
    f = params.field
    return build_z_op(params).scale(f.weight(params.q, params.alpha, 0.5), "zeta^op")


def build_zetastar_op(params: ChartParams) -> SparseOperator:
    """``zeta*^op = q**(-alpha/2) z*^op``, the adjoint of ``zeta^op``."""
    f = params.field
    return build_zstar_op(params).scale(f.weight(params.q, params.alpha, -0.5), "zeta*^op")


# -- verification --------------------------------------------------------

def verify_disc_relations(params: ChartParams, tol: float | None = None) -> ResidualReport:
    """Residuals of the quantum disc relations and the shift/projector
    calculus on interior columns of both realizations."""
    from .params import interior_disc_domain, interior_line_domain

    tol = params.tol if tol is None else tol
    f = params.field
    q = f.real(params.q)
    report = ResidualReport()

    # l2(N)
    dim = params.n_max
    line = interior_line_domain(2, dim)
    one = identity(dim, f.scalar(1))
    zero = one.scale(0)
    z, zs, y = build_z_irreducible(params), build_zstar_irreducible(params), build_y_irreducible(params)
    s, ss = build_shift(params), build_shift_adjoint(params)

    def check(name, tag, lhs, rhs, domain):
        report.add(name, tag, len(domain), relation_residual(lhs, rhs, domain), tol)

    check("l2(N): z*z - q^2 zz* = 1 - q^2", "Eq.6", add(zs @ z, z @ zs, (1, -q * q)), one.scale(1 - q * q), line)
    check("l2(N): y^2 = 1 - zz*", "Eq.8", y @ y, add(one, z @ zs, (1, -1)), line)
    check("l2(N): yz = q zy", "Eq.8", y @ z, (z @ y).scale(q), line)
    check("l2(N): z*y = q yz*", "Eq.8", zs @ y, (y @ zs).scale(q), line)
    check("l2(N): z = s sqrt(1 - q^2 y^2)", "Eq.14", z,
          s @ build_spectral_irreducible(
              SpectralFunction.from_callable(lambda t: f.sqrt(1 - q * q * t * t), dim, params.q, field=f),
              params), line)
    check("l2(N): z* = s* sqrt(1 - y^2)", "Eq.14", zs,
          ss @ build_spectral_irreducible(
              SpectralFunction.from_callable(lambda t: f.sqrt(1 - t * t), dim, params.q, field=f),
              params), line)
    check("l2(N): s*s = 1", "Sec.5", ss @ s, one, line)
    check("l2(N): ss* = 1 - delta_0(y)", "Sec.5", s @ ss, add(one, build_projector(0, params), (1, -1)), line)
    check("l2(N): adjoint(z) = z*", "Eq.5", adjoint(z), zs, line[:-1])

    # projector calculus on l2(N)
    g = SpectralFunction.from_callable(lambda t: 1 + 2 * t - t * t * t, dim, params.q, field=f)
    gy = build_spectral_irreducible(g, params)
    for n in range(0, dim - 4):
        dn = build_projector(n, params)
        check(f"l2(N): f(y) delta_{n} = f(q^{n}) delta_{n}", "Eq.23", gy @ dn, dn.scale(g.samples[n]), line)
        check(f"l2(N): delta_{n} f(y) = f(q^{n}) delta_{n}", "Eq.23", dn @ gy, dn.scale(g.samples[n]), line)
        check(f"l2(N): s delta_{n} = delta_{n + 1} s", "Eq.24", s @ dn, build_projector(n + 1, params) @ s, line)
        if n > 0:
            check(f"l2(N): s* delta_{n} = delta_{n - 1} s*", "Eq.24", ss @ dn,
                  build_projector(n - 1, params) @ ss, line)
        for m in range(0, dim - 4):
            rhs = dn if m == n else zero
            check(f"l2(N): delta_{m} delta_{n} = [m=n] delta_{n}", "Eq.23", build_projector(m, params) @ dn, rhs, line)
    for k in range(1, 4):
        for n in range(0, k):
            dn = build_projector(n, params)
            check(f"l2(N): s*^{k} delta_{n} = 0", "Eq.25", build_shift_power(-k, params) @ dn, zero, line)
            check(f"l2(N): delta_{n} s^{k} = 0", "Eq.25", dn @ build_shift_power(k, params), zero, line)
        for n in range(k, dim - 4):
            dn = build_projector(n, params)
            check(f"l2(N): s s*^{k} delta_{n} = s*^{k - 1} delta_{n}", "Eq.26",
                  s @ build_shift_power(-k, params) @ dn, build_shift_power(-(k - 1), params) @ dn, line)
    worst = 0.0
    count = 0
    for n in range(0, dim - 7):
        dn = build_projector(n, params)
        for k in range(-min(n, 3), 4):
            for l in range(-3, 4):
                lhs = build_shift_power(l, params) @ build_shift_power(k, params) @ dn
                rhs = build_shift_power(l + k, params) @ dn
                worst = max(worst, relation_residual(lhs, rhs, range(dim)))
                count += 1
    report.add("l2(N): s^#l s^#k delta_n = s^#(l+k) delta_n (k >= -n)", "Eq.27", count, worst, tol)
    differs = build_shift_power(1, params) @ build_shift_power(-1, params) != build_shift_power(0, params)
    report.add("l2(N): s^#1 s^#-1 != s^#0", "Sec.5", dim, 0.0 if differs else 1.0, tol)

    # L2(D_q), basis e_{nk}
    cols = interior_disc_domain((2, 2), params)
    one = build_identity_disc(params)
    zero = one.scale(0)
    z, zs, y = build_z(params), build_zstar(params), build_y(params)
    zo, zso, yo = build_z_op(params), build_zstar_op(params), build_y_op(params)
    ze, zes = build_zeta_op(params), build_zetastar_op(params)
    check("e_nk: z*z - q^2 zz* = 1 - q^2", "Eq.6", add(zs @ z, z @ zs, (1, -q * q)), one.scale(1 - q * q), cols)
    check("e_nk: y^2 = 1 - zz*", "Eq.8", y @ y, add(one, z @ zs, (1, -1)), cols)
    check("e_nk: yz = q zy", "Eq.8", y @ z, (z @ y).scale(q), cols)
    check("e_nk: z*y = q yz*", "Eq.8", zs @ y, (y @ zs).scale(q), cols)
    check("e_nk: zeta zeta* - q^2 zeta* zeta = 1 - q^2", "Eq.45",
          add(ze @ zes, zes @ ze, (1, -q * q)), one.scale(1 - q * q), cols)
    # (zz*)^op acts as z*^op z^op, so the opposite of y = sqrt(1 - zz*) reads:
    check("e_nk: y^op^2 = 1 - zeta* zeta", "Sec.5", yo @ yo, add(one, zes @ ze, (1, -1)), cols)
    check("e_nk: adjoint(z) = z*", "Eq.38-39", adjoint(z), zs, cols)
    check("e_nk: adjoint(zeta^op) = zeta*^op", "Eq.45", adjoint(ze), zes, cols)
    check("e_nk: adjoint(z^op) = q^-alpha z*^op", "Eq.21", adjoint(zo),
          zso.scale(f.weight(params.q, params.alpha, -1)), cols)
    for ln, a in (("z", z), ("z*", zs), ("y", y)):
        for rn, b in (("z^op", zo), ("z*^op", zso), ("y^op", yo)):
            check(f"e_nk: [{ln}, {rn}] = 0", "Eq.46", add(a @ b, b @ a, (1, -1)), zero, cols)
    return report
