"""Circle operators and the quantum SU(2) generators on the chart basis ``e_{nkl}``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from . import disc
from .params import ChartParams, chart_columns, circle_flat, disc_flat, interior_domain
from .report import ResidualReport
from .sparse import SparseOperator, add, adjoint, compose, from_map, identity, kron, relation_residual

__all__ = [
    "ProductOperator",
    "build_u",
    "build_ustar",
    "build_dt",
    "build_minus_i_dt",
    "build_c",
    "build_d",
    "build_c_op",
    "build_d_op",
    "build_c_irreducible",
    "build_d_irreducible",
    "build_c_op_irreducible",
    "build_d_op_irreducible",
    "chart_operator",
    "verify_su2_relations",
    "block_decompose",
    "verify_blocks",
]


# -- circle factor -------------------------------------------------------

def _circle_map(params: ChartParams, action, label: str) -> SparseOperator:
    lm = params.l_max

    def col(j):
        l = j - lm
        return [(circle_flat(l2, params), v) for l2, v in action(l)]

    return from_map(params.n_circle, col, label)


def build_u(params: ChartParams) -> SparseOperator:
    """Bilateral shift ``u b_l = b_{l+1}``, truncated at the window edge."""
    one = params.field.scalar(1)
    return _circle_map(params, lambda l: [(l + 1, one)], "u")


def build_ustar(params: ChartParams) -> SparseOperator:
    one = params.field.scalar(1)
    return _circle_map(params, lambda l: [(l - 1, one)], "u*")


def build_dt(params: ChartParams) -> SparseOperator:
    """``d/dt b_l = i l b_l``."""
    f = params.field
    return _circle_map(params, lambda l: [(l, f.scalar(1j * l))], "d/dt")


def build_minus_i_dt(params: ChartParams) -> SparseOperator:
    """``-i d/dt b_l = l b_l``."""
    f = params.field
    return _circle_map(params, lambda l: [(l, f.scalar(l))], "-i d/dt")


# -- tensor products -----------------------------------------------------

@dataclass(frozen=True)
class ProductOperator:
    """``disc_part (x) circle_part`` acting on ``e_{nk} (x) b_l``."""

    disc_part: SparseOperator
    circle_part: SparseOperator
    label: str = ""

    @property
    def matrix(self) -> SparseOperator:
        return kron(self.disc_part, self.circle_part, self.label)

    def adjoint(self) -> ProductOperator:
        return ProductOperator(adjoint(self.disc_part), adjoint(self.circle_part), f"({self.label})*")


def chart_operator(disc_part: SparseOperator, params: ChartParams, label: str = "") -> SparseOperator:
    """Lift an operator on ``e_{nk}`` to ``e_{nkl}`` by tensoring with the identity."""
    return kron(disc_part, identity(params.n_circle, params.field.scalar(1)), label or disc_part.label)


def build_c(params: ChartParams) -> ProductOperator:
    """``c = y (x) u``: ``c e_{nkl} = q**k e_{n,k,l+1}``."""
    return ProductOperator(disc.build_y(params), build_u(params), "c")


def build_d(params: ChartParams) -> ProductOperator:
    """``d = z (x) 1``: ``d e_{nkl} = sqrt(1 - q**(2(k+1))) e_{n,k+1,l}``."""
    return ProductOperator(disc.build_z(params), identity(params.n_circle, params.field.scalar(1)), "d")


def build_c_op(params: ChartParams) -> ProductOperator:
    """``c^op = y^op (x) u*``: ``c^op e_{nkl} = q**n e_{n,k,l-1}``."""
    return ProductOperator(disc.build_y_op(params), build_ustar(params), "c^op")


def build_d_op(params: ChartParams) -> ProductOperator:
    """``d^op e_{nkl} = sqrt(1 - q**(2n)) e_{n-1,k,l}``.

    This is ``zeta^op (x) 1``; the coefficient is written out directly so the
    blocks coincide bit for bit with the adjoint of the ``l2(N) (x) l2(Z)``
    representation.
    """
    km = params.k_max

    def col(j):
        n, k = divmod(j, km)
        return [(disc_flat(n - 1, k, params), disc._lower_coeff(params, n))]

    return ProductOperator(
        from_map(params.n_disc, col, "zeta^op"),
        identity(params.n_circle, params.field.scalar(1)),
        "d^op",
    )


# -- the representation on l2(N) (x) l2(Z) and its adjoint ----------------

def _line_circle_map(params: ChartParams, dim: int, action, label: str) -> SparseOperator:
    nc = params.n_circle

    def col(j):
        m, lo = divmod(j, nc)
        l = lo - params.l_max
        out = []
        for (m2, l2), v in action(m, l):
            c = circle_flat(l2, params)
            out.append((m2 * nc + c if 0 <= m2 < dim and c is not None else None, v))
        return out

    return from_map(dim * nc, col, label)


def build_c_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``c (e_m (x) b_l) = q**m e_m (x) b_{l+1}`` on ``l2(N) (x) l2(Z)``."""
    dim = params.k_max if dim is None else dim
    f = params.field
    return _line_circle_map(params, dim, lambda m, l: [((m, l + 1), f.scalar(f.power(params.q, m)))], "c")


def build_d_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``d (e_m (x) b_l) = sqrt(1 - q**(2(m+1))) e_{m+1} (x) b_l``."""
    dim = params.k_max if dim is None else dim
    return _line_circle_map(params, dim, lambda m, l: [((m + 1, l), disc._raise_coeff(params, m))], "d")


def build_c_op_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``c^op (e_m (x) b_l) = q**m e_m (x) b_{l-1}``."""
    dim = params.n_max if dim is None else dim
    f = params.field
    return _line_circle_map(params, dim, lambda m, l: [((m, l - 1), f.scalar(f.power(params.q, m)))], "c^op")


def build_d_op_irreducible(params: ChartParams, dim: int | None = None) -> SparseOperator:
    """``d^op (e_m (x) b_l) = sqrt(1 - q**(2m)) e_{m-1} (x) b_l``."""
    dim = params.n_max if dim is None else dim
    return _line_circle_map(params, dim, lambda m, l: [((m - 1, l), disc._lower_coeff(params, m))], "d^op")


# -- verification --------------------------------------------------------

SU2_BUDGET = (2, 2, 2)


def verify_su2_relations(params: ChartParams, tol: float | None = None) -> ResidualReport:
    """Residuals of the quantum SU(2) relations, their opposite counterparts
    and all left/right cross commutators on the interior domain."""
    tol = params.tol if tol is None else tol
    domain = chart_columns(interior_domain(SU2_BUDGET, params), params)
    if not domain:
        raise ValueError(f"window too small for shift budget {SU2_BUDGET}")
    one = identity(params.n_chart, params.field.scalar(1))
    zero = one.scale(0)
    q = params.field.real(params.q)

    c, d = build_c(params).matrix, build_d(params).matrix
    cs, ds = adjoint(c), adjoint(d)
    C, D = build_c_op(params).matrix, build_d_op(params).matrix
    Cs, Ds = adjoint(C), adjoint(D)

    report = ResidualReport()

    def check(name, tag, lhs, rhs):
        report.add(name, tag, len(domain), relation_residual(lhs, rhs, domain), tol)

    def lin(a, b, wb):
        return add(a, b, (1, wb))

    check("cd = q dc", "Eq.1", c @ d, (d @ c).scale(q))
    check("c*d = q dc*", "Eq.1", cs @ d, (d @ cs).scale(q))
    check("cc* = c*c", "Eq.1", c @ cs, cs @ c)
    check("d*d + q^2 cc* = 1", "Eq.2", lin(ds @ d, c @ cs, q * q), one)
    check("dd* + cc* = 1", "Eq.2", lin(d @ ds, c @ cs, 1), one)

    check("op: d^op c^op = q c^op d^op", "Eq.1 op", D @ C, (C @ D).scale(q))
    check("op: d^op c*^op = q c*^op d^op", "Eq.1 op", D @ Cs, (Cs @ D).scale(q))
    check("op: c*^op c^op = c^op c*^op", "Eq.1 op", Cs @ C, C @ Cs)
    check("op: d^op d*^op + q^2 c*^op c^op = 1", "Eq.2 op", lin(D @ Ds, Cs @ C, q * q), one)
    check("op: d*^op d^op + c*^op c^op = 1", "Eq.2 op", lin(Ds @ D, Cs @ C, 1), one)

    left = {"c": c, "c*": cs, "d": d, "d*": ds}
    right = {"c^op": C, "c*^op": Cs, "d^op": D, "d*^op": Ds}
    for ln, x in left.items():
        for rn, g in right.items():
            check(f"[{ln}, {rn}] = 0", "Sec.5", lin(x @ g, g @ x, -1), zero)
    return report


def block_decompose(op: SparseOperator, axis: Literal["n", "k"], params: ChartParams) -> list[SparseOperator]:
    """Restrict an operator on ``e_{nkl}`` to the blocks of fixed ``n`` or ``k``.

    For ``axis="n"`` block ``n0`` acts on ``span{e_{n0,k,l}}`` with flat
    coordinate ``k*(2 l_max + 1) + l + l_max``; for ``axis="k"`` block ``k0``
    acts on ``span{e_{n,k0,l}}`` with flat coordinate ``n*(2 l_max + 1) + l + l_max``.
    Raises ``ValueError`` if ``op`` moves the chosen index.
    """
    if axis not in ("n", "k"):
        raise ValueError(f"axis must be 'n' or 'k', got {axis!r}")
    nc, km = params.n_circle, params.k_max
    if op.shape != (params.n_chart, params.n_chart):
        raise ValueError("operator does not act on the chart basis")

    def split(flat):
        dflat, c = divmod(flat, nc)
        n, k = divmod(dflat, km)
        return (n, k * nc + c) if axis == "n" else (k, n * nc + c)

    nblocks = params.n_max if axis == "n" else params.k_max
    size = params.n_chart // nblocks
    columns = [[[] for _ in range(size)] for _ in range(nblocks)]
    for r, j, v in op.entries():
        bj, cj = split(j)
        br, cr = split(r)
        if br != bj:
            raise ValueError(f"{op.label!r} does not preserve the {axis} index")
        columns[bj][cj].append((cr, v))
    return [SparseOperator(size, size, cols, f"{op.label}|{axis}={b}") for b, cols in enumerate(columns)]


def _block_error(blocks: list[SparseOperator], reference: SparseOperator) -> float:
    """0 when every block equals ``reference`` bit for bit, else the largest entry gap."""
    worst = 0.0
    ref = {(r, j): v for r, j, v in reference.entries()}
    for b in blocks:
        got = {(r, j): v for r, j, v in b.entries()}
        for key in got.keys() | ref.keys():
            worst = max(worst, float(abs(got.get(key, 0) - ref.get(key, 0))))
    return worst


def verify_blocks(params: ChartParams, tol: float = 0.0) -> ResidualReport:
    """Each fixed-``n`` block of ``c, d`` is the ``l2(N) (x) l2(Z)`` representation
    and each fixed-``k`` block of ``c^op, d^op`` its adjoint form.  The default
    tolerance demands bit-identical blocks."""
    report = ResidualReport()
    pairs = (
        ("c", build_c(params).matrix, "n", build_c_irreducible(params), "Eq.3"),
        ("d", build_d(params).matrix, "n", build_d_irreducible(params), "Eq.3"),
        ("c^op", build_c_op(params).matrix, "k", build_c_op_irreducible(params), "Eq.50"),
        ("d^op", build_d_op(params).matrix, "k", build_d_op_irreducible(params), "Eq.50"),
    )
    for name, op, axis, ref, tag in pairs:
        blocks = block_decompose(op, axis, params)
        report.add(f"{name}: all {axis}-blocks equal the line representation", tag,
                   len(blocks), _block_error(blocks, ref), tol)
    return report
