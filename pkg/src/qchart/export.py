"""Plain-text sparse matrix export.

Each file starts with ``#`` header lines (operator, tag, parameters, basis
order and flat-index formula) followed by a CSV body ``row,col,re,im``
sorted by column, then row.  Floats are written with ``repr`` so the output
is bit-exact and identical across runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import calculus, disc, su2
from .params import ChartParams
from .sparse import SparseOperator

__all__ = ["CATALOG", "ExportSpec", "build_export", "format_export", "export_operator"]


@dataclass(frozen=True)
class ExportSpec:
    tag: str
    space: str
    build: Callable[[ChartParams], SparseOperator]


_DISC = "disc"
_CHART = "chart"
_CIRCLE = "circle"

CATALOG: dict[str, ExportSpec] = {
    "z": ExportSpec("Eq.38", _DISC, disc.build_z),
    "zstar": ExportSpec("Eq.39", _DISC, disc.build_zstar),
    "y": ExportSpec("Eq.38", _DISC, disc.build_y),
    "z_op": ExportSpec("Eq.42", _DISC, disc.build_z_op),
    "zstar_op": ExportSpec("Eq.43", _DISC, disc.build_zstar_op),
    "y_op": ExportSpec("Eq.41", _DISC, disc.build_y_op),
    "zeta_op": ExportSpec("Eq.45", _DISC, disc.build_zeta_op),
    "c": ExportSpec("Eq.48", _CHART, lambda p: su2.build_c(p).matrix),
    "d": ExportSpec("Eq.48", _CHART, lambda p: su2.build_d(p).matrix),
    "c_op": ExportSpec("Eq.49", _CHART, lambda p: su2.build_c_op(p).matrix),
    "d_op": ExportSpec("Eq.49", _CHART, lambda p: su2.build_d_op(p).matrix),
    "ddz": ExportSpec("Thm.2", _DISC, calculus.ddz_closed_form),
    "ddzbar": ExportSpec("Thm.2", _DISC, calculus.ddzbar_closed_form),
    "dt": ExportSpec("Thm.2", _CIRCLE, su2.build_dt),
    "u": ExportSpec("Eq.48", _CIRCLE, su2.build_u),
}

_BASIS = {
    _DISC: ("e_{{nk}}, 0 <= n < {n_max}, 0 <= k < {k_max}", "n*{k_max} + k"),
    _CHART: ("e_{{nkl}} = e_{{nk}} (x) b_l, 0 <= n < {n_max}, 0 <= k < {k_max}, -{l_max} <= l <= {l_max}",
             "(n*{k_max} + k)*{n_circle} + (l + {l_max})"),
    _CIRCLE: ("b_l, -{l_max} <= l <= {l_max}", "l + {l_max}"),
}


def build_export(name: str, params: ChartParams) -> tuple[ExportSpec, SparseOperator]:
    """Look up ``name`` in :data:`CATALOG` and build the operator in double precision."""
    try:
        spec = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise KeyError(f"unknown operator {name!r}; choose one of: {known}") from None
    return spec, spec.build(params.with_precision(None))


def format_export(name: str, spec: ExportSpec, op: SparseOperator, params: ChartParams) -> str:
    fmt = dict(n_max=params.n_max, k_max=params.k_max, l_max=params.l_max, n_circle=params.n_circle)
    basis, flat = _BASIS[spec.space]
    lines = [
        "# qchart sparse operator export",
        f"# operator: {name}",
        f"# tag: {spec.tag}",
        f"# params: q={params.q!r} alpha={params.alpha!r} n_max={params.n_max} "
        f"k_max={params.k_max} l_max={params.l_max}",
        "# basis: " + basis.format(**fmt),
        "# flat index: " + flat.format(**fmt),
        f"# shape: {op.codomain_dim} x {op.domain_dim}",
        f"# nnz: {op.nnz}",
        "row,col,re,im",
    ]
    for j in range(op.domain_dim):
        for r, v in sorted(op.column(j).items()):
            v = complex(v)
            lines.append(f"{r},{j},{v.real!r},{v.imag!r}")
    return "\n".join(lines) + "\n"


def export_operator(name: str, params: ChartParams) -> str:
    """The full export text for catalog operator ``name``."""
    spec, op = build_export(name, params)
    return format_export(name, spec, op, params)
