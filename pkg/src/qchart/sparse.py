"""Column-sparse linear maps on truncated bases.

Coefficients may be Python ``complex`` or mpmath numbers; nothing here
assumes a particular scalar type beyond ``+``, ``*``, ``abs`` and
``conjugate``.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "SparseOperator",
    "identity",
    "diagonal",
    "from_map",
    "compose",
    "add",
    "adjoint",
    "apply",
    "kron",
    "relation_residual",
    "coefficient_error",
]


class SparseOperator:
    """A linear map stored as per-column lists of ``(row, coefficient)``.

    Instances are immutable.  Rows within a column are sorted and unique and
    exact zeros are never stored.
    """

    __slots__ = ("domain_dim", "codomain_dim", "columns", "label")

    def __init__(self, domain_dim: int, codomain_dim: int, columns, label: str = ""):
        cols = []
        for j, col in enumerate(columns):
            entries = {}
            for r, v in col:
                if not 0 <= r < codomain_dim:
                    raise ValueError(f"row {r} out of range in column {j} of {label!r}")
                if r in entries:
                    raise ValueError(f"duplicate row {r} in column {j} of {label!r}")
                if v != 0:
                    entries[r] = v
            cols.append(tuple(sorted(entries.items())))
        if len(cols) != domain_dim:
            raise ValueError(f"expected {domain_dim} columns, got {len(cols)}")
        object.__setattr__(self, "domain_dim", domain_dim)
        object.__setattr__(self, "codomain_dim", codomain_dim)
        object.__setattr__(self, "columns", tuple(cols))
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("SparseOperator is immutable")

    def __repr__(self) -> str:
        return (f"SparseOperator({self.label!r}, {self.codomain_dim}x{self.domain_dim}, "
                f"nnz={self.nnz})")

    @property
    def shape(self) -> tuple[int, int]:
        return self.codomain_dim, self.domain_dim

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def column(self, j: int) -> dict:
        return dict(self.columns[j])

    def entries(self) -> Iterable[tuple[int, int, object]]:
        """Yield ``(row, col, value)`` in column-major order."""
        for j, col in enumerate(self.columns):
            for r, v in col:
                yield r, j, v

    def relabel(self, label: str) -> SparseOperator:
        return SparseOperator(self.domain_dim, self.codomain_dim, self.columns, label)

    def scale(self, c, label: str | None = None) -> SparseOperator:
        return SparseOperator(
            self.domain_dim, self.codomain_dim,
            [[(r, c * v) for r, v in col] for col in self.columns],
            self.label if label is None else label,
        )

    def map_values(self, func: Callable) -> SparseOperator:
        return SparseOperator(
            self.domain_dim, self.codomain_dim,
            [[(r, func(v)) for r, v in col] for col in self.columns], self.label,
        )

    def to_complex(self) -> SparseOperator:
        return self.map_values(complex)

    def toarray(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        for r, j, v in self.entries():
            out[r, j] = complex(v)
        return out

    def column_norms(self) -> list[float]:
        """Euclidean norm of every column; shows the growth of unbounded maps."""
        return [math.sqrt(sum(float(abs(v)) ** 2 for _, v in col)) for col in self.columns]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __hash__(self):
        return hash((self.shape, self.columns))

    def __matmul__(self, other: SparseOperator) -> SparseOperator:
        return compose(self, other)

    def __add__(self, other: SparseOperator) -> SparseOperator:
        return add(self, other)

    def __sub__(self, other: SparseOperator) -> SparseOperator:
        return add(self, other, (1, -1))

    def __mul__(self, c) -> SparseOperator:
        return self.scale(c)

    __rmul__ = __mul__

    def __neg__(self) -> SparseOperator:
        return self.scale(-1)


def identity(dim: int, one=1 + 0j, label: str = "1") -> SparseOperator:
    return SparseOperator(dim, dim, [[(j, one)] for j in range(dim)], label)


def diagonal(values: Sequence, label: str = "") -> SparseOperator:
    return SparseOperator(len(values), len(values), [[(j, v)] for j, v in enumerate(values)], label)


def from_map(
    dim: int, action: Callable[[int], Iterable[tuple[int | None, object]]],
    label: str = "", codomain_dim: int | None = None,
) -> SparseOperator:
    """Build an operator from ``action(j) -> [(row or None, coeff), ...]``.

    Rows given as ``None`` fall outside the truncation window and are dropped.
    """
    codomain_dim = dim if codomain_dim is None else codomain_dim
    columns = []
    for j in range(dim):
        acc = {}
        for r, v in action(j):
            if r is None:
                continue
            acc[r] = acc.get(r, 0) + v
        columns.append(list(acc.items()))
    return SparseOperator(dim, codomain_dim, columns, label)


def compose(a: SparseOperator, b: SparseOperator, label: str | None = None) -> SparseOperator:
    """The product ``a @ b`` (apply ``b`` first)."""
    if a.domain_dim != b.codomain_dim:
        raise ValueError(f"cannot compose {a.shape} with {b.shape}")
    acols = a.columns
    columns = []
    for col in b.columns:
        acc = {}
        for r, v in col:
            for r2, w in acols[r]:
                acc[r2] = acc.get(r2, 0) + w * v
        columns.append(list(acc.items()))
    if label is None:
        label = f"({a.label})({b.label})"
    return SparseOperator(b.domain_dim, a.codomain_dim, columns, label)


def add(
    a: SparseOperator, b: SparseOperator, weights: tuple = (1, 1), label: str | None = None
) -> SparseOperator:
    """Linear combination ``weights[0] * a + weights[1] * b``."""
    if a.shape != b.shape:
        raise ValueError(f"cannot add {a.shape} and {b.shape}")
    wa, wb = weights
    columns = []
    for ca, cb in zip(a.columns, b.columns):
        acc = {}
        for r, v in ca:
            acc[r] = wa * v
        for r, v in cb:
            acc[r] = acc.get(r, 0) + wb * v
        columns.append(list(acc.items()))
    if label is None:
        label = f"{a.label} + {b.label}"
    return SparseOperator(a.domain_dim, a.codomain_dim, columns, label)


def linear_combination(terms: Sequence[tuple[object, SparseOperator]], label: str = "") -> SparseOperator:
    if not terms:
        raise ValueError("empty linear combination")
    c0, op0 = terms[0]
    out = op0.scale(c0)
    for c, op in terms[1:]:
        out = add(out, op, (1, c))
    return out.relabel(label)


def adjoint(a: SparseOperator, label: str | None = None) -> SparseOperator:
    """Conjugate transpose (the bases involved are orthonormal)."""
    rows: list[list] = [[] for _ in range(a.codomain_dim)]
    for r, j, v in a.entries():
        rows[r].append((j, v.conjugate()))
    return SparseOperator(a.codomain_dim, a.domain_dim, rows, label or f"({a.label})*")


def apply(a: SparseOperator, vector: Sequence) -> list:
    """Matrix-vector product on a dense coefficient sequence."""
    if len(vector) != a.domain_dim:
        raise ValueError(f"vector of length {len(vector)} does not fit {a.shape}")
    out = [0] * a.codomain_dim
    for j, x in enumerate(vector):
        if x == 0:
            continue
        for r, v in a.columns[j]:
            out[r] = out[r] + v * x
    return out


def kron(a: SparseOperator, b: SparseOperator, label: str | None = None) -> SparseOperator:
    """Tensor product with row-major flat index ``i_a * dim_b + i_b``."""
    columns = []
    for ca in a.columns:
        for cb in b.columns:
            columns.append([(ra * b.codomain_dim + rb, va * vb) for ra, va in ca for rb, vb in cb])
    return SparseOperator(
        a.domain_dim * b.domain_dim, a.codomain_dim * b.codomain_dim, columns,
        label or f"{a.label} (x) {b.label}",
    )


def relation_residual(lhs: SparseOperator, rhs: SparseOperator, domain: Iterable[int]) -> float:
    """Largest relative column difference of ``lhs`` and ``rhs`` over ``domain``.

    For each column ``j`` the residual is ``|lhs e_j - rhs e_j| / max(1, |rhs e_j|)``.
    ``domain`` must be a non-empty set of columns where both sides are exact
    (see :func:`qchart.params.interior_domain`).
    """
    if lhs.shape != rhs.shape:
        raise ValueError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    domain = list(domain)
    if not domain:
        raise ValueError("empty domain: the truncation window is too small for this relation")
    worst = 0.0
    for j in domain:
        if not 0 <= j < lhs.domain_dim:
            raise ValueError(f"column {j} outside the operator domain")
        a = lhs.column(j)
        b = rhs.column(j)
        diff = 0.0
        for r in a.keys() | b.keys():
            diff += float(abs(a.get(r, 0) - b.get(r, 0))) ** 2
        scale = max(1.0, math.sqrt(sum(float(abs(v)) ** 2 for v in b.values())))
        worst = max(worst, math.sqrt(diff) / scale)
    return worst


def coefficient_error(a, b, rows: Iterable | None = None, atol: float = 1e-30) -> float:
    """Largest entrywise relative difference of two coefficient mappings.

    ``a`` and ``b`` map keys to scalars (dicts, or dense sequences).  Entries
    where both magnitudes are below ``atol`` are ignored.
    """
    if not isinstance(a, dict):
        a = dict(enumerate(a))
    if not isinstance(b, dict):
        b = dict(enumerate(b))
    keys = a.keys() | b.keys() if rows is None else rows
    worst = 0.0
    for key in keys:
        x = complex(a.get(key, 0))
        y = complex(b.get(key, 0))
        m = max(abs(x), abs(y))
        if m <= atol:
            continue
        worst = max(worst, abs(x - y) / m)
    return worst
