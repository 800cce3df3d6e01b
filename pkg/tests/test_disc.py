import math

import numpy as np
import pytest

from qchart import disc
from qchart.params import ChartParams, disc_flat, interior_disc_domain, interior_line_domain
from qchart.sparse import (
    SparseOperator,
    add,
    adjoint,
    apply,
    compose,
    diagonal,
    identity,
    relation_residual,
)

SQRT3_2 = math.sqrt(3) / 2


@pytest.fixture
def p():
    return ChartParams(q=0.5, alpha=1.0, n_max=8, k_max=8, l_max=2)


def col(op, j):
    return dict(op.column(j))


def test_shift_examples(p):
    s, ss = disc.build_shift(p), disc.build_shift_adjoint(p)
    assert col(s, 0) == {1: 1}
    assert col(ss, 0) == {}
    one = identity(s.domain_dim)
    assert relation_residual(compose(ss, s), one, [2]) == 0.0


def test_projector_examples(p):
    p0 = disc.build_projector(0, p)
    assert col(p0, 0) == {0: 1}
    assert col(p0, 1) == {}


def test_irreducible_generators(p):
    z, zs, y = disc.build_z_irreducible(p), disc.build_zstar_irreducible(p), disc.build_y_irreducible(p)
    assert col(z, 0) == pytest.approx({1: SQRT3_2})
    assert col(zs, 0) == {}
    assert col(y, 2) == pytest.approx({2: 0.25})


def test_irreducible_against_dense_oracle(p):
    # dense oracle built directly from the weighted-shift formulas
    dim = 10
    q = p.q
    zd = np.zeros((dim, dim))
    for j in range(dim - 1):
        zd[j + 1, j] = math.sqrt(1 - q ** (2 * (j + 1)))
    yd = np.diag([q ** j for j in range(dim)])
    assert np.allclose(disc.build_z_irreducible(p, dim).toarray(), zd, atol=1e-15)
    assert np.allclose(disc.build_zstar_irreducible(p, dim).toarray(), zd.T, atol=1e-15)
    assert np.allclose(disc.build_y_irreducible(p, dim).toarray(), yd, atol=1e-15)


def test_enk_generators(p):
    z, zs, y = disc.build_z(p), disc.build_zstar(p), disc.build_y(p)
    for n in range(p.n_max):
        assert col(zs, disc_flat(n, 0, p)) == {}
    assert col(z, disc_flat(3, 0, p)) == pytest.approx({disc_flat(3, 1, p): SQRT3_2})
    assert col(y, disc_flat(0, 1, p)) == pytest.approx({disc_flat(0, 1, p): 0.5})


def test_opposite_generators(p):
    zo, zeta = disc.build_z_op(p), disc.build_zeta_op(p)
    for k in range(p.k_max):
        assert col(zo, disc_flat(0, k, p)) == {}
    assert col(zo, disc_flat(1, 0, p)) == pytest.approx({disc_flat(0, 0, p): math.sqrt(2) * SQRT3_2})
    assert col(zeta, disc_flat(1, 0, p)) == pytest.approx({disc_flat(0, 0, p): SQRT3_2})


def test_zeta_is_rescaled_z_op():
    p = ChartParams(q=0.3, alpha=2.5, n_max=6, k_max=6)
    zo, zeta = disc.build_z_op(p), disc.build_zeta_op(p)
    for n in range(1, p.n_max):
        j = disc_flat(n, 2, p)
        (r1, v1), = zo.column(j).items()
        (r2, v2), = zeta.column(j).items()
        assert r1 == r2 == disc_flat(n - 1, 2, p)
        assert v2 == pytest.approx(math.sqrt(1 - p.q ** (2 * n)), rel=1e-15)
        assert v1 == pytest.approx(p.q ** (-p.alpha / 2) * v2, rel=1e-14)


def test_quantum_disc_relation_on_interior(p):
    z, zs = disc.build_z(p), disc.build_zstar(p)
    one = disc.build_identity_disc(p)
    q2 = p.q ** 2
    lhs = add(compose(zs, z), compose(z, zs), (1, -q2))
    domain = interior_disc_domain((0, 1), p)
    assert relation_residual(lhs, one.scale(1 - q2), domain) <= 1e-15


def test_left_right_commute(p):
    domain = interior_disc_domain((1, 1), p)
    for left in (disc.build_z(p), disc.build_zstar(p), disc.build_y(p)):
        for right in (disc.build_z_op(p), disc.build_zstar_op(p), disc.build_y_op(p)):
            assert relation_residual(compose(left, right), compose(right, left), domain) <= 1e-15


def test_verify_disc_relations_passes(p):
    report = disc.verify_disc_relations(p)
    assert report.passed, [c.line() for c in report if not c.passed]
    assert len(report) > 20


def test_verify_disc_relations_fails_below_rounding(p):
    assert not disc.verify_disc_relations(p, tol=1e-300).passed


# -- sparse helpers ------------------------------------------------------

def test_compose_with_identity(p):
    z = disc.build_z(p)
    one = identity(z.domain_dim)
    assert compose(one, z).columns == z.columns
    assert compose(z, one).columns == z.columns


def test_relation_residual_zero_for_equal(p):
    z = disc.build_z(p)
    assert relation_residual(z, z, range(z.domain_dim)) == 0.0


def test_adjoint_and_apply_against_dense(rng):
    dense = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    op = SparseOperator(4, 5, [[(r, dense[r, j]) for r in range(5)] for j in range(4)])
    assert np.allclose(op.toarray(), dense)
    assert np.allclose(adjoint(op).toarray(), dense.conj().T)
    v = rng.normal(size=4)
    assert np.allclose(apply(op, list(v)), dense @ v)


def test_sparse_rejects_bad_columns():
    with pytest.raises(ValueError):
        SparseOperator(1, 2, [[(2, 1.0)]])
    with pytest.raises(ValueError):
        SparseOperator(1, 2, [[(0, 1.0), (0, 2.0)]])
    with pytest.raises(ValueError):
        SparseOperator(2, 2, [[(0, 1.0)]])


def test_operators_are_immutable(p):
    with pytest.raises(AttributeError):
        disc.build_z(p).label = "x"


def test_line_interior():
    assert interior_line_domain(2, 6) == [2, 3]
    assert diagonal([1, 2]).toarray().tolist() == [[1, 0], [0, 2]]
