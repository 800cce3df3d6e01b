import math

import pytest

from qchart import su2
from qchart.params import ChartParams, chart_flat, circle_flat
from qchart.sparse import adjoint, compose, identity, relation_residual


@pytest.fixture
def p():
    return ChartParams(q=0.5, alpha=1.0, n_max=7, k_max=7, l_max=3)


def col(op, j):
    return dict(op.column(j))


def test_circle_shift(p):
    u, us = su2.build_u(p), su2.build_ustar(p)
    assert col(u, circle_flat(0, p)) == {circle_flat(1, p): 1}
    assert col(us, circle_flat(0, p)) == {circle_flat(-1, p): 1}
    assert relation_residual(compose(us, u), identity(p.n_circle), [circle_flat(2, p)]) == 0.0


def test_dt_examples(p):
    dt = su2.build_dt(p)
    assert col(dt, circle_flat(0, p)) == {}
    assert col(dt, circle_flat(3, p)) == {circle_flat(3, p): 3j}
    assert col(dt, circle_flat(-2, p)) == {circle_flat(-2, p): -2j}


def test_generator_examples(p):
    c, d, D = su2.build_c(p).matrix, su2.build_d(p).matrix, su2.build_d_op(p).matrix
    assert col(c, chart_flat(0, 2, 0, p)) == pytest.approx({chart_flat(0, 2, 1, p): 0.25})
    for k in range(p.k_max):
        for l in range(-p.l_max, p.l_max + 1):
            assert col(D, chart_flat(0, k, l, p)) == {}
    assert col(d, chart_flat(1, 0, -1, p)) == pytest.approx({chart_flat(1, 1, -1, p): math.sqrt(3) / 2})


def test_product_operator_adjoint(p):
    c = su2.build_c(p)
    assert adjoint(c.matrix).columns == c.adjoint().matrix.columns


def test_su2_relations(p):
    report = su2.verify_su2_relations(p)
    assert report.passed, [c.line() for c in report if not c.passed]
    names = {c.name for c in report}
    assert {"cd = q dc", "dd* + cc* = 1", "[c, d^op] = 0"} <= names


@pytest.mark.parametrize("q,alpha", [(0.2, 0.5), (0.8, 3.0)])
def test_su2_relations_other_params(q, alpha):
    assert su2.verify_su2_relations(ChartParams(q=q, alpha=alpha, n_max=6, k_max=6, l_max=2)).passed


def test_too_small_window():
    with pytest.raises(ValueError):
        su2.verify_su2_relations(ChartParams(n_max=4, k_max=4, l_max=1))


def test_blocks_of_c_are_identical(p):
    blocks = su2.block_decompose(su2.build_c(p).matrix, "n", p)
    assert len(blocks) == p.n_max
    ref = su2.build_c_irreducible(p)
    for b in blocks:
        assert b.columns == ref.columns
    # q^k e_k (x) b_{l+1} inside a block
    nc = p.n_circle
    assert col(ref, 2 * nc + circle_flat(0, p)) == {2 * nc + circle_flat(1, p): 0.25}


def test_blocks_of_d_op_are_backward_shifts(p):
    blocks = su2.block_decompose(su2.build_d_op(p).matrix, "k", p)
    assert len(blocks) == p.k_max
    nc = p.n_circle
    for b in blocks:
        assert b.columns == blocks[0].columns
        assert col(b, 0 * nc + circle_flat(0, p)) == {}
        (r, v), = col(b, 3 * nc + circle_flat(0, p)).items()
        assert r == 2 * nc + circle_flat(0, p)
        assert v == pytest.approx(math.sqrt(1 - p.q ** 6))


def test_block_decompose_identity(p):
    for b in su2.block_decompose(identity(p.n_chart), "k", p):
        assert b.columns == identity(b.domain_dim).columns


def test_block_decompose_rejects_mixing(p):
    with pytest.raises(ValueError):
        su2.block_decompose(su2.build_d(p).matrix, "k", p)
    with pytest.raises(ValueError):
        su2.block_decompose(su2.build_c(p).matrix, "l", p)


def test_verify_blocks_bit_identical(p):
    report = su2.verify_blocks(p)
    assert report.passed
    assert all(c.residual == 0.0 for c in report)
