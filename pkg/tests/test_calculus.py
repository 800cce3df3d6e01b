import math

import numpy as np
import pytest

from qchart import algebra, calculus, disc
from qchart.params import ChartParams, disc_flat
from qchart.sparse import diagonal, identity, relation_residual
from qchart.spectral import SpectralFunction


@pytest.fixture
def p():
    return ChartParams(q=0.5, alpha=1.0, n_max=8, k_max=8, l_max=2)


def sampled(func, p, length=20, d0=None):
    return SpectralFunction.from_callable(func, length, p.q, derivative_at_zero=d0)


# -- nabla ---------------------------------------------------------------

def test_nabla_of_identity_is_one(p):
    out = calculus.nabla_q2(sampled(lambda x: x, p, d0=1), p)
    assert all(v == 1 for v in out.samples)
    assert out.value_at_zero == 1


def test_nabla_of_square(p):
    out = calculus.nabla_q2(sampled(lambda x: x * x, p, d0=0), p)
    # x (1 + q^2) at x = 1
    assert out.samples[0] == pytest.approx(1.25, rel=1e-15)
    for m, v in enumerate(out.samples):
        assert v == pytest.approx(p.q ** m * 1.25, rel=1e-14)
    assert out.value_at_zero == 0


def test_nabla_of_constant_is_zero(p):
    out = calculus.nabla_q2(SpectralFunction.constant(3.0, 10), p)
    assert all(v == 0 for v in out.samples)


def test_nabla_needs_samples(p):
    with pytest.raises(ValueError):
        calculus.nabla_q2(SpectralFunction((1.0, 2.0)), p)


def test_nabla_unknown_derivative_at_zero(p):
    f = SpectralFunction(SpectralFunction.delta(2, 10).samples, 0j, None)
    assert calculus.nabla_q2(f, p).value_at_zero is None


# -- commutator route -----------------------------------------------------

def test_ddz_of_identity_is_zero(p):
    dim = 12
    d = calculus.ddz_commutator(identity(dim), p, "line")
    assert d.nnz == 0


def test_ddz_of_z_is_identity(p):
    dim = 12
    d = calculus.ddz_commutator(disc.build_z_irreducible(p, dim), p, "line")
    # double precision: the q^(-2k) rescaling amplifies rounding by 4^k
    assert relation_residual(d, identity(dim), range(dim - 1)) <= 1e-11
    mp = p.with_precision(calculus.oracle_dps(p))
    d = calculus.ddz_commutator(disc.build_z_irreducible(mp, dim), mp, "line")
    assert relation_residual(d, identity(dim, mp.field.scalar(1)), range(dim - 1)) <= 1e-20


def test_ddz_of_y_squared(p):
    dim = 12
    y2 = disc.build_y_power_irreducible(2, p, dim)
    d = calculus.ddz_commutator(y2, p, "line")
    zs = disc.build_zstar_irreducible(p, dim)
    assert relation_residual(d, zs.scale(-1), range(dim - 1)) <= 1e-13


def test_ddzbar_of_y_squared_has_q_factor(p):
    # d/dzbar(y^2) = -q^-2 z, not -z
    dim = 12
    y2 = disc.build_y_power_irreducible(2, p, dim)
    d = calculus.ddzbar_commutator(y2, p, "line")
    z = disc.build_z_irreducible(p, dim)
    assert relation_residual(d, z.scale(-p.q ** -2), range(dim - 1)) <= 1e-12
    assert relation_residual(d, z.scale(-1), range(dim - 1)) > 0.5


def test_commutator_space_inference(p):
    disc_op = disc.build_y(p)
    assert calculus.ddz_commutator(disc_op, p).shape == disc_op.shape
    with pytest.raises(ValueError):
        calculus.ddz_commutator(disc_op, p, "chart")


# -- closed form ----------------------------------------------------------

def test_closed_form_coefficient(p):
    d = dict(calculus.ddz_closed_form(p).column(disc_flat(0, 1, p)))
    q = p.q
    # q^(-2k)(1-q^2)^-1 q^2 sqrt(1-q^(2k)) at k = 1
    assert d[disc_flat(0, 0, p)] == pytest.approx(q ** -2 / (1 - q * q) * q * q * math.sqrt(1 - q * q))
    assert d[disc_flat(1, 1, p)] == pytest.approx(-(q ** -2) / (1 - q * q) * q ** 0.5 * math.sqrt(1 - q * q))


def test_closed_form_bottom_column(p):
    d = dict(calculus.ddz_closed_form(p).column(disc_flat(0, 0, p)))
    assert list(d) == [disc_flat(1, 0, p)]


def _dense_enk(n, k, p, dim):
    # e_{nk} = q^(-alpha n/2) (1-q)^(-1/2) E_{k,n} on l2(N)
    m = np.zeros((dim, dim))
    m[k, n] = p.q ** (-p.alpha * n / 2) / math.sqrt(1 - p.q)
    return m


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_closed_form_against_dense_commutator(alpha):
    # independent oracle: numpy matrices and the commutator formula
    p = ChartParams(q=0.6, alpha=alpha, n_max=6, k_max=6)
    dim = 10
    q = p.q
    zs = np.zeros((dim, dim))
    for j in range(1, dim):
        zs[j - 1, j] = math.sqrt(1 - q ** (2 * j))
    ym2 = np.diag([q ** (-2 * j) for j in range(dim)])
    z = zs.T
    closed = calculus.ddz_closed_form(p)
    closed_bar = calculus.ddzbar_closed_form(p)
    for n in range(p.n_max - 1):
        for k in range(p.k_max - 1):
            f = _dense_enk(n, k, p, dim)
            for op, gen, sign in ((closed, zs, 1), (closed_bar, z, -1)):
                dense = sign * ym2 @ (gen @ f - f @ gen) / (1 - q * q)
                got = np.zeros((dim, dim))
                for r, v in op.column(disc_flat(n, k, p)).items():
                    n2, k2 = divmod(r, p.k_max)
                    got += v.real * _dense_enk(n2, k2, p, dim)
                assert np.allclose(got, dense, rtol=1e-12, atol=1e-12)


# -- monomials ------------------------------------------------------------

def test_monomial_examples(p):
    d = calculus.ddz_monomial(1, 0, p)
    assert (d.coefficient, d.n, d.k) == (1.0, 0, 0)
    d = calculus.ddz_monomial(2, 0, p)
    assert d.coefficient == pytest.approx(5.0)
    assert (d.n, d.k) == (1, 0)
    assert calculus.ddzbar_monomial(1, 0, p).coefficient == 0


def test_monomial_rejects_negative(p):
    with pytest.raises(ValueError):
        calculus.ddz_monomial(-1, 0, p)


# -- aggregated checks ------------------------------------------------------

@pytest.mark.parametrize("q,alpha", [(0.5, 1.0), (0.37, 2.3), (0.8, 0.5)])
def test_verify_calculus(q, alpha):
    report = calculus.verify_calculus(ChartParams(q=q, alpha=alpha, n_max=8, k_max=8))
    assert report.passed, [c.line() for c in report if not c.passed]


def test_oracle_precision_grows_with_window():
    small = calculus.oracle_dps(ChartParams(n_max=6, k_max=6))
    large = calculus.oracle_dps(ChartParams(n_max=16, k_max=16))
    assert 30 < small < large


def test_double_precision_commutator_loses_digits():
    # the reason the cancelling routes run in extended precision
    p = ChartParams(n_max=16, k_max=16)
    dim = 18
    m = algebra.to_matrix(algebra.monomial(0, 3, p, 30), p, dim)
    dbl = calculus.ddz_commutator(m, p, "line")
    mp = p.with_precision(calculus.oracle_dps(p))
    ext = calculus.ddz_commutator(algebra.to_matrix(algebra.monomial(0, 3, mp, 30), mp, dim), mp, "line")
    err = max(abs(complex(v) - complex(dict(ext.column(j)).get(r, 0)))
              for r, j, v in dbl.entries() if j < dim - 2)
    assert err > 1e-14


def test_spectral_rule_with_diagonal(p):
    dim = 10
    f = sampled(lambda x: x * x, p, 2 * dim + 4, 0)
    fy2 = diagonal(calculus.compose_square(f).samples[:dim])
    assert fy2.shape == (dim, dim)
    assert calculus.verify_spectral_rule(p).passed
