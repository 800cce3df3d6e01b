import math

import mpmath
import numpy as np
import pytest

from qchart import algebra, integration
from qchart.algebra import DiscElement
from qchart.params import ChartParams
from qchart.sparse import SparseOperator, diagonal, identity
from qchart.spectral import SpectralFunction


def params(alpha=1.0, **kw):
    return ChartParams(q=0.5, alpha=alpha, n_max=8, k_max=8, **kw)


def gen(name, p, **kw):
    return algebra.encode_generator(name, p, **kw)


def test_integral_of_one_alpha2():
    p = params(2.0)
    r = integration.integral_alpha(gen("1", p), p)
    assert abs(r.value - 2 / 3) <= r.tail_bound
    assert r.tail_bound < 1e-9
    assert r.terms_used == p.m_max


def test_integral_of_one_mpmath_oracle():
    # independent oracle: the geometric series summed by mpmath
    p = params(0.7)
    r = integration.integral_alpha(gen("1", p, length=80), p)
    exact = (1 - mpmath.mpf(0.5)) * mpmath.nsum(lambda n: mpmath.mpf(0.5) ** (0.7 * n), [0, mpmath.inf])
    assert abs(r.value - complex(exact)) <= r.tail_bound + 1e-15


def test_shift_band_integrates_to_zero():
    p = params()
    g = SpectralFunction.from_callable(lambda x: 1 + x, p.m_max, p.q)
    r = integration.integral_alpha(DiscElement.band(1, g), p)
    assert r.value == 0
    assert r.tail_bound == 0


@pytest.mark.parametrize("n", [0, 1, 5])
def test_integral_of_delta(n):
    p = params(1.5)
    r = integration.integral_alpha(gen("delta", p, index=n), p)
    assert r.value == pytest.approx((1 - p.q) * p.q ** (1.5 * n), rel=1e-14)


def test_integral_matrix_examples():
    p = params(1.0)
    r = integration.integral_alpha_matrix(identity(40), p)
    assert abs(r.value - 1) <= r.tail_bound + 1e-15
    e10 = SparseOperator(2, 2, [[(1, 1.0)], []])
    assert integration.integral_alpha_matrix(e10, p).value == 0
    r = integration.integral_alpha_matrix(diagonal([1.0, 0.0, 0.0]), p)
    assert r.value == pytest.approx(1 - p.q)
    with pytest.raises(ValueError):
        integration.integral_alpha_matrix(SparseOperator(1, 2, [[]]), p)


def test_tail_bound_is_reported_and_honest():
    p = params(0.5)
    short = integration.integral_alpha(gen("1", p, length=10), p)
    exact = (1 - p.q) / (1 - p.q ** 0.5)
    assert short.tail_bound > 0
    # for a constant the bound is attained, up to rounding
    assert abs(short.value - exact) <= short.tail_bound * (1 + 1e-12)
    assert abs(short.value - exact) == pytest.approx(short.tail_bound, rel=1e-12)


def test_jackson_integral():
    q = 0.5
    # int_0^1 x d_q x = 1/(1+q)
    assert integration.jackson_integral(lambda x: x, q, 80) == pytest.approx(1 / (1 + q), rel=1e-15)


def test_sigma_alpha_examples():
    p = params(1.0)
    g0 = gen("y", p)
    assert integration.sigma_alpha(g0, "+", p).close_to(g0, 0.0)
    g = DiscElement.band(1, SpectralFunction.from_callable(lambda x: x, p.m_max, p.q))
    assert integration.sigma_alpha(g, "+", p).close_to(g.scale(2), 0.0)
    assert integration.sigma_alpha(g, "-", p).close_to(g.scale(0.5), 0.0)
    with pytest.raises(ValueError):
        integration.sigma_alpha(g, "*", p)


def test_inner_product_eta():
    p = params(2.0)
    e = algebra.eta_element((2, 1), p, 30)
    f = algebra.eta_element((2, 0), p, 30)
    assert integration.inner_product(e, e, p) == pytest.approx(1.0, rel=1e-14)
    assert integration.inner_product(e, f, p) == 0


def test_twisted_trace_examples():
    p = params(1.0)
    one = gen("1", p)
    assert integration.verify_twisted_trace(one, one, p).residual == 0
    g = algebra.normal_form_product(gen("s", p), gen("delta", p, index=1), p)
    h = algebra.normal_form_product(gen("delta", p, index=2), gen("s*", p), p)
    assert integration.verify_twisted_trace(g, h, p).within(1e-14)
    res = integration.verify_twisted_trace(gen("z", p), gen("z*", p), p)
    assert res.within(1e-12)


def test_twisted_trace_closed_form():
    # g h = s delta_1 s* = delta_2 and sigma(h) g = q^alpha delta_1, both
    # integrate to (1-q) q^(2 alpha)
    p = params(1.3)
    g = algebra.normal_form_product(gen("s", p), gen("delta", p, index=1), p)
    h = algebra.normal_form_product(gen("delta", p, index=1), gen("s*", p), p)
    want = (1 - p.q) * p.q ** (2 * p.alpha)
    lhs = integration.integral_alpha(algebra.normal_form_product(g, h, p), p).value
    rhs = integration.integral_alpha(
        algebra.normal_form_product(integration.sigma_alpha(h, "+", p), g, p), p).value
    assert lhs == pytest.approx(want, rel=1e-14)
    assert rhs == pytest.approx(want, rel=1e-14)


def test_op_adjoint_examples():
    p = params(1.5)
    assert integration.verify_op_adjoint("y", p).residual == 0
    assert integration.verify_op_adjoint("z", p).within(1e-12)
    assert integration.verify_op_adjoint("z*", p).within(1e-12)


def test_op_adjoint_matrix_exact():
    p = params(2.0)
    assert integration.verify_op_adjoint_matrix(p, 1e-14).passed


def test_gram_matrix():
    for alpha in (0.5, 2.0):
        worst, tail = integration.gram_deviation(params(alpha))
        assert worst + tail <= 1e-10


def test_positivity_of_norm(rng):
    p = params(1.0)
    for _ in range(5):
        f = algebra.random_element(rng, p, (-1, 0, 1))
        assert integration.inner_product(f, f, p).real > 0


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_verify_integration(alpha):
    report = integration.verify_integration(params(alpha))
    assert report.passed, [c.line() for c in report if not c.passed]


def test_integral_result_addition():
    a = integration.IntegralResult(1.0, 0.1, 5)
    b = integration.IntegralResult(2.0, 0.2, 3)
    c = a + b
    assert (c.value, c.terms_used) == (3.0, 3)
    assert math.isclose(c.tail_bound, 0.3)
