"""Acceptance suite at desk scale: q = 1/2, alpha in {0.5, 1, 2}, window 16 x 16 x 4.

Each test prints one ``PASS``/``FAIL`` line for its criterion.  Under pytest
the lines are also collected into a summary section at the end of the run;
``python3 tests/test_acceptance.py`` prints them directly.
"""
import functools
import math
import sys

import numpy as np
import pytest

from qchart import algebra, calculus, disc, integration, su2
from qchart.params import ChartParams, EtaIndex

ALPHAS = (0.5, 1.0, 2.0)
RESULTS: list[str] = []


def desk(alpha: float) -> ChartParams:
    return ChartParams(q=0.5, alpha=alpha, n_max=16, k_max=16, l_max=4)


def record(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


@functools.lru_cache(maxsize=None)
def relation_checks(alpha: float) -> tuple:
    p = desk(alpha)
    return tuple(disc.verify_disc_relations(p, 1e-12)) + tuple(su2.verify_su2_relations(p, 1e-12))


def failures(report) -> list[str]:
    return [c.line() for c in report if not c.passed]


def _is_commutator(name: str) -> bool:
    return name.split(": ")[-1].startswith("[")


def _long_length(p: ChartParams, base: int) -> int:
    # enough samples that the integral tail bound drops below ~1e-12
    extra = math.ceil(math.log(1e-12 * (1 - p.q ** p.alpha)) / (p.alpha * math.log(p.q)))
    return base + max(8, extra)


def _shift_delta(k: int, n: int, p: ChartParams, length: int):
    """``s^{#k} delta_{q^n}(y)`` built from generator products."""
    out = algebra.encode_generator("delta", p, index=n, length=length)
    step = algebra.encode_generator("s" if k >= 0 else "s*", p, length=length)
    for _ in range(abs(k)):
        out = algebra.normal_form_product(step, out, p)
    return out


def test_criterion_01_orthonormality():
    worst_gram = 0.0
    worst_raw = 0.0
    size = 5
    for alpha in ALPHAS:
        p = desk(alpha)
        dev, tail = integration.gram_deviation(p)
        worst_gram = max(worst_gram, dev + tail)
        length = _long_length(p, 2 * size)
        idx = [(n, k) for n in range(size) for k in range(-n, size)]
        elems = {i: _shift_delta(i[1], i[0], p, length) for i in idx}
        for i in idx:
            for j in idx:
                r = integration.inner_product_result(elems[i], elems[j], p)
                want = (1 - p.q) * p.q ** (alpha * i[0]) if i == j else 0.0
                worst_raw = max(worst_raw, abs(r.value - want) + r.tail_bound)
    ok = worst_gram <= 1e-10 and worst_raw <= 1e-10
    record(1, "orthonormality of eta_nk",
           ok, f"Gram deviation+tail {worst_gram:.2e}, unnormalized form {worst_raw:.2e} (tol 1e-10)")


def test_criterion_02_algebra_relations():
    bad, worst, count = [], 0.0, 0
    for alpha in ALPHAS:
        for c in relation_checks(alpha):
            if _is_commutator(c.name):
                continue
            count += 1
            worst = max(worst, c.residual)
            if not c.passed:
                bad.append(c.line())
    record(2, "algebra relations (disc, SU(2), opposite)", not bad,
           f"{count} checks, max residual {worst:.2e} (tol 1e-12)" + ("; " + bad[0] if bad else ""))


def test_criterion_03_commutation():
    bad, worst, count = [], 0.0, 0
    for alpha in ALPHAS:
        for c in relation_checks(alpha):
            if not _is_commutator(c.name):
                continue
            count += 1
            worst = max(worst, c.residual)
            if not c.passed:
                bad.append(c.line())
    record(3, "left and right generators commute", not bad and count > 0,
           f"{count} commutators, max residual {worst:.2e} (tol 1e-12)")


def test_criterion_04_derivative_routes():
    bad, worst = [], 0.0
    for alpha in ALPHAS:
        p = desk(alpha)
        for report in (calculus.verify_basis_routes(p, 1e-10), calculus.verify_monomial_routes(p, 1e-10, degree=4)):
            worst = max(worst, report.max_residual)
            bad += failures(report)
    record(4, "closed form = commutator = monomial formula", not bad,
           f"max relative disagreement {worst:.2e} (tol 1e-10)")


def test_criterion_05_twisted_leibniz():
    bad, worst = [], 0.0
    for alpha in ALPHAS:
        report = calculus.verify_leibniz(desk(alpha), 1e-10)
        worst = max(worst, report.max_residual)
        bad += failures(report)
    record(5, "twisted Leibniz rule", not bad, f"max residual {worst:.2e} (tol 1e-10)")


def test_criterion_06_twisted_trace_and_op_adjoint():
    trace = adj = mat = 0.0
    for alpha in ALPHAS:
        p = desk(alpha)
        rng = np.random.default_rng(1000 + int(10 * alpha))
        pool = [algebra.random_element(rng, p, (-1, 0, 1), support=p.m_max - 4) for _ in range(20)]
        for g in pool:
            for h in pool:
                trace = max(trace, integration.verify_twisted_trace(g, h, p).residual)
        for x in ("z", "z*", "y"):
            adj = max(adj, integration.verify_op_adjoint(x, p, pool).residual)
        mat = max(mat, integration.verify_op_adjoint_matrix(p, 1e-14).max_residual)
    ok = trace <= 1e-10 and adj <= 1e-10 and mat <= 1e-14
    record(6, "twisted trace and opposite adjoint", ok,
           f"trace {trace:.2e}, <f x, g> rule {adj:.2e} (tol 1e-10); "
           f"adjoint(z^op) = q^-alpha z*^op {mat:.2e} (tol 1e-14)")


def test_criterion_07_block_decomposition():
    report = su2.verify_blocks(desk(1.0), tol=0.0)
    record(7, "n-blocks of (c,d) and k-blocks of (c^op,d^op)", report.passed,
           f"{len(report)} families, largest entry gap {report.max_residual!r} (bit-identical required)")


def test_criterion_08_integral_closed_forms():
    worst_one = 0.0
    worst_shift = 0.0
    for alpha in ALPHAS:
        p = desk(alpha)
        r = integration.integral_alpha(algebra.encode_generator("1", p), p)
        exact = (1 - p.q) / (1 - p.q ** alpha)
        worst_one = max(worst_one, abs(r.value - exact) - r.tail_bound)
        rng = np.random.default_rng(int(100 * alpha))
        for _ in range(20):
            shifted = algebra.random_element(rng, p, (-2, -1, 1, 2))
            worst_shift = max(worst_shift, abs(integration.integral_alpha(shifted, p).value))
    ok = worst_one <= 1e-12 and worst_shift == 0.0
    record(8, "int 1 = (1-q)/(1-q^alpha), shift bands integrate to 0", ok,
           f"excess over tail bound {max(worst_one, 0.0):.2e} (tol 1e-12), shift bands {worst_shift!r} (exact 0)")


def test_criterion_09_symbolic_matrix_consistency():
    bad, worst = [], 0.0
    recon = 0.0
    for alpha in ALPHAS:
        p = desk(alpha)
        report = algebra.verify_algebra(p, 1e-12, pairs=50)
        for name in ("to_matrix(ab) = to_matrix(a) to_matrix(b), 50 pairs", "to_matrix(a*) = to_matrix(a)*, 50 elements"):
            worst = max(worst, report[name].residual)
            if not report[name].passed:
                bad.append(report[name].line())
        rng = np.random.default_rng(int(7 * alpha))
        for _ in range(10):
            a = algebra.random_element(rng, p)
            back = algebra.reconstruct(algebra.basis_expand(a, p), p)
            for m, g in a.bands.items():
                top = min(p.n_max, p.k_max - m) if m >= 0 else min(p.n_max + m, p.k_max)
                for j in range(top):
                    x, y = g.samples[j], back.bands[m].samples[j]
                    recon = max(recon, abs(x - y) / max(1.0, abs(x)))
    # exact up to the two roundings of the coefficient weights
    ok = not bad and recon <= 4 * sys.float_info.epsilon
    record(9, "to_matrix is a *-homomorphism, eta expansion reconstructs", ok,
           f"homomorphism {worst:.2e} (tol 1e-12), reconstruction {recon:.2e} (<= 4 ulp)")


def test_criterion_10_nabla_limit():
    report = calculus.verify_nabla(desk(1.0), m=25, limit_tol=1e-8)
    ident = report["nabla x = 1"]
    limit = report["nabla x^2 at q^(2*25) -> f'(0)"]
    record(10, "nabla_{q^2} limit at 0", ident.residual == 0.0 and limit.residual <= 1e-8,
           f"nabla x - 1 = {ident.residual!r} (exact), |nabla x^2 (q^50) - 0| = {limit.residual:.2e} (tol 1e-8)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
