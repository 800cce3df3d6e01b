"""
Partial derivatives on the quantum disc
=======================================

d/dz and d/dzbar are computed three ways: as commutators with z* and z,
from their action on the basis e_nk, and on monomials z^n z*^k.  This
script compares them and shows why the commutators need extra digits.
"""

import numpy as np

from qchart import algebra, calculus, disc
from qchart.params import ChartParams
from qchart.spectral import SpectralFunction

p = ChartParams(q=0.5, alpha=1.0, n_max=10, k_max=10)

# the q^2 difference quotient of x^2 is x(1 + q^2), and tends to f'(0) = 0
f = SpectralFunction.from_callable(lambda x: x * x, 60, p.q, derivative_at_zero=0)
nab = calculus.nabla_q2(f, p)
print("nabla x^2 at 1, q^2, q^4:", [nab.samples[m].real for m in (0, 2, 4)])
print("nabla x^2 at q^50:", calculus.compose_square(nab).samples[25].real)

# d/dz z = 1 and d/dz y^2 = -z* through the commutator on l2(N)
dim = 8
dz = calculus.ddz_commutator(disc.build_z_irreducible(p, dim), p, "line")
print(np.round(dz.toarray().real, 10)[:4, :4])

# the monomial rule: d/dz z^2 = q^-2 (1 + q^2) z, i.e. 5 z at q = 1/2
print(calculus.ddz_monomial(2, 0, p))

# d/dzbar picks up q^-2 on functions of y^2: d/dzbar y^2 = -q^-2 z
y2 = disc.build_y_power_irreducible(2, p, dim)
dzb = calculus.ddzbar_commutator(y2, p, "line").toarray()
zz = disc.build_z_irreducible(p, dim).toarray()
print("d/dzbar y^2 = -q^-2 z:", np.allclose(dzb[:, :-1], -p.q ** -2 * zz[:, :-1]))

# in double precision the commutator loses about 2k log10(1/q) digits on
# column k; with 60 digits the three routes agree to rounding
m = algebra.to_matrix(algebra.monomial(1, 3, p, 40), p, 14)
dbl = calculus.ddz_commutator(m, p, "line")
mp = p.with_precision(60)
ext = calculus.ddz_commutator(algebra.to_matrix(algebra.monomial(1, 3, mp, 40), mp, 14), mp, "line")
gap = max(abs(complex(v) - complex(dict(ext.column(j)).get(r, 0))) for r, j, v in dbl.entries() if j < 10)
print(f"double vs 60-digit commutator: {gap:.1e}")

# all routes, Leibniz rule and the *-compatibility in one report
report = calculus.verify_calculus(p)
for check in report.checks[:6]:
    print(check.line())
print(f"{sum(c.passed for c in report)}/{len(report)} calculus checks pass")
