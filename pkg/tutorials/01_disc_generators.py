"""
The quantum disc on a finite window
===================================

Build the generators z, z*, y of the quantum disc as sparse matrices and
check their relations on the columns the truncation does not disturb.
"""

import numpy as np

from qchart import disc
from qchart.params import ChartParams, disc_flat, interior_disc_domain
from qchart.sparse import add, compose, identity, relation_residual

np.set_printoptions(precision=4, suppress=True, linewidth=120)

# q = 1/2 and a small window, so the matrices fit on screen
p = ChartParams(q=0.5, alpha=1.0, n_max=6, k_max=6)

# on l2(N), z is a weighted shift: z e_j = sqrt(1 - q^(2j+2)) e_{j+1}
z = disc.build_z_irreducible(p)
zs = disc.build_zstar_irreducible(p)
y = disc.build_y_irreducible(p)
print(z.toarray().real)
print("spectrum of y:", np.diag(y.toarray().real))

# z*z - q^2 zz* = 1 - q^2 holds except on the last column,
# where z pushes e_5 out of the window
lhs = add(compose(zs, z), compose(z, zs), (1, -p.q ** 2))
rhs = identity(z.domain_dim).scale(1 - p.q ** 2)
print("residual on columns 0..4:", relation_residual(lhs, rhs, range(5)))
print("residual on column 5:    ", relation_residual(lhs, rhs, [5]))

# on L2(D_q) the basis is e_nk: left multiplication moves k,
# right multiplication (the opposite algebra) moves n
zl = disc.build_z(p)
zr = disc.build_z_op(p)
print("z e_{3,0}   =", dict(zl.column(disc_flat(3, 0, p))))
print("z^op e_{1,0} =", dict(zr.column(disc_flat(1, 0, p))))

# the two actions commute wherever neither leaves the window
inner = interior_disc_domain((1, 1), p)
print("[z, z^op] on the interior:", relation_residual(compose(zl, zr), compose(zr, zl), inner))

# every relation at once
report = disc.verify_disc_relations(p)
print(f"{sum(c.passed for c in report)}/{len(report)} disc relations pass")
