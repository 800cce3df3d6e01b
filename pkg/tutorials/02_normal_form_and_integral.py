"""
Elements in normal form and the weighted trace
==============================================

Elements of the disc algebra are written as sums of bands s^m g(y).  This
script multiplies a few of them, compares with matrix products and
integrates them with the weighted trace.
"""

import numpy as np

from qchart import algebra, integration, parse_element
from qchart.params import ChartParams

p = ChartParams(q=0.5, alpha=2.0, n_max=8, k_max=8)

# s s* misses the bottom projector, s* s does not
ss = parse_element("s * sstar", p)
print("s s* band 0, first samples:", [complex(v).real for v in ss.bands[0].samples[:4]])
print("s* s == 1:", parse_element("sstar * s", p).close_to(parse_element("one", p), 0.0))

# z z is a single band of index 2
zz = parse_element("z^2", p)
print("bands of z^2:", list(zz.bands))

# evaluating on l2(N) turns the product into a matrix product
z = algebra.to_matrix(algebra.encode_generator("z", p), p, 12).toarray()
print("max |to_matrix(z^2) - Z Z|:", np.abs(algebra.to_matrix(zz, p, 8).toarray() - (z @ z)[:8, :8]).max())

# the integral sees only band 0: (1-q) sum g_0(q^n) q^(alpha n)
for text in ("1", "s", "delta(q,0)", "y^2", "z * zstar"):
    r = integration.integral_alpha(parse_element(text, p, length=60), p, 50)
    print(f"int {text:<10s} = {r.value.real:.12f}  (tail <= {r.tail_bound:.1e})")

# closed form for the constant: (1-q)/(1-q^alpha) = 2/3 here
print("(1-q)/(1-q^alpha) =", (1 - p.q) / (1 - p.q ** p.alpha))

# the trace is twisted: int(g h) = int(sigma^alpha(h) g)
rng = np.random.default_rng(3)
g = algebra.random_element(rng, p, support=10)
h = algebra.random_element(rng, p, support=10)
print("twisted trace residual:", integration.verify_twisted_trace(g, h, p).residual)

# eta_nk are orthonormal for <f, g> = int(f* g)
e = algebra.eta_element((2, -1), p)
f = algebra.eta_element((2, 1), p)
print("<e, e> =", integration.inner_product(e, e, p), " <e, f> =", integration.inner_product(e, f, p))
