"""Smoothness norms, the Besov sandwich, and interpolation inequalities.

Computes Sobolev and Besov norms of sample functions, verifies the lift
identity and the two-sided Besov comparison numerically, and walks through
one multiplicative interpolation bound with its low/high split certificate.
"""

import numpy as np

from speclap.calculus import make_dyadic_partition, shifted_power
from speclap.grid import GridFunction, assemble_laplacian, build_domain, eigendecompose
from speclap.harness import GNIndices, gn_split_certificate, validate_gn_indices
from speclap.spaces import besov_norm, lp_norm, sobolev_norm

dom = build_domain("interval", 200)
dec = eigendecompose(assemble_laplacian(dom), dom)
part = make_dyadic_partition(dec)

rng = np.random.default_rng(3)
f = GridFunction(dom, rng.standard_normal(200))

print("norms of one rough sample function")
for s in (0.0, 0.5, 1.0, 2.0):
    hs = sobolev_norm(dec, f, s, 2)
    b1 = besov_norm(dec, part, f, s, 2, 1)
    binf = besov_norm(dec, part, f, s, 2, np.inf)
    print(f"  s={s:3.1f}  sobolev={hs:10.4f}  besov(q=1)={b1:10.4f}  "
          f"besov(q=inf)={binf:10.4f}")

# The summation index only tightens the Besov norm: q=1 dominates q=inf,
# and the Sobolev norm sits between them up to constants.
print("\nsandwich check: besov(q=inf) <= C sobolev <= C' besov(q=1)")
s = 1.0
hs = sobolev_norm(dec, f, s, 2)
print(f"  upper constant {besov_norm(dec, part, f, s, 2, np.inf) / hs:.4f}")
print(f"  lower constant {hs / besov_norm(dec, part, f, s, 2, 1):.4f}")

# Lift identity: applying the shifted power of order s0 moves the
# inhomogeneous smoothness index by exactly s0, at any exponent p.
print("\nlift identity residuals")
for p in (1, 2, np.inf):
    a = sobolev_norm(dec, shifted_power(dec, 1.0, f), 0.5, p, homogeneous=False)
    b = sobolev_norm(dec, f, 1.5, p, homogeneous=False)
    print(f"  p={p}: rel residual {abs(a - b) / b:.2e}")

# One interpolation bound: the smoothness-s norm at exponent p against a
# product of a Lebesgue norm and a stronger smoothness norm. The index
# tuple must satisfy a dimensional balance, checked up front.
idx = GNIndices(s=1.0, p=2.0, theta=0.5, r=2.0, s0=2.0, r0=2.0)
v = validate_gn_indices(idx, d=dom.dim)
print(f"\nindex tuple admissible: {v.admissible}")

lhs = sobolev_norm(dec, f, idx.s, idx.p)
rhs = lp_norm(dom, f, idx.r) ** idx.theta * sobolev_norm(dec, f, idx.s0, idx.r0) ** (1 - idx.theta)
print(f"norm {lhs:.4f} <= product bound {rhs:.4f} (ratio {lhs / rhs:.4f})")

# The constructive proof splits f at a dyadic cut N: low blocks go through
# one route, high blocks through the other, and the best N balances the
# two. The certificate reports the chosen cut, the resulting bound, and
# the whole bound-versus-cut curve.
cert = gn_split_certificate(dec, part, idx, f)
print(f"\nsplit certificate: cut N*={cert.n_star} (theory {cert.n_theory:.2f})")
print(f"  bound {cert.bound:.4f} >= norm {cert.norm_value:.4f}")
print(f"  routes: {cert.route_low} / {cert.route_high}")
print("  bound by cut:")
for nc in sorted(cert.bounds_by_cut):
    marker = " <-- chosen" if nc == cert.n_star else ""
    print(f"    N={nc:2d}  {cert.bounds_by_cut[nc]:12.4f}{marker}")
