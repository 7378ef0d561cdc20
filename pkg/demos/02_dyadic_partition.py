"""Dyadic partition of unity on the square root of the spectrum.

Shows the smooth bump family, the two partition identities, which blocks a
finite spectrum can actually resolve, and the effective support constants
used for that decision.
"""

import numpy as np

from speclap.calculus import make_dyadic_partition
from speclap.grid import assemble_laplacian, build_domain, eigendecompose

dom = build_domain("interval", 200)
dec = eigendecompose(assemble_laplacian(dom), dom)
part = make_dyadic_partition(dec)

print(f"smoothness order m = {part.smoothness_order}")
print(f"block range j = {part.j_min} .. {part.j_max}")

# The mother bump lives on (1/2, 2) with value 1 at the dyadic center;
# block j is the same profile moved to scale 2^j in sqrt(lambda).
x = np.linspace(0.4, 2.2, 10)
print("\nmother bump on a few points:")
for xi, v in zip(x, part.phi0(x)):
    print(f"  phi0({xi:.3f}) = {v:.6f}")

# Identity 1: away from the bottom of the range the blocks alone sum to 1.
roots = np.sqrt(dec.eigenvalues)
total = np.zeros_like(roots)
for j in part.js:
    total += part.phi(j, roots)
print(f"\nblock-sum residual over the spectrum: {np.max(np.abs(total - 1.0)):.2e}")

# Identity 2: with the low cap psi the sum extends down to 0.
xs = np.linspace(0.0, 2.0, 200)
low = part.psi(xs)
for j in range(1, part.j_max + 1):
    low += part.phi(j, xs)
print(f"low-cap residual near zero:           {np.max(np.abs(low - 1.0)):.2e}")

# A finite spectrum only resolves blocks whose effective support sits
# inside [sqrt(lambda_1), sqrt(lambda_n)]; the support endpoints at the
# default tolerance are fixed constants of the bump construction.
lo, hi = part.effective_support()
print(f"\neffective support of the mother bump: ({lo:.6f}, {hi:.6f})")
print(f"usable blocks on interval:200: {part.usable_js(dec)}")

for n in (100, 400, 1600):
    d2 = build_domain("interval", n)
    dc2 = eigendecompose(assemble_laplacian(d2), d2)
    p2 = make_dyadic_partition(dc2)
    print(f"usable blocks on interval:{n}: {p2.usable_js(dc2)}")
