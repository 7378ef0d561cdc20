"""Masked-grid domains and their Dirichlet spectra.

Builds each builtin shape, reports its size and the bottom of the spectrum,
and shows the bottom eigenvalue of the interval converging to pi^2 under
refinement. Also demonstrates loading a domain from a text mask file.
"""

import math
import os
import tempfile

import numpy as np

from speclap.grid import (
    BUILTIN_SHAPES,
    assemble_laplacian,
    build_domain,
    eigendecompose,
)

print("builtin shapes at size 16")
print(f"{'shape':10s} {'dim':>3s} {'nodes':>6s} {'h':>10s} {'lambda_1':>10s}")
for shape in BUILTIN_SHAPES:
    dom = build_domain(shape, 16)
    dec = eigendecompose(assemble_laplacian(dom), dom)
    print(f"{shape:10s} {dom.dim:3d} {dom.coords.shape[0]:6d} "
          f"{dom.h:10.5f} {dec.eigenvalues[0]:10.4f}")

# On the unit interval the discrete bottom eigenvalue is known in closed
# form, (4/h^2) sin^2(pi h / 2), and tends to pi^2 as h -> 0.
print()
print("interval refinement: lambda_1 vs pi^2")
for n in (25, 50, 100, 200, 400):
    dom = build_domain("interval", n)
    dec = eigendecompose(assemble_laplacian(dom), dom)
    lam1 = dec.eigenvalues[0]
    print(f"n={n:4d}  lambda_1={lam1:.8f}  rel gap {abs(lam1 - math.pi**2) / math.pi**2:.2e}")

# A domain can also come from a mask file: a header line "d h nx ny"
# followed by rows of 0/1 characters, 1 marking interior nodes. The frame
# of the bounding box must be exterior.
mask = [
    "0000000",
    "0111110",
    "0111110",
    "0110000",
    "0110000",
    "0000000",
]
path = os.path.join(tempfile.mkdtemp(), "flag.txt")
with open(path, "w") as fh:
    fh.write("2 0.125 7 6\n")
    fh.write("\n".join(mask) + "\n")
dom = build_domain(path)
dec = eigendecompose(assemble_laplacian(dom), dom)
print()
print(f"mask file domain: name={dom.name} nodes={dom.coords.shape[0]} "
      f"lambda_1={dec.eigenvalues[0]:.4f}")

# The eigenbasis is orthonormal in the plain coefficient inner product;
# measure weights enter through the operator formulas instead.
gram = dec.basis.T @ dec.basis
print(f"basis orthonormality residual: {np.max(np.abs(gram - np.eye(gram.shape[0]))):.2e}")
