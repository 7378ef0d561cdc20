"""Masked-grid domains, the Dirichlet Laplacian, and its spectral decomposition.

A domain is a set of interior nodes of a uniform grid with spacing ``h`` inside a
rectilinear bounding box, described by a boolean mask over the full box. Nodes
outside the mask are Dirichlet (zero-extension) boundary. The Laplacian is the
classical second-order stencil: diagonal ``2*d/h**2``, off-diagonal ``-1/h**2``
for each interior neighbour pair, with missing neighbours contributing nothing
(that is the zero extension).

All integrals are grid sums weighted by the cell measure ``h**d``:

    <f, g> = h**d * sum_x f(x) g(x)

and eigenvectors returned here are orthonormal with respect to that inner
product. Dense symmetric eigendecomposition only; the size guard keeps this
honest at desk scale.
"""

from __future__ import annotations

import dataclasses
import os
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.ndimage
import scipy.sparse

__all__ = [
    "GridDomain",
    "GridFunction",
    "SpectralDecomposition",
    "DisconnectedMaskError",
    "build_domain",
    "load_mask_file",
    "write_mask_file",
    "assemble_laplacian",
    "eigendecompose",
    "heat_kernel",
    "heat_apply",
    "BUILTIN_SHAPES",
]

MAX_DENSE_EIG = 4000

# 4-connectivity stencil used for component labeling in 2D.
_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class DisconnectedMaskError(ValueError):
    """Mask is empty or splits into several connected components."""

    def __init__(self, n_components: int):
        self.n_components = n_components
        super().__init__(
            f"interior mask must be one nonempty 4-connected component, "
            f"found {n_components}"
        )


@dataclasses.dataclass
class GridDomain:
    """Interior nodes of a masked uniform grid.

    Attributes
    ----------
    dim : 1 or 2.
    h : grid spacing.
    mask : boolean array over the full bounding box (1D shape ``(nx,)``,
        2D shape ``(ny, nx)``); True marks interior nodes. The outermost
        layer of the box is always False, so a zero boundary layer exists.
    name : shape label, used in reports.
    coords : ``(n, dim)`` physical node coordinates, ``coord = index * h``.
    flat_index : integer array shaped like ``mask``; rank of each interior
        node in the enumeration, -1 outside.
    """

    dim: int
    h: float
    mask: np.ndarray
    name: str
    coords: np.ndarray = dataclasses.field(repr=False)
    flat_index: np.ndarray = dataclasses.field(repr=False)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def weight(self) -> float:
        """Cell measure h**d carried by every grid sum."""
        return self.h ** self.dim

    def grid_label(self) -> str:
        if self.dim == 1:
            return f"n={self.n},h={self.h:.6g}"
        ny, nx = self.mask.shape
        return f"box={nx}x{ny},n={self.n},h={self.h:.6g}"

    def same_layout(self, other: "GridDomain") -> bool:
        return (
            self.dim == other.dim
            and self.h == other.h
            and self.mask.shape == other.mask.shape
            and bool(np.array_equal(self.mask, other.mask))
        )


@dataclasses.dataclass
class GridFunction:
    """Node values of a function on a :class:`GridDomain`."""

    domain: GridDomain
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.domain.n,):
            raise ValueError(
                f"values shape {v.shape} does not match domain size {self.domain.n}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        self.values = v

    def copy_with(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.domain, values)


def _check_mask(mask: np.ndarray, dim: int) -> None:
    if dim == 1:
        if mask.ndim != 1 or mask.size < 3:
            raise ValueError("1D mask must be a vector of length >= 3")
        if mask[0] or mask[-1]:
            raise ValueError("bounding box edge nodes must be exterior")
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            raise DisconnectedMaskError(0)
        n_comp = 1 + int(np.count_nonzero(np.diff(idx) > 1))
        if n_comp != 1:
            raise DisconnectedMaskError(n_comp)
        return
    if mask.ndim != 2 or min(mask.shape) < 3:
        raise ValueError("2D mask must be at least 3x3")
    edge = np.concatenate([mask[0], mask[-1], mask[:, 0], mask[:, -1]])
    if edge.any():
        raise ValueError("bounding box edge nodes must be exterior")
    _, n_comp = scipy.ndimage.label(mask, structure=_CROSS)
    if n_comp != 1:
        raise DisconnectedMaskError(int(n_comp))


def _finish_domain(mask: np.ndarray, h: float, dim: int, name: str) -> GridDomain:
    mask = np.ascontiguousarray(mask.astype(bool))
    _check_mask(mask, dim)
    flat_index = np.full(mask.shape, -1, dtype=np.int64)
    if dim == 1:
        idx = np.flatnonzero(mask)
        flat_index[idx] = np.arange(idx.size)
        coords = (idx.astype(float) * h)[:, None]
    else:
        iy, ix = np.nonzero(mask)
        flat_index[iy, ix] = np.arange(iy.size)
        coords = np.stack([ix.astype(float) * h, iy.astype(float) * h], axis=1)
    mask.setflags(write=False)
    coords.setflags(write=False)
    flat_index.setflags(write=False)
    return GridDomain(dim=dim, h=h, mask=mask, name=name, coords=coords,
                      flat_index=flat_index)


def _interval_mask(n: int) -> np.ndarray:
    m = np.zeros(n + 2, dtype=bool)
    m[1:-1] = True
    return m


def _square_mask(n: int) -> np.ndarray:
    m = np.zeros((n + 2, n + 2), dtype=bool)
    m[1:-1, 1:-1] = True
    return m


def _disk_mask(n: int) -> np.ndarray:
    h = 1.0 / (n + 1)
    g = np.arange(n + 2) * h
    xx, yy = np.meshgrid(g, g)
    return (xx - 0.5) ** 2 + (yy - 0.5) ** 2 < 0.25


def _l_shape_mask(n_quad: int) -> np.ndarray:
    # 2N x 2N interior box minus the open quadrant x > 1/2, y > 1/2.
    side = 2 * n_quad
    h = 1.0 / (side + 1)
    m = np.zeros((side + 2, side + 2), dtype=bool)
    m[1:-1, 1:-1] = True
    g = np.arange(side + 2) * h
    xx, yy = np.meshgrid(g, g)
    m &= ~((xx > 0.5) & (yy > 0.5))
    return m


def _slit_mask(n: int) -> np.ndarray:
    m = _square_mask(n)
    h = 1.0 / (n + 1)
    j_slit = int(round(0.5 / h))
    g = np.arange(n + 2) * h
    m[j_slit, g >= 0.5] = False
    return m


def _annulus_mask(n: int) -> np.ndarray:
    h = 1.0 / (n + 1)
    g = np.arange(n + 2) * h
    xx, yy = np.meshgrid(g, g)
    r2 = (xx - 0.5) ** 2 + (yy - 0.5) ** 2
    return (r2 < 0.25) & (r2 > 0.2 ** 2)


BUILTIN_SHAPES: dict[str, tuple[int, Callable[[int], np.ndarray]]] = {
    "interval": (1, _interval_mask),
    "square": (2, _square_mask),
    "disk": (2, _disk_mask),
    "l_shape": (2, _l_shape_mask),
    "slit": (2, _slit_mask),
    "annulus": (2, _annulus_mask),
}


def build_domain(shape: str, size: int | None = None) -> GridDomain:
    """Construct a named grid domain or load one from a mask file.

    Parameters
    ----------
    shape : one of ``interval, square, disk, l_shape, slit, annulus``, or a
        path to a mask file (see :func:`load_mask_file`).
    size : resolution parameter. For interval/square/disk/slit/annulus it is
        the number of interior nodes per box side on the unit box, so
        ``h = 1/(size+1)``. For ``l_shape`` it is the quadrant side N (box
        side 2N, ``h = 1/(2N+1)``). Ignored for mask files.
    """
    if shape in BUILTIN_SHAPES:
        if size is None or size < 1:
            raise ValueError(f"shape {shape!r} needs a positive size")
        dim, maker = BUILTIN_SHAPES[shape]
        mask = maker(size)
        if shape == "l_shape":
            h = 1.0 / (2 * size + 1)
        else:
            h = 1.0 / (size + 1)
        return _finish_domain(mask, h, dim, f"{shape}:{size}")
    if os.path.exists(shape):
        return load_mask_file(shape)
    raise ValueError(f"unknown shape {shape!r} (not a builtin, not a file)")


def load_mask_file(path: str) -> GridDomain:
    """Read a domain from a text mask file.

    Format: first line ``d h nx`` (1D) or ``d h nx ny`` (2D), then the mask as
    rows of ``0``/``1`` characters, one row per line, ``ny`` rows of width
    ``nx`` (a single row in 1D). ``1`` marks interior. Ragged rows, stray
    characters, and interior nodes touching the box edge are rejected.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip() != ""]
    if not lines:
        raise ValueError(f"{path}: empty mask file")
    head = lines[0].split()
    if len(head) not in (3, 4):
        raise ValueError(f"{path}: header must be 'd h nx [ny]'")
    dim = int(head[0])
    h = float(head[1])
    if dim not in (1, 2):
        raise ValueError(f"{path}: dimension must be 1 or 2")
    if not (h > 0):
        raise ValueError(f"{path}: spacing must be positive")
    nx = int(head[2])
    ny = int(head[3]) if dim == 2 else 1
    if len(head) == 4 and dim == 1:
        raise ValueError(f"{path}: 1D header takes no ny")
    rows = lines[1:]
    if len(rows) != ny:
        raise ValueError(f"{path}: expected {ny} mask rows, found {len(rows)}")
    grid = []
    for k, row in enumerate(rows):
        row = row.strip()
        if len(row) != nx:
            raise ValueError(f"{path}: row {k + 1} has width {len(row)}, expected {nx}")
        if set(row) - {"0", "1"}:
            raise ValueError(f"{path}: row {k + 1} contains characters other than 0/1")
        grid.append([c == "1" for c in row])
    mask = np.array(grid, dtype=bool)
    if dim == 1:
        mask = mask[0]
    name = os.path.splitext(os.path.basename(path))[0]
    return _finish_domain(mask, h, dim, f"file:{name}")


def write_mask_file(domain: GridDomain, path: str) -> None:
    """Inverse of :func:`load_mask_file`, mostly for round-trip tests."""
    mask = domain.mask if domain.dim == 2 else domain.mask[None, :]
    ny, nx = mask.shape
    with open(path, "w", encoding="ascii") as fh:
        if domain.dim == 1:
            fh.write(f"1 {domain.h!r} {nx}\n")
        else:
            fh.write(f"2 {domain.h!r} {nx} {ny}\n")
        for row in mask:
            fh.write("".join("1" if b else "0" for b in row) + "\n")


def assemble_laplacian(domain: GridDomain) -> scipy.sparse.csr_matrix:
    """Sparse symmetric Dirichlet Laplacian on the interior nodes.

    Diagonal ``2*dim/h**2``; one ``-1/h**2`` entry per interior neighbour
    pair. Neighbours outside the mask are dropped, which is the zero
    extension across the boundary.
    """
    n = domain.n
    inv_h2 = 1.0 / domain.h ** 2
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.full(n, 2.0 * domain.dim * inv_h2)]

    fi = domain.flat_index
    if domain.dim == 1:
        a = fi[:-1]
        b = fi[1:]
        ok = (a >= 0) & (b >= 0)
        pairs = [(a[ok], b[ok])]
    else:
        right_a, right_b = fi[:, :-1], fi[:, 1:]
        down_a, down_b = fi[:-1, :], fi[1:, :]
        ok_r = (right_a >= 0) & (right_b >= 0)
        ok_d = (down_a >= 0) & (down_b >= 0)
        pairs = [(right_a[ok_r], right_b[ok_r]), (down_a[ok_d], down_b[ok_d])]
    for a, b in pairs:
        rows.extend([a, b])
        cols.extend([b, a])
        vals.extend([np.full(a.size, -inv_h2)] * 2)

    mat = scipy.sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    return mat


@dataclasses.dataclass
class SpectralDecomposition:
    """Full eigendecomposition of the Dirichlet Laplacian on a domain.

    ``basis`` holds Euclidean-orthonormal eigenvector columns (as returned by
    the dense symmetric solver); the eigenvectors orthonormal in the
    ``h**d``-weighted inner product are ``basis / h**(d/2)`` and are what every
    kernel formula in this package refers to.
    """

    domain: GridDomain
    eigenvalues: np.ndarray
    basis: np.ndarray = dataclasses.field(repr=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.basis / np.sqrt(self.domain.weight)

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        """Weighted inner products <f, v_k> against the orthonormal eigenvectors."""
        return np.sqrt(self.domain.weight) * (self.basis.T @ values)

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        return (self.basis @ coeffs) / np.sqrt(self.domain.weight)

    def apply_profile(self, profile_values: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Apply sum_k m(lambda_k) <f,v_k> v_k; the weight factors cancel."""
        return self.basis @ (profile_values * (self.basis.T @ values))


def eigendecompose(
    operator: scipy.sparse.spmatrix | np.ndarray,
    domain: GridDomain,
    *,
    max_n: int = MAX_DENSE_EIG,
    verify: bool = True,
) -> SpectralDecomposition:
    """Dense symmetric eigendecomposition with post-solve verification.

    Raises if the problem exceeds ``max_n`` nodes (dense-only policy), if any
    eigenvalue fails to be strictly positive, or if residual / orthonormality
    checks fail. Verification bounds: relative residual
    ``||A v - lam v|| <= 1e-8 * lam`` per mode, orthonormality defect in the
    weighted product at most 1e-10.
    """
    n = domain.n
    if n > max_n:
        raise ValueError(
            f"domain has {n} nodes, dense eigendecomposition capped at {max_n}"
        )
    dense = operator.toarray() if scipy.sparse.issparse(operator) else np.asarray(operator)
    if dense.shape != (n, n):
        raise ValueError("operator shape does not match domain size")
    lam, q = scipy.linalg.eigh(dense)
    dec = SpectralDecomposition(domain=domain, eigenvalues=lam, basis=q)
    if verify:
        if lam[0] <= 0:
            raise ArithmeticError(f"spectral bottom not positive: {lam[0]!r}")
        resid = dense @ q - q * lam
        resid_norm = np.linalg.norm(resid, axis=0)
        rel = resid_norm / lam
        if np.max(rel) > 1e-8:
            raise ArithmeticError(
                f"eigenpair residual {np.max(rel):.3e} exceeds 1e-8 relative bound"
            )
        gram_defect = np.max(np.abs(q.T @ q - np.eye(n)))
        if gram_defect > 1e-10:
            raise ArithmeticError(
                f"orthonormality defect {gram_defect:.3e} exceeds 1e-10"
            )
    lam.setflags(write=False)
    return dec


def heat_kernel(dec: SpectralDecomposition, t: float) -> np.ndarray:
    """Heat kernel matrix K with (e^{-tA} f)(x) = h**d sum_y K(x,y) f(y).

    Equal to sum_k exp(-t lam_k) v_k(x) v_k(y) over the weighted-orthonormal
    eigenvectors. As t -> 0 the weighted action tends to the identity.
    """
    if t < 0:
        raise ValueError("heat kernel needs t >= 0")
    w = np.exp(-t * dec.eigenvalues)
    return (dec.basis * w) @ dec.basis.T / dec.domain.weight


def heat_apply(dec: SpectralDecomposition, t: float, values: np.ndarray) -> np.ndarray:
    if t < 0:
        raise ValueError("heat semigroup needs t >= 0")
    return dec.apply_profile(np.exp(-t * dec.eigenvalues), values)
