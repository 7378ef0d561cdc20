"""Discrete Lebesgue, Sobolev, and Besov norms on masked grids.

All norms use the cell-weighted sums of :mod:`speclap.grid`
(``h**d * sum`` integrals, max for the sup norm). Smoothness scales come in
a homogeneous flavor (powers of the operator) and a non-homogeneous one
(powers of 1 + operator); Besov norms aggregate dyadic block norms in an
l^q sense over the truncated block range, which is lossless because blocks
outside the range vanish identically on the spectrum.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .calculus import (
    DyadicPartition,
    fractional_power,
    low_block,
    lp_block,
    shifted_power,
)
from .grid import GridDomain, GridFunction, SpectralDecomposition

__all__ = [
    "NormSpec",
    "lp_norm",
    "sobolev_norm",
    "besov_norm",
    "seminorm_pm",
    "seminorm_qm",
    "duality_pairing",
    "evaluate_norm",
    "conjugate_exponent",
]

_KINDS = ("lebesgue", "sobolev_hom", "sobolev_inhom", "besov_hom", "besov_inhom")


@dataclasses.dataclass(frozen=True)
class NormSpec:
    """Which norm to evaluate: family, smoothness s, integrability p,
    summation q (Besov families only)."""

    kind: str
    s: float = 0.0
    p: float = 2.0
    q: float = 2.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        _check_exponent(self.p)
        if self.kind.startswith("besov"):
            _check_exponent(self.q)
        if not np.isfinite(self.s):
            raise ValueError("smoothness s must be finite")


def _check_exponent(p) -> float:
    p = float(p)
    if p != np.inf and p < 1.0:
        raise ValueError(f"exponent {p} must be >= 1 or inf")
    return p


def conjugate_exponent(p) -> float:
    p = _check_exponent(p)
    if p == 1.0:
        return np.inf
    if p == np.inf:
        return 1.0
    return p / (p - 1.0)


def _values(dom: GridDomain, f) -> np.ndarray:
    if isinstance(f, GridFunction):
        if not f.domain.same_layout(dom):
            raise ValueError("grid function lives on a different domain")
        return f.values
    v = np.asarray(f, dtype=float)
    if v.shape != (dom.n,):
        raise ValueError(f"value array shape {v.shape}, domain expects ({dom.n},)")
    return v


def lp_norm(dom: GridDomain, f, p) -> float:
    """(h^d sum |f|^p)^(1/p), max of |f| when p is inf."""
    p = _check_exponent(p)
    v = _values(dom, f)
    if v.size == 0:
        return 0.0
    if p == np.inf:
        return float(np.max(np.abs(v)))
    return float((dom.weight * np.sum(np.abs(v) ** p)) ** (1.0 / p))


def sobolev_norm(
    dec: SpectralDecomposition, f: GridFunction, s: float, p,
    homogeneous: bool = True,
) -> float:
    """L^p norm of the smoothness-s power of f.

    Homogeneous uses the operator power with exponent s/2, non-homogeneous
    the shifted power (1 + operator)^(s/2). s = 0 reduces to lp_norm
    exactly in both flavors.
    """
    if s == 0:
        return lp_norm(dec.domain, f, p)
    g = fractional_power(dec, s, f) if homogeneous else shifted_power(dec, s, f)
    return lp_norm(dec.domain, g, p)


def _lq(values: list[float], q: float) -> float:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    if q == np.inf:
        return float(np.max(arr))
    return float(np.sum(arr ** q) ** (1.0 / q))


def _check_coverage(dec: SpectralDecomposition, part: DyadicPartition) -> None:
    lo = np.floor(np.log2(np.sqrt(dec.eigenvalues[0])))
    hi = np.ceil(np.log2(np.sqrt(dec.eigenvalues[-1])))
    if part.j_min > lo or part.j_max < hi:
        raise ValueError(
            f"partition range [{part.j_min}, {part.j_max}] does not cover the "
            f"spectrum (needs [{int(lo)}, {int(hi)}])"
        )


def besov_norm(
    dec: SpectralDecomposition, part: DyadicPartition, f: GridFunction,
    s: float, p, q, homogeneous: bool = True,
) -> float:
    """l^q aggregate of weighted dyadic block norms.

    Homogeneous: l^q over the whole block range of 2^(s j) ||block_j f||_p.
    Non-homogeneous: ||low cap f||_p plus the same l^q over j >= 1.
    """
    p = _check_exponent(p)
    q = _check_exponent(q)
    _check_coverage(dec, part)
    js = part.js if homogeneous else [j for j in part.js if j >= 1]
    pieces = [
        2.0 ** (s * j) * lp_norm(dec.domain, lp_block(dec, part, j, f), p)
        for j in js
    ]
    body = _lq(pieces, q)
    if homogeneous:
        return body
    low = lp_norm(dec.domain, low_block(dec, part, f), p)
    return low + body


def seminorm_pm(
    dec: SpectralDecomposition, part: DyadicPartition, f: GridFunction, m: int
) -> float:
    """L^1 norm plus sup over j >= 1 of 2^(m j) times the block L^1 norm."""
    if m < 1:
        raise ValueError("m must be >= 1")
    base = lp_norm(dec.domain, f, 1)
    sup = 0.0
    for j in part.js:
        if j < 1:
            continue
        val = 2.0 ** (m * j) * lp_norm(dec.domain, lp_block(dec, part, j, f), 1)
        sup = max(sup, val)
    return base + sup


def seminorm_qm(
    dec: SpectralDecomposition, part: DyadicPartition, f: GridFunction, m: int
) -> float:
    """Two-sided variant: sup over the whole block range, weight 2^(m |j|)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    base = lp_norm(dec.domain, f, 1)
    sup = 0.0
    for j in part.js:
        val = 2.0 ** (m * abs(j)) * lp_norm(dec.domain, lp_block(dec, part, j, f), 1)
        sup = max(sup, val)
    return base + sup


def duality_pairing(dom: GridDomain, f, g) -> float:
    """Weighted bilinear pairing h^d sum f g."""
    return float(dom.weight * np.dot(_values(dom, f), _values(dom, g)))


def evaluate_norm(
    dec: SpectralDecomposition, part: DyadicPartition | None,
    f: GridFunction, spec: NormSpec,
) -> float:
    """Dispatch a NormSpec to the matching norm function."""
    if spec.kind == "lebesgue":
        return lp_norm(dec.domain, f, spec.p)
    if spec.kind == "sobolev_hom":
        return sobolev_norm(dec, f, spec.s, spec.p, homogeneous=True)
    if spec.kind == "sobolev_inhom":
        return sobolev_norm(dec, f, spec.s, spec.p, homogeneous=False)
    if part is None:
        raise ValueError("besov norms need a dyadic partition")
    homogeneous = spec.kind == "besov_hom"
    return besov_norm(dec, part, f, spec.s, spec.p, spec.q, homogeneous)
