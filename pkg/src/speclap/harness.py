"""Executable checks for the quantitative behavior of the spectral calculus.

Each check measures something concrete on a grid domain (an operator norm, a
fitted rate, a sup of ratios over a random ensemble) and compares it against
a target that is either exact arithmetic, a closed-form rate, or the same
measurement on a once-refined grid. The outcome is a CheckReport; checks
never silently weaken their own criteria.

Conventions used throughout:

* rates for dyadic blocks are measured against block index j at the
  square-root spectral scale;
* t-windows for semigroup fits are placed inside the resolved part of the
  spectrum, scaled by the fractional exponent alpha;
* refinement means one step of grid halving (side n to 2n+1, quadrant N to
  2N), with ensembles regenerated from the same seed and recipe;
* checks report status "pass", "fail", or "inconclusive"; fit checks with
  a poor linear correlation report inconclusive rather than pass.
"""

from __future__ import annotations

import dataclasses
import math
import threading
from typing import Callable

import numpy as np

from .calculus import (
    DyadicPartition,
    MultiplierProfile,
    SUPPORTED_NORM_PAIRS,
    apply_multiplier,
    fractional_power,
    lp_block,
    make_dyadic_partition,
    multiplier_norm,
    operator_matrix,
    operator_norm,
    shifted_power,
)
from .grid import (
    GridDomain,
    GridFunction,
    SpectralDecomposition,
    assemble_laplacian,
    build_domain,
    eigendecompose,
    heat_kernel,
)
from .spaces import besov_norm, conjugate_exponent, lp_norm, sobolev_norm
from .subordination import direct_semigroup

__all__ = [
    "CheckReport",
    "SpectralContext",
    "RandomFunctionEnsemble",
    "GNIndices",
    "GNValidation",
    "SplitCertificate",
    "build_context",
    "refine_context",
    "make_ensemble",
    "validate_gn_indices",
    "gn_split_certificate",
    "check_partition",
    "check_multiplier_scaling",
    "check_gn_inequality",
    "check_sobolev_embedding",
    "check_besov_sandwich",
    "check_semigroup_bounded",
    "check_smoothing_rate",
    "check_strong_continuity",
    "check_resolvent_sector",
    "check_commutation",
    "check_gaussian_kernel",
    "CHECKS",
    "run_check",
]


# ---------------------------------------------------------------------------
# report and context types

@dataclasses.dataclass
class CheckReport:
    """Outcome of one check on one domain.

    ``measured`` vs ``target`` with ``tolerance`` defines the pass rule;
    ``comparison`` says how they are compared ("abs_diff", "upper_bound",
    "lower_bound", "rel_diff"). ``provenance`` records where the target
    comes from. ``diagnostics`` carries fit details, sample grids, and
    anything a human would want when a check goes red.
    """

    check: str
    domain: str
    grid: str
    params: dict
    measured: float
    target: float
    tolerance: float
    status: str
    provenance: str
    comparison: str = "abs_diff"
    diagnostics: dict = dataclasses.field(default_factory=dict)
    notes: str = ""


def _status_abs(measured: float, target: float, tol: float) -> str:
    return "pass" if abs(measured - target) <= tol else "fail"


def _status_upper(measured: float, bound: float, tol: float) -> str:
    return "pass" if measured <= bound + tol else "fail"


@dataclasses.dataclass
class SpectralContext:
    """A domain with its assembled operator, eigendecomposition, and
    dyadic partition; the unit every check operates on."""

    domain: GridDomain
    laplacian: object
    dec: SpectralDecomposition
    part: DyadicPartition

    @property
    def name(self) -> str:
        return self.domain.name


_CTX_CACHE: dict[tuple, SpectralContext] = {}
_CTX_LOCK = threading.Lock()


def build_context(shape: str, size: int, smoothness_order: float = 2) -> SpectralContext:
    """Build (and cache) the full spectral context for a named domain."""
    key = (shape, size, float(smoothness_order))
    with _CTX_LOCK:
        ctx = _CTX_CACHE.get(key)
    if ctx is not None:
        return ctx
    dom = build_domain(shape, size)
    lap = assemble_laplacian(dom)
    dec = eigendecompose(lap, dom)
    part = make_dyadic_partition(dec, smoothness_order)
    ctx = SpectralContext(domain=dom, laplacian=lap, dec=dec, part=part)
    with _CTX_LOCK:
        _CTX_CACHE.setdefault(key, ctx)
    return ctx


class RefinementUnavailable(ValueError):
    pass


def _parse_name(domain: GridDomain) -> tuple[str, int]:
    shape, _, size = domain.name.partition(":")
    if shape == "file":
        raise RefinementUnavailable(
            "file-based domains have no canonical refinement"
        )
    return shape, int(size)


def refine_context(dec: SpectralDecomposition, part: DyadicPartition) -> SpectralContext:
    """One grid-halving step of the domain behind ``dec``."""
    shape, size = _parse_name(dec.domain)
    new_size = 2 * size if shape == "l_shape" else 2 * size + 1
    return build_context(shape, new_size, part.smoothness_order)


# ---------------------------------------------------------------------------
# random function ensembles

@dataclasses.dataclass
class RandomFunctionEnsemble:
    """Seed-deterministic batch of test functions with a named spectral
    or spatial recipe, regenerable on any grid."""

    seed: int
    profile: str
    functions: list[GridFunction]

    @property
    def count(self) -> int:
        return len(self.functions)


def make_ensemble(
    dec: SpectralDecomposition,
    profile: str = "white",
    count: int = 8,
    seed: int = 2025,
    part: DyadicPartition | None = None,
) -> RandomFunctionEnsemble:
    """Generate test functions. Profiles:

    white           iid coefficients on every mode
    low_pass        coefficients damped by exp(-lam/(100 lam_1))
    high_pass       coefficients damped by 1 - exp(-lam/lam_q75)
    band:J          coefficients shaped by dyadic block J (needs part)
    point_mass:K    the single eigenvector of mode K (0-based)
    spatial_bump    gaussian bumps at random continuum points

    low_pass and spatial_bump are grid-independent recipes (fixed spectral
    knee, continuum-coordinate centers): the same seed reproduces the same
    continuum function on a refined grid, which is what refinement-stability
    checks need. white and high_pass are grid-relative roughness probes.
    """
    rng = np.random.default_rng(seed)
    lam = dec.eigenvalues
    dom = dec.domain
    kind, _, arg = profile.partition(":")
    funcs: list[GridFunction] = []
    if kind == "point_mass":
        k = int(arg)
        if not (0 <= k < dec.n):
            raise ValueError(f"mode index {k} out of range")
        funcs.append(GridFunction(dom, dec.eigenvectors[:, k].copy()))
    else:
        for _ in range(count):
            if kind == "spatial_bump":
                center = rng.uniform(0.15, 0.85, size=dom.dim)
                r2 = np.sum((dom.coords - center) ** 2, axis=1)
                vals = np.exp(-r2 / (2.0 * 0.08 ** 2))
            else:
                coeff = rng.standard_normal(dec.n)
                if kind == "white":
                    w = np.ones_like(lam)
                elif kind == "low_pass":
                    w = np.exp(-lam / (100.0 * lam[0]))
                elif kind == "high_pass":
                    w = 1.0 - np.exp(-lam / np.quantile(lam, 0.75))
                elif kind == "band":
                    if part is None:
                        raise ValueError("band profile needs a partition")
                    w = part.phi(int(arg), np.sqrt(lam))
                else:
                    raise ValueError(f"unknown ensemble profile {profile!r}")
                vals = dec.synthesize(coeff * w)
            if not np.any(vals != 0.0):
                raise ValueError(f"profile {profile!r} produced a zero function")
            funcs.append(GridFunction(dom, vals))
    return RandomFunctionEnsemble(seed=seed, profile=profile, functions=funcs)


def _regenerate(ens: RandomFunctionEnsemble, ctx: SpectralContext) -> RandomFunctionEnsemble:
    return make_ensemble(ctx.dec, ens.profile, ens.count, ens.seed, ctx.part)


# ---------------------------------------------------------------------------
# small fitting helpers

def _linfit(x, y) -> tuple[float, float, float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def _report(check, dec, params, measured, target, tolerance, status,
            provenance, comparison="abs_diff", diagnostics=None, notes=""):
    return CheckReport(
        check=check,
        domain=dec.domain.name,
        grid=dec.domain.grid_label(),
        params=dict(params),
        measured=float(measured),
        target=float(target),
        tolerance=float(tolerance),
        status=status,
        provenance=provenance,
        comparison=comparison,
        diagnostics=diagnostics or {},
        notes=notes,
    )


# ---------------------------------------------------------------------------
# partition and multiplier scaling

def check_partition(dec: SpectralDecomposition, part: DyadicPartition) -> CheckReport:
    """Residual of the two partition identities on and between eigenvalues."""
    roots = np.sqrt(dec.eigenvalues)
    xs = np.concatenate([
        roots,
        np.geomspace(roots[0], roots[-1], 1000),
    ])
    total = np.zeros_like(xs)
    for j in part.js:
        total += part.phi(j, xs)
    res_full = float(np.max(np.abs(total - 1.0)))

    xs_low = np.concatenate([np.linspace(0.0, 2.0, 200), xs])
    low = part.psi(xs_low)
    for j in range(1, part.j_max + 1):
        low += part.phi(j, xs_low)
    res_psi = float(np.max(np.abs(low - 1.0)))

    measured = max(res_full, res_psi)
    return _report(
        "partition", dec, {"smoothness_order": part.smoothness_order},
        measured, 0.0, 1e-9,
        _status_abs(measured, 0.0, 1e-9),
        provenance="construction identity",
        comparison="upper_bound",
        diagnostics={"residual_blocks": res_full, "residual_low_cap": res_psi},
    )


def check_multiplier_scaling(
    dec: SpectralDecomposition, part: DyadicPartition,
    s: float = 0.0, r=2, p=2,
) -> CheckReport:
    """Fitted dyadic growth rate of the block operator norms at smoothness s.

    Uses only blocks whose effective support sits fully inside the spectrum;
    fewer than 4 such blocks is an error, not a silent small fit.

    The linear-correlation gate applies only to nonzero rate targets: for a
    flat target the fit explains no variance by design, and R^2 carries no
    information about whether the norms are bounded.
    """
    js = part.usable_js(dec)
    if len(js) < 4:
        raise ValueError(
            f"only {len(js)} usable dyadic blocks on this spectrum, need >= 4"
        )
    d = dec.domain.dim
    norms = []
    for j in js:
        jj = j

        def prof(lam, jj=jj):
            return lam ** (0.5 * s) * part.phi(jj, np.sqrt(lam))

        norms.append(multiplier_norm(dec, prof, r, p))
    slope, _, r2 = _linfit(js, np.log2(norms))
    target = s + d * (1.0 / float(r) - (0.0 if p == np.inf else 1.0 / float(p)))
    if r == np.inf:
        target = s + d * (0.0 - (0.0 if p == np.inf else 1.0 / float(p)))
    status = _status_abs(slope, target, 0.15)
    if r2 < 0.98 and abs(target) > 1e-9:
        status = "inconclusive"
    return _report(
        "multiplier_scaling", dec,
        {"s": s, "r": r, "p": p},
        slope, target, 0.15, status,
        provenance="dyadic rate arithmetic",
        diagnostics={"js": js, "norms": norms, "r2": r2},
    )


# ---------------------------------------------------------------------------
# GN indices: validation, inequality, split certificate

@dataclasses.dataclass(frozen=True)
class GNIndices:
    """Index tuple (s, p, theta, r, s0, r0) for the interpolation
    inequality between a Lebesgue factor and a smoothness factor."""

    s: float
    p: float
    theta: float
    r: float
    s0: float
    r0: float


@dataclasses.dataclass(frozen=True)
class GNValidation:
    admissible: bool
    reason: str = ""


def _inv(p: float) -> float:
    return 0.0 if p == np.inf else 1.0 / float(p)


def validate_gn_indices(idx: GNIndices, d: int) -> GNValidation:
    """Classify an index tuple as admissible or rejected with a reason.

    Conditions: positive smoothness orders, exponents in [1, inf],
    theta strictly interior, the dimensional balance equation, a
    non-degenerate pivot, and the case-dependent ceiling s <= (1-theta) s0
    (strict when p sits between the two Lebesgue exponents; equality there
    is the excluded boundary case).
    """
    for q, name in ((idx.p, "p"), (idx.r, "r"), (idx.r0, "r0")):
        if q != np.inf and (not np.isfinite(q) or q < 1):
            return GNValidation(False, f"exponent {name}={q} outside [1, inf]")
    if not (idx.s > 0 and idx.s0 > 0):
        return GNValidation(False, "smoothness orders must be positive")
    if not (0.0 < idx.theta < 1.0):
        return GNValidation(False, "theta must lie strictly in (0, 1)")
    lhs = idx.s - d * _inv(idx.p)
    rhs = idx.theta * (-d * _inv(idx.r)) + (1.0 - idx.theta) * (idx.s0 - d * _inv(idx.r0))
    if abs(lhs - rhs) > 1e-9:
        return GNValidation(
            False, f"balance violated: s - d/p = {lhs:.6g} but rhs = {rhs:.6g}"
        )
    if abs(-d * _inv(idx.r) - (idx.s0 - d * _inv(idx.r0))) <= 1e-12:
        return GNValidation(False, "degenerate pivot: -d/r equals s0 - d/r0")
    ceiling = (1.0 - idx.theta) * idx.s0
    mx = max(idx.r, idx.r0)
    mn = min(idx.r, idx.r0)
    if mx <= idx.p:
        if idx.s > ceiling + 1e-12:
            return GNValidation(False, "smoothness above the interpolation ceiling")
    elif mn <= idx.p < mx:
        if abs(idx.s - ceiling) <= 1e-12:
            return GNValidation(False, "excluded case")
        if idx.s > ceiling:
            return GNValidation(False, "smoothness above the interpolation ceiling")
    return GNValidation(True)


def check_gn_inequality(
    dec: SpectralDecomposition, part: DyadicPartition, idx: GNIndices,
    ensemble: RandomFunctionEnsemble, explore: bool = False,
) -> CheckReport:
    """Sup over the ensemble of the interpolation ratio, with the same sup
    on a refined grid as the stability target.

    ``explore=True`` admits the excluded boundary case but always reports
    inconclusive for it: ratios are observed, nothing is asserted.
    """
    v = validate_gn_indices(idx, dec.domain.dim)
    explored = False
    if not v.admissible:
        if explore and v.reason == "excluded case":
            explored = True
        else:
            raise ValueError(f"inadmissible indices: {v.reason}")

    def all_ratios(dec_, part_, funcs):
        out = []
        for f in funcs:
            num = sobolev_norm(dec_, f, idx.s, idx.p)
            den_l = lp_norm(dec_.domain, f, idx.r)
            den_h = sobolev_norm(dec_, f, idx.s0, idx.r0)
            if den_l == 0 or den_h == 0:
                raise ValueError("ensemble produced a zero denominator")
            out.append(num / (den_l ** idx.theta * den_h ** (1.0 - idx.theta)))
        return out

    ratios = all_ratios(dec, part, ensemble.functions)
    measured = max(ratios)
    params = dataclasses.asdict(idx)
    try:
        rctx = refine_context(dec, part)
    except RefinementUnavailable as exc:
        return _report(
            "gn_inequality", dec, params, measured, math.nan, math.nan,
            "inconclusive", "refined-grid reference", "rel_diff",
            notes=str(exc),
        )
    refined = all_ratios(rctx.dec, rctx.part, _regenerate(ensemble, rctx).functions)
    target = max(refined)
    status = "pass" if abs(measured - target) <= 0.25 * target else "fail"
    if explored:
        status = "inconclusive"
    return _report(
        "gn_inequality", dec, params, measured, target, 0.25 * target, status,
        provenance="refined-grid reference", comparison="rel_diff",
        diagnostics={"ratios": ratios, "refined_ratios": refined,
                     "refined_grid": rctx.domain.grid_label(),
                     "explore": explored},
        notes="excluded boundary case, observation only" if explored else "",
    )


@dataclasses.dataclass
class SplitCertificate:
    """Explicit upper bound on the l^1 Besov norm obtained by switching
    estimation routes at a cut index, plus the data behind it."""

    n_star: int
    bound: float
    norm_value: float
    n_theory: float
    route_low: str
    route_high: str
    exponent_low: float
    exponent_high: float
    bounds_by_cut: dict


def _pair_supported(r, p) -> bool:
    def canon(q):
        return np.inf if q == np.inf else float(q)

    return (canon(r), canon(p)) in SUPPORTED_NORM_PAIRS


def gn_split_certificate(
    dec: SpectralDecomposition, part: DyadicPartition, idx: GNIndices,
    f: GridFunction,
) -> SplitCertificate:
    """Certified bound on the l^1 Besov norm at smoothness s from the two
    coarse data B_low = sup_j |block_j f|_r and B_high = sup_j 2^(s0 j)
    |block_j f|_r0.

    Each dyadic term gets two rigorous envelope bounds: a growing one
    (positive dyadic exponent) used below the cut and a decaying one above
    it. The growing/decaying pair comes from exact widened-block operator
    norms when the exponent pair is computable, and from the exact
    discrete interpolation inequality between the two Lebesgue exponents
    otherwise. The returned bound is the minimum over all cuts; it
    dominates the actual norm termwise by construction, and the minimizing
    cut sits where the two envelopes balance.
    """
    v = validate_gn_indices(idx, dec.domain.dim)
    if not v.admissible:
        raise ValueError(f"inadmissible indices: {v.reason}")
    d = dec.domain.dim
    s, p, r, r0, s0 = idx.s, idx.p, idx.r, idx.r0, idx.s0
    js = part.js
    blocks = [lp_block(dec, part, j, f) for j in js]
    b_low = max(lp_norm(dec.domain, g, r) for g in blocks)
    b_high = max(2.0 ** (s0 * j) * lp_norm(dec.domain, g, r0)
                 for j, g in zip(js, blocks))
    if b_low == 0 or b_high == 0:
        raise ValueError("function has no spectral content in any block")
    pow_s = np.array([2.0 ** (s * j) for j in js])
    pow_s0 = np.array([2.0 ** (-s0 * j) for j in js])

    def widened(j):
        def prof(lam, j=j):
            x = np.sqrt(lam)
            return part.phi(j - 1, x) + part.phi(j, x) + part.phi(j + 1, x)

        return prof

    routes = []
    if _pair_supported(r, p):
        m = np.array([multiplier_norm(dec, widened(j), r, p) for j in js])
        routes.append(("operator-norm via first exponent",
                       s + d * (_inv(r) - _inv(p)), pow_s * m * b_low))
    if _pair_supported(r0, p):
        m = np.array([multiplier_norm(dec, widened(j), r0, p) for j in js])
        routes.append(("operator-norm via second exponent",
                       s - s0 + d * (_inv(r0) - _inv(p)),
                       pow_s * m * pow_s0 * b_high))
    lo_inv, hi_inv = sorted((_inv(r), _inv(r0)))
    if lo_inv <= _inv(p) <= hi_inv and _inv(r) != _inv(r0):
        mu = (_inv(p) - _inv(r0)) / (_inv(r) - _inv(r0))
        if 0.0 <= mu <= 1.0:
            routes.append(("exponent interpolation",
                           s - (1.0 - mu) * s0,
                           pow_s * (pow_s0 * b_high) ** (1.0 - mu) * b_low ** mu))

    growing = [rt for rt in routes if rt[1] > 1e-9]
    decaying = [rt for rt in routes if rt[1] < -1e-9]
    if not growing or not decaying:
        raise ValueError(
            "no growing/decaying route pair for these exponents; "
            "certificate unsupported"
        )
    low_name, e_low, t_low = max(growing, key=lambda rt: rt[1])
    high_name, e_high, t_high = min(decaying, key=lambda rt: rt[1])

    cuts = [js[0] - 1] + list(js)
    prefix = np.concatenate([[0.0], np.cumsum(t_low)])
    suffix = np.concatenate([np.cumsum(t_high[::-1])[::-1], [0.0]])
    bounds = {cuts[i]: float(prefix[i] + suffix[i]) for i in range(len(cuts))}
    # tie-tolerant argmin: perfectly balanced envelopes can leave adjacent
    # cuts equal to the last ulp, and the selected cut must not depend on
    # an overall rescaling of f
    b_min = min(bounds.values())
    n_star = min(n for n, b in bounds.items() if b <= b_min * (1.0 + 1e-9))
    bound = bounds[n_star]

    norm_value = besov_norm(dec, part, f, s, p, 1)
    if bound < norm_value * (1.0 - 1e-9):
        raise ArithmeticError(
            f"certificate {bound} fell below the norm {norm_value}; "
            "termwise bounding is broken"
        )

    usable = set(part.usable_js(dec))
    n_theory = math.nan
    sel = [i for i, j in enumerate(js)
           if j in usable and t_low[i] > 0 and t_high[i] > 0]
    if not sel:
        sel = [i for i in range(len(js)) if t_low[i] > 0 and t_high[i] > 0]
    if sel:
        d_low = float(np.median([t_low[i] / 2.0 ** (e_low * js[i]) for i in sel]))
        d_high = float(np.median([t_high[i] / 2.0 ** (e_high * js[i]) for i in sel]))
        if d_low > 0 and d_high > 0:
            n_theory = math.log2(d_high / d_low) / (e_low - e_high)
            n_theory = min(max(n_theory, js[0] - 1), js[-1])

    return SplitCertificate(
        n_star=int(n_star),
        bound=float(bound),
        norm_value=float(norm_value),
        n_theory=float(n_theory),
        route_low=low_name,
        route_high=high_name,
        exponent_low=float(e_low),
        exponent_high=float(e_high),
        bounds_by_cut=bounds,
    )


def check_gn_split(
    dec: SpectralDecomposition, part: DyadicPartition, idx: GNIndices,
    f: GridFunction,
) -> CheckReport:
    """CheckReport wrapper: certificate must dominate the norm and the
    minimizing cut must sit within one block of the balancing prediction."""
    cert = gn_split_certificate(dec, part, idx, f)
    ratio = cert.bound / cert.norm_value if cert.norm_value > 0 else math.inf
    ok_cut = (not math.isnan(cert.n_theory)
              and abs(cert.n_star - cert.n_theory) <= 1.0)
    status = "pass" if (ratio >= 1.0 - 1e-12 and ok_cut) else "fail"
    return _report(
        "gn_split", dec, dataclasses.asdict(idx),
        ratio, 1.0, 0.0, status,
        provenance="termwise route bounds, exact block norms",
        comparison="lower_bound",
        diagnostics={
            "n_star": cert.n_star,
            "n_theory": cert.n_theory,
            "bound": cert.bound,
            "norm": cert.norm_value,
            "route_low": cert.route_low,
            "route_high": cert.route_high,
        },
    )


# ---------------------------------------------------------------------------
# embeddings and sandwich

def check_sobolev_embedding(
    dec: SpectralDecomposition, s: float, r, p,
    ensemble: RandomFunctionEnsemble | None = None,
    part: DyadicPartition | None = None,
) -> CheckReport:
    """Embedding constant from smoothness s + d(1/r - 1/p) at exponent r
    into smoothness s at exponent p.

    Uses the exact negative-power operator norm when (r, p) is computable,
    otherwise the ensemble ratio; target is the refined-grid value.
    """
    d = dec.domain.dim
    gap = d * (_inv(r) - _inv(p))
    if gap < -1e-12:
        raise ValueError("need r <= p for the embedding direction")
    params = {"s": s, "r": r, "p": p}
    exact = _pair_supported(r, p)

    def measure(dec_, funcs):
        if exact:
            return multiplier_norm(dec_, lambda lam: lam ** (-0.5 * gap), r, p)
        worst = 0.0
        for f in funcs:
            num = sobolev_norm(dec_, f, s, p)
            den = sobolev_norm(dec_, f, s + gap, r)
            worst = max(worst, num / den)
        return worst

    if float(r) == float(p):
        return _report(
            "sobolev_embedding", dec, params, 1.0, 1.0, 0.0, "pass",
            provenance="identical norms at r = p", comparison="abs_diff",
        )
    funcs = ensemble.functions if ensemble is not None else []
    if not exact and not funcs:
        raise ValueError("non-computable exponent pair needs an ensemble")
    measured = measure(dec, funcs)
    if part is None:
        part = make_dyadic_partition(dec)
    try:
        rctx = refine_context(dec, part)
    except RefinementUnavailable as exc:
        return _report(
            "sobolev_embedding", dec, params, measured, math.nan, math.nan,
            "inconclusive", "refined-grid reference", "rel_diff", notes=str(exc),
        )
    rfuncs = (_regenerate(ensemble, rctx).functions
              if (ensemble is not None and not exact) else [])
    target = measure(rctx.dec, rfuncs)
    status = "pass" if abs(measured - target) <= 0.25 * target else "fail"
    return _report(
        "sobolev_embedding", dec, params, measured, target, 0.25 * target,
        status, provenance="refined-grid reference", comparison="rel_diff",
        diagnostics={"gap": gap, "mode": "operator" if exact else "ensemble",
                     "refined_grid": rctx.domain.grid_label()},
    )


def check_besov_sandwich(
    dec: SpectralDecomposition, part: DyadicPartition, s: float, p,
    ensemble: RandomFunctionEnsemble,
) -> CheckReport:
    """Two-sided comparison of the smoothness norm against its l^inf and
    l^1 Besov neighbors, with refinement-stable constants."""

    def constants(dec_, part_, funcs):
        c_up = 0.0
        c_down = 0.0
        c_up_inhom = 0.0
        c_down_inhom = 0.0
        for f in funcs:
            hs = sobolev_norm(dec_, f, s, p)
            b_inf = besov_norm(dec_, part_, f, s, p, np.inf)
            b_one = besov_norm(dec_, part_, f, s, p, 1)
            c_up = max(c_up, b_inf / hs)
            c_down = max(c_down, hs / b_one)
            hs_i = sobolev_norm(dec_, f, s, p, homogeneous=False)
            bi_inf = besov_norm(dec_, part_, f, s, p, np.inf, homogeneous=False)
            bi_one = besov_norm(dec_, part_, f, s, p, 1, homogeneous=False)
            c_up_inhom = max(c_up_inhom, bi_inf / hs_i)
            c_down_inhom = max(c_down_inhom, hs_i / bi_one)
        return c_up, c_down, c_up_inhom, c_down_inhom

    base = constants(dec, part, ensemble.functions)
    measured = max(base[0], base[1])
    params = {"s": s, "p": p}
    try:
        rctx = refine_context(dec, part)
    except RefinementUnavailable as exc:
        return _report(
            "besov_sandwich", dec, params, measured, math.nan, math.nan,
            "inconclusive", "refined-grid reference", "rel_diff", notes=str(exc),
        )
    ref = constants(rctx.dec, rctx.part, _regenerate(ensemble, rctx).functions)
    target = max(ref[0], ref[1])
    status = "pass" if abs(measured - target) <= 0.25 * target else "fail"
    return _report(
        "besov_sandwich", dec, params, measured, target, 0.25 * target, status,
        provenance="refined-grid reference", comparison="rel_diff",
        diagnostics={
            "upper_const": base[0], "lower_const": base[1],
            "upper_const_inhom": base[2], "lower_const_inhom": base[3],
            "refined": {"upper_const": ref[0], "lower_const": ref[1],
                        "upper_const_inhom": ref[2], "lower_const_inhom": ref[3]},
        },
    )


# ---------------------------------------------------------------------------
# semigroup checks

def _semigroup_profile(lam: np.ndarray, alpha: float, t: float) -> np.ndarray:
    return np.exp(-t * lam ** (0.5 * alpha))


def _default_bounded_tgrid(dec: SpectralDecomposition, alpha: float) -> np.ndarray:
    # decay happens on the 1/lambda_1^{alpha/2} scale, so the window lives
    # there; reaching kappa*t = 10 puts the late points in the regime where
    # the bottom mode dominates every p-norm
    t_unit = float(dec.eigenvalues[0]) ** (-alpha / 2.0)
    return np.geomspace(0.1 * t_unit, 10.0 * t_unit, 10)


def check_semigroup_bounded(
    dec: SpectralDecomposition, alpha: float, s: float = 0.0, p=2,
    t_grid: np.ndarray | None = None,
) -> CheckReport:
    """Uniform boundedness plus exponential decay of the fractional
    semigroup as an operator on the p-scale.

    The smoothness parameter is recorded but does not change the operator
    norm: the power commutes with the semigroup in the shared eigenbasis,
    so the norm on the smoothness-s scale equals the plain p-norm.

    p = 2: the norm is exactly exp(-t lam_1^(alpha/2)); measured is the
    sup of exp(+kappa t) times the norm with kappa = lam_1^(alpha/2),
    target 1 at tolerance 1e-12. p in {1, inf}: same sup, compared against
    the refined grid within 10%, with the sub-Markov bound norm <= 1 + 1e-10
    enforced on the way.
    """
    if t_grid is None:
        t_grid = _default_bounded_tgrid(dec, alpha)
    t_grid = np.asarray(t_grid, dtype=float)
    kappa = dec.eigenvalues[0] ** (0.5 * alpha)
    params = {"alpha": alpha, "s": s, "p": p}

    def norms(dec_):
        return np.array([
            multiplier_norm(dec_, _semigroup_profile(dec_.eigenvalues, alpha, t), p, p)
            for t in t_grid
        ])

    vals = norms(dec)
    sup_plain = float(np.max(vals))
    kappa_sup = float(np.max(np.exp(kappa * t_grid) * vals))
    late = t_grid >= dec.eigenvalues[0] ** (-0.5 * alpha) - 1e-15
    kappa_fit = math.nan
    if np.count_nonzero(late) >= 3:
        slope, _, _ = _linfit(t_grid[late], np.log(vals[late]))
        kappa_fit = -slope
    diagnostics = {"t_grid": t_grid.tolist(), "norms": vals.tolist(),
                   "kappa": kappa, "sup_norm": sup_plain,
                   "kappa_fit": kappa_fit}
    if float(p) == 2.0:
        status = _status_abs(kappa_sup, 1.0, 1e-12)
        return _report(
            "semigroup_bounded", dec, params, kappa_sup, 1.0, 1e-12, status,
            provenance="spectral bottom decay, exact",
            diagnostics=diagnostics,
        )
    if sup_plain > 1.0 + 1e-10:
        return _report(
            "semigroup_bounded", dec, params, sup_plain, 1.0, 1e-10, "fail",
            provenance="sub-Markov kernel positivity", comparison="upper_bound",
            diagnostics=diagnostics, notes="contraction bound violated",
        )
    part = make_dyadic_partition(dec)
    try:
        rctx = refine_context(dec, part)
    except RefinementUnavailable as exc:
        return _report(
            "semigroup_bounded", dec, params, kappa_sup, math.nan, math.nan,
            "inconclusive", "refined-grid reference", "rel_diff", notes=str(exc),
        )
    rk = rctx.dec.eigenvalues[0] ** (0.5 * alpha)
    rvals = norms(rctx.dec)
    target = float(np.max(np.exp(rk * t_grid) * rvals))
    stable = abs(kappa_sup - target) <= 0.10 * target
    decay_ok = (not math.isnan(kappa_fit)) and kappa_fit >= 0.9 * kappa
    status = "pass" if (stable and decay_ok) else "fail"
    return _report(
        "semigroup_bounded", dec, params, kappa_sup, target, 0.10 * target,
        status, provenance="refined-grid reference", comparison="rel_diff",
        diagnostics=diagnostics,
        notes="" if decay_ok else "fitted decay rate below 0.9 of spectral bottom",
    )


def _smoothing_window(dec, alpha: float, ds: float) -> tuple[float, float]:
    lam = dec.eigenvalues
    mu_lo = lam[0] ** (0.5 * alpha)
    mu_hi = lam[-1] ** (0.5 * alpha)
    if ds > 0:
        return 3.0 * (ds / alpha) / mu_hi, (ds / alpha) / (3.0 * mu_lo)
    return 8.0 / mu_hi, 0.15 / mu_lo


def check_smoothing_rate(
    dec: SpectralDecomposition, alpha: float, s1: float, s2: float,
    p1, p2, t_grid: np.ndarray | None = None, points: int = 8,
    variant: str = "homogeneous",
) -> CheckReport:
    """Log-log decay rate of the smoothing operator norm in time.

    Homogeneous: the operator applies the power of exponent (s2-s1)/2
    composed with the fractional semigroup, measured from L^p1 to L^p2;
    the rate is -(s2-s1)/alpha - (d/alpha)(1/p1 - 1/p2). Non-homogeneous:
    shifted powers; the small-t rate is -(s2-s1)/alpha and the sup of
    norm/(1 + t^(-(s2-s1)/alpha)) over the window is reported.
    """
    d = dec.domain.dim
    ds = s2 - s1
    if d * (_inv(p1) - _inv(p2)) + ds <= 0:
        raise ValueError("need d(1/p1 - 1/p2) + s2 - s1 > 0")
    if variant not in ("homogeneous", "inhomogeneous"):
        raise ValueError(f"unknown variant {variant!r}")
    if t_grid is None:
        t_lo, t_hi = _smoothing_window(dec, alpha, ds if variant == "homogeneous" else ds)
        if t_hi <= t_lo:
            raise ValueError("smoothing window is empty on this spectrum")
        t_grid = np.geomspace(t_lo, t_hi, points)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size < 4:
        raise ValueError("fewer than 4 usable time points in the window")

    lam = dec.eigenvalues

    def op_norm(t):
        if variant == "homogeneous":
            prof = lam ** (0.5 * ds) * _semigroup_profile(lam, alpha, t)
        else:
            prof = (1.0 + lam) ** (0.5 * ds) * _semigroup_profile(lam, alpha, t)
        return multiplier_norm(dec, prof, p1, p2)

    norms = np.array([op_norm(t) for t in t_grid])
    params = {"alpha": alpha, "s1": s1, "s2": s2, "p1": p1, "p2": p2,
              "variant": variant}
    if variant == "homogeneous":
        slope, _, r2 = _linfit(np.log(t_grid), np.log(norms))
        target = -ds / alpha - (d / alpha) * (_inv(p1) - _inv(p2))
        status = _status_abs(slope, target, 0.1)
        if t_grid.size < 6 or t_grid[-1] / t_grid[0] < 99.0:
            status = "inconclusive" if status == "pass" else status
        if r2 < 0.98:
            status = "inconclusive"
        return _report(
            "smoothing_rate", dec, params, slope, target, 0.1, status,
            provenance="semigroup rate arithmetic",
            diagnostics={"t_grid": t_grid.tolist(), "norms": norms.tolist(),
                         "r2": r2},
        )
    # inhomogeneous: small-t slope plus bounded correction-shape ratio
    small = t_grid[: max(4, t_grid.size // 2)]
    small_norms = norms[: small.size]
    slope, _, r2 = _linfit(np.log(small), np.log(small_norms))
    target = -ds / alpha
    shape_ratio = float(np.max(norms / (1.0 + t_grid ** (-ds / alpha))))
    status = _status_abs(slope, target, 0.1)
    if r2 < 0.98:
        status = "inconclusive"
    return _report(
        "smoothing_rate", dec, params, slope, target, 0.1, status,
        provenance="semigroup rate arithmetic",
        diagnostics={"t_grid": t_grid.tolist(), "norms": norms.tolist(),
                     "r2": r2, "shape_sup": shape_ratio},
    )


def check_strong_continuity(
    dec: SpectralDecomposition, alpha: float, s: float, p,
    f: GridFunction, t_sequence: np.ndarray | None = None,
) -> CheckReport:
    """Decay of the semigroup deviation from the identity as t -> 0.

    Finite p: the deviation is measured in the smoothness-s norm at
    exponent p (reduced to the plain p-norm of a prepared function via
    commutation); the tail of the sequence must decrease and the final
    value must drop below 1e-6 relative. p = inf: deviations are weak
    pairings against a fixed low-frequency test set instead.
    """
    lam = dec.eigenvalues
    if t_sequence is None:
        t_hi = 1.0 / lam[0] ** (0.5 * alpha)
        t_lo = 1e-7 / lam[-1] ** (0.5 * alpha)
        t_sequence = np.geomspace(t_hi, t_lo, 12)
    t_sequence = np.asarray(t_sequence, dtype=float)
    g = fractional_power(dec, s, f) if s != 0 else f
    params = {"alpha": alpha, "s": s, "p": p}

    weak = float(p) == np.inf
    if weak:
        tests = make_ensemble(dec, "low_pass", 4, 20250101).functions
        tests.append(GridFunction(dec.domain, dec.eigenvectors[:, 0].copy()))
        scale = lp_norm(dec.domain, g, np.inf)
        devs = []
        for t in t_sequence:
            diff = direct_semigroup(dec, alpha, t, g).values - g.values
            devs.append(max(
                abs(float(dec.domain.weight * np.dot(diff, h.values)))
                / (scale * lp_norm(dec.domain, h, 1))
                for h in tests
            ))
    else:
        scale = lp_norm(dec.domain, g, p)
        devs = [
            lp_norm(dec.domain,
                    direct_semigroup(dec, alpha, t, g).values - g.values, p)
            / scale
            for t in t_sequence
        ]
    devs = np.asarray(devs)
    tail = devs[t_sequence.size // 2:]
    slack = 1e-12 if (float(p) == 2.0 and not weak) else 0.05
    monotone = bool(np.all(np.diff(tail) <= slack * np.maximum(tail[:-1], 1e-300)))
    final = float(devs[-1])
    status = "pass" if (monotone and final <= 1e-6) else "fail"
    return _report(
        "strong_continuity", dec, params, final, 0.0, 1e-6, status,
        provenance="limit definition", comparison="upper_bound",
        diagnostics={"t_sequence": t_sequence.tolist(),
                     "deviations": devs.tolist(),
                     "tail_monotone": monotone,
                     "mode": "weak_pairing" if weak else "norm"},
    )


def check_resolvent_sector(
    dec: SpectralDecomposition, p=2,
    lam_samples: np.ndarray | None = None,
) -> CheckReport:
    """Uniform bound on the scaled resolvent over rays in the right
    half-plane.

    p = 2 is exact scalar arithmetic with bound 1. p in {1, inf} assembles
    the complex kernels: positive real axis must stay below 1 + 1e-10
    (kernel positivity), and the overall sup is compared within 25% against
    the refined grid at the worst sample points.
    """
    lam = dec.eigenvalues
    if lam_samples is None:
        rays = [0.0, math.pi / 4, -math.pi / 4,
                math.pi / 2 - 0.1, -(math.pi / 2 - 0.1)]
        mags = np.geomspace(lam[0] / 100.0, 100.0 * lam[-1], 8)
        lam_samples = np.array([m * np.exp(1j * a) for a in rays for m in mags])
    lam_samples = np.asarray(lam_samples, dtype=complex)
    if np.any(lam_samples.real <= 0):
        raise ValueError("samples must have positive real part")
    params = {"p": p}

    if float(p) == 2.0:
        measured = max(
            float(np.max(np.abs(z) / np.abs(z + lam))) for z in lam_samples
        )
        status = _status_upper(measured, 1.0, 1e-12)
        return _report(
            "resolvent_sector", dec, params, measured, 1.0, 1e-12, status,
            provenance="scalar resolvent bound, exact", comparison="upper_bound",
            diagnostics={"n_samples": int(lam_samples.size)},
        )
    if float(p) not in (1.0, np.inf):
        raise ValueError("resolvent check supports p in {1, 2, inf}")

    def norm_at(dec_, z):
        coeff = z / (z + dec_.eigenvalues)
        mat = operator_matrix(dec_, coeff)
        return operator_norm(mat, p, p, dec_.domain.h, dec_.domain.dim)

    vals = np.array([norm_at(dec, z) for z in lam_samples])
    measured = float(np.max(vals))
    real_axis = np.abs(lam_samples.imag) == 0.0
    real_ok = bool(np.all(vals[real_axis] <= 1.0 + 1e-10))
    part = make_dyadic_partition(dec)
    diagnostics = {
        "sup_real_axis": float(np.max(vals[real_axis])) if real_axis.any() else math.nan,
        "n_samples": int(lam_samples.size),
    }
    try:
        rctx = refine_context(dec, part)
    except RefinementUnavailable as exc:
        return _report(
            "resolvent_sector", dec, params, measured, math.nan, math.nan,
            "inconclusive", "refined-grid reference", "rel_diff",
            diagnostics=diagnostics, notes=str(exc),
        )
    worst = lam_samples[np.argsort(vals)[-4:]]
    target = max(norm_at(rctx.dec, z) for z in worst)
    stable = abs(measured - target) <= 0.25 * target
    status = "pass" if (real_ok and stable) else "fail"
    diagnostics["refined_sup"] = float(target)
    return _report(
        "resolvent_sector", dec, params, measured, float(target),
        0.25 * float(target), status,
        provenance="refined-grid reference", comparison="rel_diff",
        diagnostics=diagnostics,
        notes="" if real_ok else "positive-axis bound violated",
    )


def check_commutation(
    dec: SpectralDecomposition, alpha: float, s: float, t: float,
    ensemble: RandomFunctionEnsemble,
) -> CheckReport:
    """The power of exponent s/2 and the fractional semigroup applied in
    both orders; also the shifted-power variant. Exact in one eigenbasis."""
    worst = 0.0
    for f in ensemble.functions:
        for power in (fractional_power, shifted_power):
            a = power(dec, s, direct_semigroup(dec, alpha, t, f))
            b = direct_semigroup(dec, alpha, t, power(dec, s, f))
            denom = max(float(np.linalg.norm(a.values)), 1e-300)
            worst = max(worst, float(np.linalg.norm(a.values - b.values)) / denom)
    status = _status_abs(worst, 0.0, 1e-12)
    return _report(
        "commutation", dec, {"alpha": alpha, "s": s, "t": t},
        worst, 0.0, 1e-12, status,
        provenance="shared eigenbasis, exact", comparison="upper_bound",
    )


def check_gaussian_kernel(
    dec: SpectralDecomposition, t_grid: np.ndarray | None = None,
) -> CheckReport:
    """Gaussian envelope of the heat kernel: a single (C, c) pair must
    dominate t^(d/2)-scaled kernel values at decay rate c = 0.1, with C at
    most 1.5 times the free-space constant, and the kernel must be
    entrywise nonnegative up to 1e-12. Rates up to 0.15 stay feasible on
    the builtin domains; the continuum-sharp 1/4 is not reachable at these
    lattice scales and shows up in the diagnostics curve instead.

    Window design: the lattice kernel has heavier-than-Gaussian tails in
    the super-diffusive regime t ~ h^2, and eigensolver roundoff (scale
    eps times the top eigenvalue) shows up as spurious negative entries
    there, so the default window starts at max(2 h^2, 120/lam_n), pulled
    down to a quarter of the upper end when the spectrum is tight. Entries
    below 1e-13 of the kernel maximum are excluded from the envelope fit:
    they are under the noise floor, where the ratio is meaningless. The
    free-space constant is (4 pi)^(-d/2).
    """
    dom = dec.domain
    d = dom.dim
    if t_grid is None:
        t_hi = 0.5 / dec.eigenvalues[0]
        t_lo = max(2.0 * dom.h ** 2,
                   min(120.0 / dec.eigenvalues[-1], 0.25 * t_hi))
        t_grid = np.geomspace(t_lo, t_hi, 6)
    t_grid = np.asarray(t_grid, dtype=float)
    diff = dom.coords[:, None, :] - dom.coords[None, :, :]
    r2 = np.sum(diff * diff, axis=2)
    c_values = [0.05, 0.1, 0.15, 0.2, 0.245]
    c_curve = {}
    min_entry = 0.0
    for c in c_values:
        worst = -math.inf
        for t in t_grid:
            K = heat_kernel(dec, float(t))
            min_entry = min(min_entry, float(np.min(K)))
            mask = K >= 1e-13 * np.max(K)
            logs = (np.log(K[mask]) + 0.5 * d * math.log(t) + c * r2[mask] / t)
            worst = max(worst, float(np.max(logs)))
        c_curve[c] = math.exp(worst)
    measured = c_curve[0.1]
    target = 1.5 * (4.0 * math.pi) ** (-0.5 * d)
    positive = min_entry >= -1e-12
    status = "pass" if (measured <= target and positive) else "fail"
    return _report(
        "gaussian_kernel", dec, {"c": 0.1},
        measured, target, 0.0, status,
        provenance="free-space kernel envelope with margin",
        comparison="upper_bound",
        diagnostics={"envelope_by_c": c_curve, "min_entry": min_entry,
                     "t_grid": t_grid.tolist()},
        notes="" if positive else "kernel positivity violated",
    )


# ---------------------------------------------------------------------------
# registry for the CLI and suite runner

def _to_exp(v):
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return np.inf
    x = float(v)
    return np.inf if math.isinf(x) else x


def _to_float(v):
    return float(v)


def _to_int(v):
    return int(v)


def _to_str(v):
    return str(v)


@dataclasses.dataclass(frozen=True)
class CheckDef:
    name: str
    runner: Callable
    params: dict
    needs_ensemble: bool = False


def _ens_params(params: dict) -> dict:
    out = dict(params)
    out.update({"profile": _to_str, "count": _to_int, "seed": _to_int})
    return out


_ENS_DEFAULTS = {"profile": "white", "count": 8, "seed": 2025}


def _run_partition(ctx, **kw):
    return check_partition(ctx.dec, ctx.part)


def _run_multiplier_scaling(ctx, s=0.0, r=2, p=2, **kw):
    return check_multiplier_scaling(ctx.dec, ctx.part, s, r, p)


def _make_idx(kw) -> GNIndices:
    return GNIndices(s=kw["s"], p=kw["p"], theta=kw["theta"], r=kw["r"],
                     s0=kw["s0"], r0=kw["r0"])


def _ensemble_from(ctx, kw):
    return make_ensemble(
        ctx.dec,
        kw.get("profile", "white"),
        kw.get("count", 8),
        kw.get("seed", 2025),
        ctx.part,
    )


def _run_gn_inequality(ctx, **kw):
    return check_gn_inequality(ctx.dec, ctx.part, _make_idx(kw),
                               _ensemble_from(ctx, kw),
                               explore=bool(kw.get("explore", False)))


def _run_gn_split(ctx, **kw):
    ens = _ensemble_from(ctx, kw)
    return check_gn_split(ctx.dec, ctx.part, _make_idx(kw), ens.functions[0])


def _run_sobolev_embedding(ctx, s=0.5, r=1, p=2, **kw):
    ens = _ensemble_from(ctx, kw) if not _pair_supported(r, p) else None
    return check_sobolev_embedding(ctx.dec, s, r, p, ens, ctx.part)


def _run_besov_sandwich(ctx, s=0.5, p=2, **kw):
    return check_besov_sandwich(ctx.dec, ctx.part, s, p, _ensemble_from(ctx, kw))


def _run_semigroup_bounded(ctx, alpha=1.0, s=0.0, p=2, **kw):
    return check_semigroup_bounded(ctx.dec, alpha, s, p)


def _run_smoothing_rate(ctx, alpha=2.0, s1=0.0, s2=0.0, p1=1, p2=np.inf,
                        variant="homogeneous", points=8, **kw):
    return check_smoothing_rate(ctx.dec, alpha, s1, s2, p1, p2,
                                points=points, variant=variant)


def _run_strong_continuity(ctx, alpha=1.0, s=0.0, p=2, **kw):
    ens = _ensemble_from(ctx, kw)
    return check_strong_continuity(ctx.dec, alpha, s, p, ens.functions[0])


def _run_resolvent_sector(ctx, p=2, **kw):
    return check_resolvent_sector(ctx.dec, p)


def _run_commutation(ctx, alpha=1.0, s=-1.0, t=0.1, **kw):
    return check_commutation(ctx.dec, alpha, s, t, _ensemble_from(ctx, kw))


def _run_gaussian_kernel(ctx, **kw):
    return check_gaussian_kernel(ctx.dec)


_GN_PARAMS = {"s": _to_float, "p": _to_exp, "theta": _to_float,
              "r": _to_exp, "s0": _to_float, "r0": _to_exp}

CHECKS: dict[str, CheckDef] = {
    "partition": CheckDef("partition", _run_partition, {}),
    "multiplier_scaling": CheckDef(
        "multiplier_scaling", _run_multiplier_scaling,
        {"s": _to_float, "r": _to_exp, "p": _to_exp}),
    "gn_inequality": CheckDef(
        "gn_inequality", _run_gn_inequality,
        _ens_params({**_GN_PARAMS, "explore": _to_int}), needs_ensemble=True),
    "gn_split": CheckDef(
        "gn_split", _run_gn_split, _ens_params(_GN_PARAMS),
        needs_ensemble=True),
    "sobolev_embedding": CheckDef(
        "sobolev_embedding", _run_sobolev_embedding,
        _ens_params({"s": _to_float, "r": _to_exp, "p": _to_exp}),
        needs_ensemble=True),
    "besov_sandwich": CheckDef(
        "besov_sandwich", _run_besov_sandwich,
        _ens_params({"s": _to_float, "p": _to_exp}), needs_ensemble=True),
    "semigroup_bounded": CheckDef(
        "semigroup_bounded", _run_semigroup_bounded,
        {"alpha": _to_float, "s": _to_float, "p": _to_exp}),
    "smoothing_rate": CheckDef(
        "smoothing_rate", _run_smoothing_rate,
        {"alpha": _to_float, "s1": _to_float, "s2": _to_float,
         "p1": _to_exp, "p2": _to_exp, "variant": _to_str, "points": _to_int}),
    "strong_continuity": CheckDef(
        "strong_continuity", _run_strong_continuity,
        _ens_params({"alpha": _to_float, "s": _to_float, "p": _to_exp}),
        needs_ensemble=True),
    "resolvent_sector": CheckDef(
        "resolvent_sector", _run_resolvent_sector, {"p": _to_exp}),
    "commutation": CheckDef(
        "commutation", _run_commutation,
        _ens_params({"alpha": _to_float, "s": _to_float, "t": _to_float}),
        needs_ensemble=True),
    "gaussian_kernel": CheckDef(
        "gaussian_kernel", _run_gaussian_kernel, {}),
}


def run_check(name: str, ctx: SpectralContext, params: dict | None = None) -> CheckReport:
    """Run a registered check by name with string-or-typed params."""
    if name not in CHECKS:
        raise ValueError(f"unknown check {name!r}; known: {sorted(CHECKS)}")
    cdef = CHECKS[name]
    kw = {}
    for key, raw in (params or {}).items():
        if key not in cdef.params:
            raise ValueError(f"check {name!r} takes no parameter {key!r}")
        kw[key] = cdef.params[key](raw)
    for key, val in _ENS_DEFAULTS.items():
        if cdef.needs_ensemble:
            kw.setdefault(key, val)
    return cdef.runner(ctx, **kw)
