import numpy as np
import pytest

from speclap.grid import GridFunction, assemble_laplacian, build_domain, eigendecompose
from speclap.harness import (
    CHECKS,
    GNIndices,
    RefinementUnavailable,
    build_context,
    gn_split_certificate,
    make_ensemble,
    refine_context,
    run_check,
    validate_gn_indices,
)
from speclap.spaces import lp_norm


# ---------------------------------------------------------------------------
# contexts


def test_context_is_cached():
    a = build_context("interval", 40)
    b = build_context("interval", 40)
    assert a is b
    c = build_context("interval", 41)
    assert c is not a


def test_context_smoothness_order_is_part_of_the_key():
    a = build_context("interval", 40)
    b = build_context("interval", 40, smoothness_order=3)
    assert b is not a
    assert b.part.smoothness_order == 3


def test_refine_context_halves_the_spacing():
    ctx = build_context("interval", 40)
    ref = refine_context(ctx.dec, ctx.part)
    # h -> h/2 keeps the endpoints, so 40 interior nodes become 81
    assert ref.dec.eigenvalues.shape[0] == 81
    assert ref.dec.domain.h == pytest.approx(ctx.dec.domain.h / 2.0)
    # the bottom of the spectrum barely moves
    assert ref.dec.eigenvalues[0] == pytest.approx(ctx.dec.eigenvalues[0], rel=1e-3)


def test_refine_context_rejects_file_domains(tmp_path):
    p = tmp_path / "blob.txt"
    rows = ["00000"] + ["01110"] * 5 + ["00000"]
    p.write_text("2 0.1 5 7\n" + "\n".join(rows) + "\n")
    dom = build_domain(str(p))
    dec = eigendecompose(assemble_laplacian(dom), dom)
    part = build_context("interval", 40).part
    with pytest.raises(RefinementUnavailable):
        refine_context(dec, part)


# ---------------------------------------------------------------------------
# random function ensembles


def test_ensemble_is_deterministic(interval_ctx):
    a = make_ensemble(interval_ctx.dec, profile="low_pass", count=3, seed=7)
    b = make_ensemble(interval_ctx.dec, profile="low_pass", count=3, seed=7)
    for fa, fb in zip(a.functions, b.functions):
        assert np.array_equal(fa.values, fb.values)
    c = make_ensemble(interval_ctx.dec, profile="low_pass", count=3, seed=8)
    assert any(
        not np.array_equal(fa.values, fc.values)
        for fa, fc in zip(a.functions, c.functions)
    )


def test_ensemble_records_its_recipe(interval_ctx):
    e = make_ensemble(interval_ctx.dec, profile="white", count=5, seed=11)
    assert e.profile == "white"
    assert e.seed == 11
    assert len(e.functions) == 5


def test_point_mass_profile_is_a_normalized_eigenvector(interval_ctx):
    e = make_ensemble(interval_ctx.dec, profile="point_mass:3", count=1, seed=1)
    v = e.functions[0].values
    b3 = interval_ctx.dec.basis[:, 3]
    # proportional to mode 3, normalized in the measure-weighted l2 norm
    cross = abs(v @ b3) / (np.linalg.norm(v) * np.linalg.norm(b3))
    assert cross == pytest.approx(1.0, abs=1e-12)
    assert lp_norm(interval_ctx.dec.domain, v, 2) == pytest.approx(1.0, rel=1e-12)


def test_band_profile_needs_a_partition(interval_ctx):
    with pytest.raises(ValueError, match="partition"):
        make_ensemble(interval_ctx.dec, profile="band:2", count=2, seed=1)
    e = make_ensemble(
        interval_ctx.dec, profile="band:4", count=2, seed=1, part=interval_ctx.part
    )
    assert len(e.functions) == 2


def test_unknown_profile_rejected(interval_ctx):
    with pytest.raises(ValueError, match="profile"):
        make_ensemble(interval_ctx.dec, profile="mauve", count=2, seed=1)


# ---------------------------------------------------------------------------
# the check registry and runner


def test_registry_lists_twelve_checks():
    assert len(CHECKS) == 12
    for name, cdef in CHECKS.items():
        assert callable(cdef.runner)
        assert isinstance(cdef.params, dict)


def test_run_check_rejects_unknown_names(interval_ctx):
    with pytest.raises(ValueError, match="unknown check"):
        run_check("nope", interval_ctx)


def test_run_check_rejects_unknown_params(interval_ctx):
    with pytest.raises(ValueError, match="takes no parameter"):
        run_check("partition", interval_ctx, {"bogus": "1"})


def test_run_check_rejects_unparseable_values(interval_ctx):
    with pytest.raises(ValueError):
        run_check("sobolev_embedding", interval_ctx, {"p": "zzz"})


_SMOKE = [
    ("partition", {}),
    ("multiplier_scaling", {"s": "1", "r": "2", "p": "2"}),
    ("sobolev_embedding", {"s": "1", "r": "2", "p": "inf", "count": "4"}),
    ("besov_sandwich", {"s": "1", "p": "2", "count": "4"}),
    ("gn_inequality", {"s": "1", "r": "2", "theta": "0.5", "s0": "2",
                       "r0": "2", "p": "2", "count": "4"}),
    ("gn_split", {"s": "1", "r": "2", "theta": "0.5", "s0": "2",
                  "r0": "2", "p": "2", "count": "4"}),
    ("semigroup_bounded", {"alpha": "1", "p": "2"}),
    ("smoothing_rate", {"alpha": "2", "s1": "0", "s2": "1", "p1": "2", "p2": "2"}),
    ("strong_continuity", {"alpha": "1", "p": "2", "count": "4"}),
    ("resolvent_sector", {"p": "2"}),
    ("commutation", {"alpha": "1", "t": "0.05", "count": "4"}),
    ("gaussian_kernel", {}),
]


@pytest.mark.parametrize("name,params", _SMOKE, ids=[n for n, _ in _SMOKE])
def test_every_check_passes_on_the_reference_line(interval_ctx, name, params):
    rep = run_check(name, interval_ctx, params)
    assert rep.status == "pass", rep.notes
    assert rep.check == name
    assert rep.domain == "interval:200"
    assert rep.grid
    assert rep.provenance
    assert rep.comparison
    assert isinstance(rep.diagnostics, dict)


def test_dyadic_scaling_needs_enough_blocks(square_ctx):
    # 24 x 24 resolves only 3 usable blocks; the slope fit refuses to run
    with pytest.raises(ValueError, match="usable dyadic blocks"):
        run_check("multiplier_scaling", square_ctx, {"s": "0", "r": "2", "p": "2"})


# ---------------------------------------------------------------------------
# interpolation-index validation


def test_validator_accepts_the_exact_l2_triple():
    idx = GNIndices(s=1.0, p=2.0, theta=0.5, r=2.0, s0=2.0, r0=2.0)
    v = validate_gn_indices(idx, d=1)
    assert v.admissible


def test_validator_rejects_the_excluded_boundary_case():
    # p strictly between r and r0 with s exactly (1 - theta) s0
    idx = GNIndices(s=0.5, p=2.0, theta=0.5, r=1.0, s0=1.0, r0=np.inf)
    v = validate_gn_indices(idx, d=1)
    assert not v.admissible
    assert "excluded" in v.reason


def test_validator_rejects_broken_balance():
    idx = GNIndices(s=1.0, p=2.0, theta=0.5, r=2.0, s0=2.0, r0=2.1)
    v = validate_gn_indices(idx, d=1)
    assert not v.admissible
    assert "balance" in v.reason


def test_validator_rejects_theta_endpoints():
    idx = GNIndices(s=1.0, p=2.0, theta=0.0, r=2.0, s0=2.0, r0=2.0)
    v = validate_gn_indices(idx, d=1)
    assert not v.admissible
    assert "theta" in v.reason


def test_inadmissible_indices_raise_without_explore(interval_ctx):
    bad = {"s": "0.5", "r": "1", "theta": "0.5", "s0": "1", "r0": "inf",
           "p": "2", "count": "2"}
    with pytest.raises(ValueError, match="inadmissible"):
        run_check("gn_inequality", interval_ctx, bad)


def test_explore_mode_reports_inconclusive(interval_ctx):
    bad = {"s": "0.5", "r": "1", "theta": "0.5", "s0": "1", "r0": "inf",
           "p": "2", "count": "2", "explore": "1"}
    rep = run_check("gn_inequality", interval_ctx, bad)
    assert rep.status == "inconclusive"
    assert rep.diagnostics["explore"]


# ---------------------------------------------------------------------------
# the low/high split certificate


@pytest.fixture(scope="module")
def split_setup(interval_ctx):
    idx = GNIndices(s=1.0, p=2.0, theta=0.5, r=2.0, s0=2.0, r0=2.0)
    rng = np.random.default_rng(5)
    f = GridFunction(interval_ctx.dec.domain, rng.standard_normal(200))
    return interval_ctx, idx, f


def test_split_bound_dominates_the_norm(split_setup):
    ctx, idx, f = split_setup
    cert = gn_split_certificate(ctx.dec, ctx.part, idx, f)
    assert cert.bound >= cert.norm_value
    assert np.isfinite(cert.n_theory)


def test_split_cut_matches_exhaustive_search(split_setup):
    ctx, idx, f = split_setup
    cert = gn_split_certificate(ctx.dec, ctx.part, idx, f)
    best = min(cert.bounds_by_cut, key=cert.bounds_by_cut.get)
    assert abs(best - cert.n_star) <= 1


def test_split_cut_ignores_global_rescaling(split_setup):
    # both route terms are linear in f, so the optimal cut cannot move
    ctx, idx, f = split_setup
    base = gn_split_certificate(ctx.dec, ctx.part, idx, f)
    for c in (10.0, 0.01):
        g = GridFunction(ctx.dec.domain, c * f.values)
        cert = gn_split_certificate(ctx.dec, ctx.part, idx, g)
        assert cert.n_star == base.n_star
