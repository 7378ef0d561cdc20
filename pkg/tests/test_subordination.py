import numpy as np
import pytest

from speclap.grid import GridFunction, assemble_laplacian, build_domain, eigendecompose
from speclap.subordination import (
    QuadratureError,
    SubordinatorSpec,
    direct_semigroup,
    make_plan,
    subordinated_profile,
    subordinated_semigroup,
    subordinator_density,
    subordinator_mass,
)

import oracles


def _dec(n=60):
    dom = build_domain("interval", n)
    return eigendecompose(assemble_laplacian(dom), dom)


# ---------------------------------------------------------------------------
# density against the alpha = 1/2 closed form


@pytest.mark.parametrize("t", [0.05, 0.3, 1.0, 4.0])
def test_density_matches_stable_half(t):
    spec = SubordinatorSpec(t=t, alpha=0.5)
    s = np.geomspace(1e-3 * t**2, 50.0 * t**2, 25)
    got = subordinator_density(spec, s)
    want = oracles.stable_half_density(t, s)
    assert np.max(np.abs(got - want) / want) < 1e-8


def test_density_vertical_contour_agrees():
    spec_s = SubordinatorSpec(t=1.0, alpha=0.5)
    spec_v = SubordinatorSpec(t=1.0, alpha=0.5, contour="vertical")
    s = np.geomspace(0.05, 5.0, 9)
    a = subordinator_density(spec_s, s)
    b = subordinator_density(spec_v, s)
    assert np.max(np.abs(a - b) / a) < 1e-7


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7, 0.9])
def test_density_nonnegative(alpha):
    spec = SubordinatorSpec(t=0.7, alpha=alpha)
    s = np.geomspace(1e-4, 200.0, 60)
    assert np.min(subordinator_density(spec, s)) >= -1e-13


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7, 0.9])
def test_mass_is_one(alpha):
    spec = SubordinatorSpec(t=1.3, alpha=alpha)
    mass, tail = subordinator_mass(spec)
    assert mass + tail == pytest.approx(1.0, abs=1e-5)


def test_scaling_identity():
    # F_{t,a}(s) = t^{-1/a} F_{1,a}(t^{-1/a} s), checked as two full
    # evaluations rather than by construction
    t, alpha = 2.5, 0.6
    s = np.geomspace(0.1, 30.0, 12)
    left = subordinator_density(SubordinatorSpec(t=t, alpha=alpha), s)
    scale = t ** (-1.0 / alpha)
    right = scale * subordinator_density(SubordinatorSpec(t=1.0, alpha=alpha), scale * s)
    assert np.max(np.abs(left - right) / np.abs(left)) < 1e-6


def test_density_requires_positive_time():
    spec = SubordinatorSpec(t=0.0, alpha=0.5)
    with pytest.raises(ValueError):
        subordinator_density(spec, np.array([1.0]))


def test_alpha_range_enforced():
    with pytest.raises(ValueError):
        SubordinatorSpec(t=1.0, alpha=1.0)
    with pytest.raises(ValueError):
        SubordinatorSpec(t=1.0, alpha=0.0)


# ---------------------------------------------------------------------------
# semigroup plans


def test_plan_picks_smallest_legal_base_power():
    assert make_plan(0.8).l0 == 1
    assert make_plan(1.0).l0 == 1
    assert make_plan(2.5).l0 == 2
    assert make_plan(3.7).l0 == 2
    assert make_plan(4.2).l0 == 3


def test_plan_beta_in_unit_interval():
    for a in (0.3, 1.0, 1.7, 2.9, 3.5):
        plan = make_plan(a)
        assert 0.0 < plan.beta <= 1.0
        assert plan.beta == pytest.approx(a / (2.0 * plan.l0))


def test_plan_rejects_nonpositive_total():
    with pytest.raises(ValueError):
        make_plan(0.0)


def test_even_total_still_subordinates():
    # alpha_total = 2 sits on a boundary: l0 = 1 would need beta = 1, which
    # is outside the legal (0, 1) range, so the plan moves up to l0 = 2
    plan = make_plan(2.0)
    assert plan.l0 == 2
    assert plan.beta == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# subordinated semigroup vs the direct spectral route


@pytest.mark.parametrize("alpha_total", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("t", [0.01, 0.1, 1.0])
def test_subordinated_profile_matches_direct(alpha_total, t):
    dec = test_subordinated_profile_matches_direct.dec
    plan = make_plan(alpha_total)
    spec = SubordinatorSpec(t=t, alpha=plan.beta)
    got = subordinated_profile(dec, plan, spec)
    want = np.exp(-t * dec.eigenvalues ** (alpha_total / 2.0))
    assert np.max(np.abs(got - want)) < 1e-6


test_subordinated_profile_matches_direct.dec = _dec(60)


def test_subordinated_semigroup_action_close_to_direct():
    dec = _dec(100)
    rng = np.random.default_rng(17)
    f = GridFunction(dec.domain, rng.standard_normal(100))
    for alpha_total in (0.5, 1.0, 1.5):
        plan = make_plan(alpha_total)
        spec = SubordinatorSpec(t=0.1, alpha=plan.beta)
        a = subordinated_semigroup(dec, plan, spec, f).values
        b = direct_semigroup(dec, alpha_total, 0.1, f).values
        ref = np.max(np.abs(b))
        assert np.max(np.abs(a - b)) / ref < 1e-4


def test_zero_time_is_identity():
    dec = _dec(40)
    rng = np.random.default_rng(23)
    f = GridFunction(dec.domain, rng.standard_normal(40))
    plan = make_plan(1.0)
    spec = SubordinatorSpec(t=0.0, alpha=plan.beta)
    out = subordinated_semigroup(dec, plan, spec, f).values
    assert np.allclose(out, f.values, atol=1e-14)
    direct = direct_semigroup(dec, 1.0, 0.0, f).values
    assert np.allclose(direct, f.values, atol=1e-14)


def test_direct_semigroup_is_contraction_in_l2():
    dec = _dec(50)
    rng = np.random.default_rng(29)
    f = GridFunction(dec.domain, rng.standard_normal(50))
    out = direct_semigroup(dec, 1.2, 0.3, f).values
    assert np.linalg.norm(out) <= np.linalg.norm(f.values)


def test_vertical_contour_refuses_absurd_oscillation():
    # far out in s the vertical integrand oscillates over ~1e9 periods;
    # the evaluator should refuse rather than return noise
    spec = SubordinatorSpec(t=1.0, alpha=0.5, contour="vertical")
    with pytest.raises(QuadratureError):
        subordinator_density(spec, np.array([1e6]))
