"""Surface functional: sums, exact moment integrals, asymptotic regimes.

Frozen constants come from independent 40-digit mpmath quadrature of the
defining integrals (not from this package).
"""

import math

import numpy as np
import pytest

from hypfluct.errors import DomainError
from hypfluct.hyperbolic import ModelConfig, ball_volume, lambda_geometry
from hypfluct.sampling import sample_process
from hypfluct.functionals import (
    berry_esseen_indicator,
    cosh_power_integral,
    cumulant_integral,
    expected_surface_area,
    limit_profile,
    normalized_cumulant_limit,
    normalized_profile,
    simulate_surface,
    total_surface_area,
    variance,
    variance_order,
    write_cumulant_csv,
    write_surface_csv,
)
from hypfluct.hyperbolic import intersection_volume_bound


# ---------------------------------------------------------------------------
# total surface area
# ---------------------------------------------------------------------------

def test_total_surface_area_empty_sample():
    config = ModelConfig(d=2, lam=0.0, R=1e-8)
    result = total_surface_area(sample_process(config, seed=0))
    assert result.value == 0.0
    assert result.positive_part == 0.0 and result.negative_part == 0.0


def test_total_surface_area_sign_split():
    config = ModelConfig(d=2, lam=0.0, R=4.0)
    sample = sample_process(config, seed=3)
    result = total_surface_area(sample)
    assert result.value == pytest.approx(
        result.positive_part + result.negative_part, rel=1e-15)
    assert result.positive_part > 0.0 and result.negative_part > 0.0
    # exact split: recompute from the definition
    from hypfluct.hyperbolic import intersection_volume
    pos = math.fsum(intersection_volume(config, float(s))
                    for s in sample.s if s >= 0.0)
    assert result.positive_part == pytest.approx(pos, rel=1e-10)


# ---------------------------------------------------------------------------
# moment integrals
# ---------------------------------------------------------------------------

def test_expected_surface_area_is_lambda_free():
    vals = [expected_surface_area(ModelConfig(d=3, lam=lam, R=2.0))
            for lam in (0.0, 0.5, 1.0)]
    assert vals[0] == vals[1] == vals[2]
    assert vals[0] == pytest.approx(ball_volume(3, 2.0), rel=1e-15)


def test_crofton_identity_via_quadrature():
    """First moment quadrature reproduces the ball volume independently."""
    from hypfluct.functionals import _cumulant_quadrature
    for d, lam in ((2, 0.0), (3, 0.5), (4, 1.0), (4, 0.5)):
        config = ModelConfig(d=d, lam=lam, R=3.0)
        assert _cumulant_quadrature(config, 1) == pytest.approx(
            ball_volume(d, 3.0), rel=1e-8)


def test_variance_frozen_values():
    assert variance(ModelConfig(d=2, lam=0.0, R=4.0)) == pytest.approx(
        691.88999864186696, rel=1e-9)
    assert variance(ModelConfig(d=2, lam=0.5, R=4.0)) == pytest.approx(
        732.23169822286067, rel=1e-9)
    assert variance(ModelConfig(d=2, lam=1.0, R=4.0)) == pytest.approx(
        1311.0882263510111, rel=1e-9)


def test_variance_d3_closed_form_matches_quadrature():
    from hypfluct.functionals import _cumulant_quadrature
    config = ModelConfig(d=3, lam=0.5, R=3.0)
    closed = variance(config)
    assert closed == pytest.approx(12182.138471702879, rel=1e-12)
    assert _cumulant_quadrature(config, 2) == pytest.approx(closed, rel=1e-8)


def test_variance_d3_lambda_independent():
    a = variance(ModelConfig(d=3, lam=0.0, R=3.0))
    b = variance(ModelConfig(d=3, lam=0.5, R=3.0))
    assert a == b


def test_cumulant_integral_multiplier_linearity():
    base = cumulant_integral(ModelConfig(d=3, lam=0.2, R=2.0), 3)
    scaled = cumulant_integral(
        ModelConfig(d=3, lam=0.2, R=2.0, intensity_multiplier=2.5), 3)
    assert scaled == pytest.approx(2.5 * base, rel=1e-8)


def test_cumulant_integral_domain():
    config = ModelConfig(d=2, lam=0.0, R=1.0)
    with pytest.raises(DomainError):
        cumulant_integral(config, 0)
    with pytest.raises(DomainError):
        cumulant_integral(config, 9)


def test_cumulant_integral_small_radius_vanishes():
    config = ModelConfig(d=2, lam=0.0, R=1e-4)
    assert variance(config) < 1e-10


# ---------------------------------------------------------------------------
# growth orders and limits
# ---------------------------------------------------------------------------

def test_variance_order_cases():
    assert variance_order(ModelConfig(d=2, lam=0.0, R=3.0)) == pytest.approx(math.exp(3.0))
    assert variance_order(ModelConfig(d=3, lam=0.5, R=3.0)) == pytest.approx(3.0 * math.exp(6.0))
    assert variance_order(ModelConfig(d=5, lam=0.0, R=2.0)) == pytest.approx(math.exp(12.0))
    assert variance_order(ModelConfig(d=3, lam=1.0, R=2.0)) == pytest.approx(2.0 * math.exp(4.0))


def test_horosphere_variance_order_constant():
    # Var / (R e^{(d-1)R}) climbs towards 2 kappa_{d-1}^2 = 8 at d = 2
    ratios = [variance(ModelConfig(d=2, lam=1.0, R=R)) / (R * math.exp(R))
              for R in (10.0, 20.0, 40.0, 80.0)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(8.0, rel=0.02)


def test_cosh_power_integral():
    # h=1: pi; h=2: 2; checked against the Gamma closed form and direct quad
    assert cosh_power_integral(1.0) == pytest.approx(math.pi, rel=1e-14)
    assert cosh_power_integral(2.0) == pytest.approx(2.0, rel=1e-14)
    from scipy.integrate import quad
    direct, _ = quad(lambda y: math.exp(-3.0 * abs(y)) * (2.0 / (1.0 + math.exp(-2.0 * abs(y)))) ** 3.0,
                     -np.inf, np.inf)
    assert cosh_power_integral(3.0) == pytest.approx(direct, rel=1e-9)
    with pytest.raises(DomainError):
        cosh_power_integral(0.0)


def test_normalized_cumulant_limit_d4():
    assert normalized_cumulant_limit(4, 0.0, 2) == pytest.approx(
        math.pi ** 3 / 4.0, rel=1e-13)
    assert normalized_cumulant_limit(4, 0.0, 3) == pytest.approx(
        math.pi ** 4 / 16.0, rel=1e-13)
    with pytest.raises(DomainError):
        normalized_cumulant_limit(3, 0.0, 2)
    with pytest.raises(DomainError):
        normalized_cumulant_limit(4, 1.0, 2)


def test_normalized_profile_converges_to_limit_profile():
    s = 0.8
    lam = 0.3
    target = limit_profile(4, lam, s)
    errs = [abs(normalized_profile(ModelConfig(d=4, lam=lam, R=R), s) / target - 1.0)
            for R in (6.0, 9.0, 12.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 1e-4


def test_normalized_profile_dominated_bound():
    config = ModelConfig(d=4, lam=0.5, R=6.0)
    geom = lambda_geometry(0.5)
    C = intersection_volume_bound(config, geom.delta) * math.exp(-2.0 * config.R)
    for s in np.linspace(-5.9, 5.9, 61):
        prof = normalized_profile(config, float(s))
        dominator = C * math.cosh(float(s) - geom.delta) ** -2.0
        assert prof <= dominator * (1.0 + 1e-12)


def test_normalized_profile_edges():
    config = ModelConfig(d=4, lam=0.0, R=3.0)
    assert normalized_profile(config, 3.0) == 0.0
    assert normalized_profile(config, 5.0) == 0.0


# ---------------------------------------------------------------------------
# Berry-Esseen indicator trends
# ---------------------------------------------------------------------------

def test_berry_esseen_d2_exponential_decay():
    # indicator ~ c e^{-R/2}: per +2 in R the ratio is near e^{-1}
    a = berry_esseen_indicator(ModelConfig(d=2, lam=0.0, R=6.0))
    b = berry_esseen_indicator(ModelConfig(d=2, lam=0.0, R=8.0))
    assert b / a == pytest.approx(math.exp(-1.0), rel=0.15)


def test_berry_esseen_d3_R_inverse():
    vals = [berry_esseen_indicator(ModelConfig(d=3, lam=0.0, R=R)) * R
            for R in (4.0, 8.0, 12.0)]
    assert all(0.5 < v < 1.5 for v in vals)


def test_berry_esseen_d4_no_clt():
    vals = [berry_esseen_indicator(ModelConfig(d=4, lam=0.0, R=R))
            for R in (4.0, 6.0, 8.0)]
    assert all(v > 0.25 for v in vals)


# ---------------------------------------------------------------------------
# Monte Carlo driver
# ---------------------------------------------------------------------------

def test_simulate_surface_deterministic():
    config = ModelConfig(d=2, lam=0.5, R=3.0)
    a = simulate_surface(config, 100, seed=5)
    b = simulate_surface(config, 100, seed=5)
    np.testing.assert_array_equal(a[0], b[0])
    assert not np.array_equal(a[0], simulate_surface(config, 100, seed=6)[0])


def test_simulate_surface_split_consistency():
    config = ModelConfig(d=3, lam=0.0, R=2.0)
    S, Sp, Sn = simulate_surface(config, 50, seed=1)
    np.testing.assert_allclose(S, Sp + Sn, rtol=1e-15)
    assert np.all(Sp >= 0.0) and np.all(Sn >= 0.0)


def test_simulate_surface_matches_analytic_moments():
    config = ModelConfig(d=2, lam=0.0, R=3.0)
    S, _, _ = simulate_surface(config, 20000, seed=2)
    mean = expected_surface_area(config)
    var = variance(config)
    assert abs(S.mean() - mean) < 5.0 * math.sqrt(var / 20000.0)
    assert np.var(S, ddof=1) == pytest.approx(var, rel=0.1)


def test_simulate_surface_agrees_with_per_replicate_path():
    """Statistical cross-check of the two sampling paths."""
    config = ModelConfig(d=2, lam=1.0, R=3.0)
    S, _, _ = simulate_surface(config, 4000, seed=3)
    loop = np.array([total_surface_area(sample_process(config, 90, i,
                                                       with_directions=False)).value
                     for i in range(4000)])
    assert abs(S.mean() - loop.mean()) < 5.0 * math.sqrt(2.0 * variance(config) / 4000.0)


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def test_write_cumulant_csv_roundtrip(tmp_path):
    rows = [(2, 0.0, 3.0, 2, 123.4567890123), (3, 0.5, 2.0, 3, 1e-15)]
    path = tmp_path / "cum.csv"
    write_cumulant_csv(path, rows)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "d,lambda,R,k,I_value"
    d, lam, R, k, val = lines[1].split(",")
    assert (int(d), float(lam), float(R), int(k)) == (2, 0.0, 3.0, 2)
    assert float(val) == 123.4567890123


def test_write_surface_csv(tmp_path):
    path = tmp_path / "surf.csv"
    write_surface_csv(path, [1.5, 2.5], [1.0, 2.0], [0.5, 0.5])
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "replicate,S,S_plus,S_minus"
    assert lines[1] == "0,1.5,1.0,0.5"
