"""Closed-form hyperbolic geometry for lambda-geodesic hyperplanes.

Everything here is a pure function of its inputs.  Quantities that grow like
e^{cR} are evaluated in log space so that radii up to several hundred remain
representable; the plain-value entry points simply exponentiate the log-space
result and may return ``inf`` only when the value genuinely exceeds double
range is requested explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad
from scipy.special import gammaln

from .errors import DomainError, UnsupportedDimensionError

LOG2 = math.log(2.0)

# Tolerance for clamping the arcosh argument of the section radius; it can
# dip slightly below 1 by rounding when |s| is within ulps of R.
ARCOSH_CLAMP_TOL = 1e-12


# ---------------------------------------------------------------------------
# log-space elementary helpers
# ---------------------------------------------------------------------------

def logcosh(x: float) -> float:
    """log(cosh x), valid for any |x| (no overflow)."""
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - LOG2


def logsinh(x: float) -> float:
    """log(sinh x) for x > 0."""
    if x <= 0.0:
        raise DomainError("logsinh requires x > 0")
    if x < 1e-8:
        return math.log(x)
    # expm1 avoids the 1 - e^{-2x} cancellation for small x
    return x + math.log(-math.expm1(-2.0 * x)) - LOG2


def arcosh(t: float) -> float:
    """Inverse hyperbolic cosine via the logarithmic representation."""
    if t < 1.0:
        raise DomainError(f"arcosh argument {t} < 1")
    if t < 1e150:
        return math.log(t + math.sqrt(t * t - 1.0))
    # sqrt(t^2-1) ~ t for huge t
    return math.log(t) + LOG2


def arcosh_from_log(log_t: float) -> float:
    """arcosh(t) given log t >= 0, stable for arbitrarily large t."""
    if log_t < 0.0:
        if log_t > -ARCOSH_CLAMP_TOL:
            return 0.0
        raise DomainError(f"arcosh argument below 1 (log = {log_t})")
    if log_t > 40.0:
        # 1 - t^-2 indistinguishable from 1
        return log_t + LOG2
    t = math.exp(log_t)
    return math.log(t + math.sqrt(t * t - 1.0))


# ---------------------------------------------------------------------------
# dimension constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionConstants:
    """Euclidean unit-ball volume and surface area in a given dimension."""

    d: int
    kappa: float
    omega: float


def unit_ball_constants(d: int) -> DimensionConstants:
    """kappa_d = pi^{d/2}/Gamma(d/2+1) and omega_d = d*kappa_d.

    omega_d equals the surface measure of the unit sphere S^{d-1} in R^d,
    e.g. omega_2 = 2*pi, omega_3 = 4*pi.
    """
    if d < 1:
        raise DomainError("dimension must be >= 1")
    kappa = math.pi ** (d / 2.0) / math.exp(gammaln(d / 2.0 + 1.0))
    return DimensionConstants(d=d, kappa=kappa, omega=d * kappa)


def sphere_area(d: int) -> float:
    """Surface measure of S^{d-1}, i.e. omega_d."""
    return unit_ball_constants(d).omega


def ball_kappa(d: int) -> float:
    return unit_ball_constants(d).kappa


# ---------------------------------------------------------------------------
# model parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaGeometry:
    """Derived constants of the curvature parameter lambda in [0, 1].

    theta is the boundary intersection angle (cos theta = lambda), mu its
    sine, m its tangent and delta the distance of the equidistant to its base
    geodesic.  m and delta are ``math.inf`` exactly in the degenerate cases
    lambda = 0 and lambda = 1 respectively; consumers must special-case the
    sentinels rather than feed them into further arithmetic.
    """

    lam: float
    theta: float
    mu: float
    m: float
    delta: float

    @property
    def is_horospheric(self) -> bool:
        return self.lam == 1.0


def lambda_geometry(lam: float) -> LambdaGeometry:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    theta = math.acos(lam)
    mu = math.sqrt((1.0 - lam) * (1.0 + lam))
    m = math.inf if lam == 0.0 else mu / lam
    delta = math.inf if lam == 1.0 else math.atanh(lam)
    return LambdaGeometry(lam=lam, theta=theta, mu=mu, m=m, delta=delta)


@dataclass(frozen=True)
class ModelConfig:
    """A single (d, lambda, R) model with its intensity convention.

    intensity_multiplier = 1 is the oriented Lambda_lambda convention; 0.5 at
    lambda = 0 reproduces the unoriented half-line process.
    """

    d: int
    lam: float
    R: float
    intensity_multiplier: float = 1.0
    geometry: LambdaGeometry = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"d must be >= 2, got {self.d}")
        if self.R <= 0.0:
            raise DomainError(f"R must be > 0, got {self.R}")
        if self.intensity_multiplier <= 0.0:
            raise DomainError("intensity_multiplier must be > 0")
        object.__setattr__(self, "geometry", lambda_geometry(self.lam))


# ---------------------------------------------------------------------------
# ball volume
# ---------------------------------------------------------------------------

def log_ball_volume(d: int, R: float) -> float:
    """log of the hyperbolic ball volume omega_d * int_0^R sinh^{d-1}."""
    if d < 2:
        raise DomainError("d must be >= 2")
    if R < 0.0:
        raise DomainError("R must be >= 0")
    if R == 0.0:
        return -math.inf
    log_omega = math.log(sphere_area(d))
    if d == 2:
        # 2*pi*(cosh R - 1) = 2*pi*2*sinh^2(R/2)
        return log_omega + LOG2 + 2.0 * logsinh(R / 2.0)
    if d == 3:
        # pi*(sinh 2R - 2R)/... = 4*pi*(sinh 2R/4 - R/2); omega_3 = 4*pi
        # int_0^R sinh^2 = (sinh 2R - 2R)/4
        ls = logsinh(2.0 * R)
        return log_omega + ls + math.log1p(-2.0 * R * math.exp(-ls)) - math.log(4.0)
    # generic d: shifted quadrature of sinh^{d-1}
    n = d - 1
    shift = n * logsinh(R)

    def integrand(u):
        if u <= 0.0:
            return 0.0
        return math.exp(n * logsinh(u) - shift)

    val, _ = quad(integrand, 0.0, R, limit=200)
    return log_omega + shift + math.log(val)


def ball_volume(d: int, R: float) -> float:
    """Hyperbolic volume of B_R^d (exact antiderivative for d = 2, 3)."""
    if R == 0.0:
        return 0.0
    return math.exp(log_ball_volume(d, R))


# ---------------------------------------------------------------------------
# section radius rho(s; R) and bounds
# ---------------------------------------------------------------------------

def _log_q(geom: LambdaGeometry, s: float, R: float) -> float:
    """log of q = (cosh R - sinh Delta * sinh(s-Delta)) / (cosh Delta cosh(s-Delta)).

    Returns a value that may be slightly negative (>= -tol) at |s| = R.
    """
    delta = geom.delta
    u = s - delta
    a = logcosh(R)
    if geom.lam == 0.0 or u == 0.0:
        log_num = a
    else:
        b = logsinh(delta) + logsinh(abs(u))
        if u < 0.0:
            log_num = max(a, b) + math.log1p(math.exp(-abs(a - b)))
        else:
            # numerator stays positive for |s| <= R, so b < a
            diff = b - a
            if diff >= 0.0:
                raise DomainError("section radius undefined: |s| > R")
            log_num = a + math.log1p(-math.exp(diff))
    log_cosh_delta = logcosh(delta)
    return log_num - log_cosh_delta - logcosh(u)


def rho(geom: LambdaGeometry, s: float, R: float) -> float:
    """Intrinsic radius of the section H(s) cap B_R^d, lambda < 1.

    Returns nan (empty section) when |s| > R; clamps rounding dips of the
    arcosh argument below 1 to a zero radius.
    """
    if geom.is_horospheric:
        raise UnsupportedDimensionError(
            "rho is undefined for lambda = 1; horosphere sections are "
            "Euclidean balls, use intersection_volume"
        )
    if abs(s) > R:
        return math.nan
    lq = _log_q(geom, s, R)
    if lq < 0.0:
        if lq > -ARCOSH_CLAMP_TOL * max(1.0, R):
            return 0.0
        raise DomainError(f"arcosh argument below 1 at s={s}, R={R}")
    return arcosh_from_log(lq)


def rho_ugly(geom: LambdaGeometry, s: float, R: float) -> float:
    """The unsimplified two-square-root form of the section radius.

    Only meaningful at moderate R (direct cosh/sinh evaluation); used as an
    independent cross-check of :func:`rho`.
    """
    if geom.is_horospheric:
        raise UnsupportedDimensionError("rho_ugly requires lambda < 1")
    if abs(s) > R:
        return math.nan
    u = s - geom.delta
    q = (geom.mu * math.cosh(R) - geom.lam * math.sinh(u)) / math.cosh(u)
    if q < 1.0:
        return 0.0
    w = math.sqrt(1.0 - q ** -2)
    return 0.5 * math.log((1.0 + w) / (1.0 - w)) if w < 1.0 else arcosh(q)


def rho_bounds(geom: LambdaGeometry, s: float, R: float):
    """Bounding chain (arcosh_lo, arcosh_hi, linear_lo, linear_hi) for rho."""
    if geom.is_horospheric:
        raise UnsupportedDimensionError("rho_bounds requires lambda < 1")
    if abs(s) > R:
        return math.nan, math.nan, math.nan, math.nan
    delta = geom.delta
    u = s - delta

    def bound(Rshift):
        lq = logcosh(Rshift) - logcosh(u)
        if lq <= 0.0:
            return 0.0
        return arcosh_from_log(lq)

    arcosh_lo = bound(R - delta)
    arcosh_hi = bound(R + delta)
    linear_lo = R - delta - abs(u)
    linear_hi = R + delta - abs(u) + LOG2
    return arcosh_lo, arcosh_hi, linear_lo, linear_hi


# ---------------------------------------------------------------------------
# section volumes
# ---------------------------------------------------------------------------

def log_sinh_power_integral(n: int, rho_val: float) -> float:
    """log of int_0^rho sinh^n(u) du, for n >= 0.

    Exact antiderivatives for n <= 3 (d <= 5), shifted Gauss-Kronrod style
    quadrature beyond.
    """
    if rho_val < 0.0:
        raise DomainError("rho must be >= 0")
    if rho_val == 0.0:
        return -math.inf
    if n == 0:
        return math.log(rho_val)
    if n == 1:
        # cosh(rho) - 1 = 2 sinh^2(rho/2)
        return LOG2 + 2.0 * logsinh(rho_val / 2.0)
    if n == 2:
        # (sinh 2rho - 2rho)/4
        if rho_val < 0.1:
            val, _ = quad(lambda t: math.sinh(t) ** 2, 0.0, rho_val)
            return math.log(val)
        ls = logsinh(2.0 * rho_val)
        return ls + math.log1p(-2.0 * rho_val * math.exp(-ls)) - math.log(4.0)
    if n == 3:
        # (cosh rho - 1)^2 (cosh rho + 2) / 3
        lc1 = LOG2 + 2.0 * logsinh(rho_val / 2.0)          # log(cosh-1)
        lc2 = logcosh(rho_val) + math.log1p(2.0 * math.exp(-logcosh(rho_val)))
        return 2.0 * lc1 + lc2 - math.log(3.0)
    shift = n * logsinh(rho_val)

    def integrand(u):
        if u <= 0.0:
            return 0.0
        return math.exp(n * logsinh(u) - shift)

    val, err = quad(integrand, 0.0, rho_val, limit=200, epsrel=1e-10)
    return shift + math.log(val)


def log_intersection_volume(config: ModelConfig, s: float) -> float:
    """log of the (d-1)-volume of H(s) cap B_R^d (-inf when empty)."""
    d, R = config.d, config.R
    geom = config.geometry
    if abs(s) > R:
        return -math.inf
    if geom.is_horospheric:
        if abs(s) == R:
            return -math.inf
        # kappa_{d-1} [2 e^s (cosh R - cosh s)]^{(d-1)/2}
        lc = logcosh(R)
        log_diff = lc + math.log1p(-math.exp(logcosh(s) - lc))
        return math.log(ball_kappa(d - 1)) + 0.5 * (d - 1) * (LOG2 + s + log_diff)
    r = rho(geom, s, R)
    if r == 0.0 or math.isnan(r):
        return -math.inf
    log_prefactor = math.log(sphere_area(d - 1)) - (d - 1) * math.log(geom.mu)
    return log_prefactor + log_sinh_power_integral(d - 2, r)


def intersection_volume(config: ModelConfig, s: float) -> float:
    """(d-1)-volume of the section of B_R^d by H(s); 0 when |s| > R."""
    lv = log_intersection_volume(config, s)
    return 0.0 if lv == -math.inf else math.exp(lv)


def log_intersection_volume_bound(config: ModelConfig, s: float) -> float:
    """log of the uniform upper bound on the section volume (d >= 3)."""
    d = config.d
    geom = config.geometry
    if d <= 2:
        raise UnsupportedDimensionError("the volume bound requires d >= 3")
    if geom.is_horospheric:
        raise UnsupportedDimensionError("the volume bound requires lambda < 1")
    delta = geom.delta
    log_ratio = logcosh(config.R + delta) - logcosh(s - delta)
    return (math.log(sphere_area(d - 1)) - (d - 1) * math.log(geom.mu)
            - math.log(d - 2) + (d - 2) * log_ratio)


def intersection_volume_bound(config: ModelConfig, s: float) -> float:
    return math.exp(log_intersection_volume_bound(config, s))


def log_intersection_volume_asymptote(config: ModelConfig, s: float) -> float:
    """log of the fixed-s, large-R asymptote of the section volume (d >= 3)."""
    d = config.d
    geom = config.geometry
    if d <= 2:
        raise UnsupportedDimensionError("the asymptote requires d >= 3")
    if geom.is_horospheric:
        raise UnsupportedDimensionError("the asymptote requires lambda < 1")
    return (math.log(sphere_area(d - 1)) - math.log(d - 2) - (d - 2) * LOG2
            - math.log(geom.mu) + (d - 2) * config.R
            - (d - 2) * logcosh(s - geom.delta))


def intersection_volume_asymptote(config: ModelConfig, s: float) -> float:
    return math.exp(log_intersection_volume_asymptote(config, s))
