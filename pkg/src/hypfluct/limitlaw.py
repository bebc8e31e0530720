"""The infinitely divisible limit laws of the surface-area fluctuations.

The limit variable is a compensated sum of jump sizes h(s) = cosh^{-(d-2)}(s)
over a Poisson process on [0, infinity) with density rate * cosh^{d-1}(s).
Simulation is hybrid: jumps below a cutoff T0 are sampled exactly, the
compensated small-jump tail beyond T0 is replaced by a Gaussian with the
matching variance (the standard small-jump normal approximation; the bias is
controlled by the third cumulant of the tail).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.optimize import brentq
from scipy.special import gammaln

from . import kernels
from .errors import DomainError, QuadratureError
from .hyperbolic import logcosh, sphere_area
from .sampling import make_rng, zeta_rate

DEFAULT_POINTS_PER_DRAW = 1000.0
CF_TRUNCATION_EPS = 1e-10


def limit_scale_constant(d: int, lam: float) -> float:
    """omega_{d-1} / ((d-2) 2^{d-2} sqrt(1-lambda^2)); infinite at lambda=1."""
    if d < 4:
        raise DomainError("the non-Gaussian limit requires d >= 4")
    if not 0.0 <= lam <= 1.0:
        raise DomainError("lambda must lie in [0, 1]")
    c = sphere_area(d - 1) / ((d - 2) * 2.0 ** (d - 2))
    if lam == 1.0:
        return math.inf
    return c / math.sqrt(1.0 - lam * lam)


def _cosh_power_tail(p: float, T: float) -> float:
    """int_T^infinity cosh(s)^p ds for p < -1 (or p=-1, which still converges)."""
    # evaluate via exp(p * logcosh) so large s cannot overflow
    val, err = quad(lambda s: math.exp(p * logcosh(s)), T, np.inf, limit=200)
    if not math.isfinite(val):
        raise QuadratureError("tail integral did not converge", achieved=err)
    return val


def _jump_mean_count(d: int, rate: float, T: float) -> float:
    val, _ = quad(lambda s: math.cosh(s) ** (d - 1), 0.0, T, limit=200)
    return rate * val


@dataclass(frozen=True)
class LimitLawSpec:
    """Parameters of one limit law (d >= 4, lambda < 1)."""

    d: int
    lam: float
    rate: float
    T0: float
    tail_variance: float
    scale_constant: float


def limit_law_spec(d: int, lam: float = 0.0, rate: float | None = None,
                   points_per_draw: float = DEFAULT_POINTS_PER_DRAW) -> LimitLawSpec:
    """Build a LimitLawSpec; rate defaults to 2 (1-lambda^2)^{(d-1)/2}.

    Pass rate=1 for the unoriented half-line variant.  T0 is chosen so that
    the exactly-simulated jump count per draw is about points_per_draw.
    """
    if d < 4:
        raise DomainError("the limit law requires d >= 4")
    if lam >= 1.0:
        raise DomainError("the limit law requires lambda < 1 (Gaussian regime)")
    rate = zeta_rate(d, lam) if rate is None else float(rate)
    T0 = brentq(lambda T: _jump_mean_count(d, rate, T) - points_per_draw,
                1e-3, 60.0)
    tail_var = rate * _cosh_power_tail(3 - d, T0)
    return LimitLawSpec(d=d, lam=lam, rate=rate, T0=T0,
                        tail_variance=tail_var,
                        scale_constant=limit_scale_constant(d, lam))


def tail_variance(spec: LimitLawSpec, T: float) -> float:
    """Variance of the compensated jump sum beyond T."""
    return spec.rate * _cosh_power_tail(3 - spec.d, T)


def truncated_variance(spec: LimitLawSpec, T: float) -> float:
    """Variance rate * int_0^T cosh^{3-d} of the compensated sum up to T."""
    val, _ = quad(lambda s: math.cosh(s) ** (3 - spec.d), 0.0, T, limit=200)
    return spec.rate * val


def tail_third_cumulant(spec: LimitLawSpec, T: float | None = None) -> float:
    """Third cumulant of the tail beyond T (bias of the Gaussian substitute)."""
    T = spec.T0 if T is None else T
    return spec.rate * _cosh_power_tail(5 - 2 * spec.d, T)


def limit_cumulant(spec: LimitLawSpec, ell: int) -> float:
    """Closed-form cumulants: rate * (sqrt(pi)/2) Gamma(h/2)/Gamma((h+1)/2)."""
    if ell < 1:
        raise DomainError("cumulant order must be >= 1")
    if ell == 1:
        return 0.0
    h = (spec.d - 2) * ell - (spec.d - 1)
    if h <= 0:
        raise DomainError(f"divergent cumulant: (d-2)l-(d-1) = {h} <= 0")
    return spec.rate * 0.5 * math.sqrt(math.pi) * math.exp(
        gammaln(h / 2.0) - gammaln((h + 1.0) / 2.0))


def levy_density(d: int, y) -> float:
    """Lebesgue density of the Levy measure on (0, 1), per unit rate."""
    if d < 4:
        raise DomainError("requires d >= 4")
    y_arr = np.asarray(y, dtype=np.float64)
    if np.any((y_arr <= 0.0) | (y_arr >= 1.0)):
        raise DomainError("the Levy measure lives on (0, 1)")
    n = d - 2
    out = 1.0 / (n * y_arr ** ((2.0 * d - 3.0) / n)
                 * np.sqrt(1.0 - y_arr ** (2.0 / n)))
    return float(out) if y_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# characteristic function and CDF inversion
# ---------------------------------------------------------------------------

def _compensated_cis(z):
    """e^{iz} - 1 - iz, series-stabilized for small |z| (array-valued)."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty(z.shape, dtype=np.complex128)
    small = np.abs(z) < 1e-2
    zs = z[small]
    # z^2..z^7 terms; relative error below 1e-14 at |z| = 1e-2
    acc = np.zeros(zs.shape, dtype=np.complex128)
    term = np.full(zs.shape, 1.0 + 0.0j)
    iz = 1j * zs
    fact = 1.0
    for k in range(1, 8):
        term = term * iz
        fact *= k
        if k >= 2:
            acc += term / fact
    out[small] = acc
    zl = z[~small]
    out[~small] = np.exp(1j * zl) - 1.0 - 1j * zl
    return out


@lru_cache(maxsize=16)
def _cf_nodes(d: int, n_nodes: int = 2000, s_max: float = 40.0):
    """Gauss-Legendre nodes/weights and precomputed h, cosh^{d-1} factors."""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    s = 0.5 * s_max * (x + 1.0)
    w = 0.5 * s_max * w
    h = np.cosh(s) ** (-(d - 2))
    dens = np.cosh(s) ** (d - 1)
    return h, w * dens


def log_characteristic_function(spec: LimitLawSpec, t):
    """log E e^{itZ} = rate * int (e^{ith}-1-ith) cosh^{d-1}, vectorized in t."""
    h, wd = _cf_nodes(spec.d)
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    vals = _compensated_cis(np.outer(t_arr, h)) @ wd
    out = spec.rate * vals
    return out if np.ndim(t) else complex(out[0])


def characteristic_function(spec: LimitLawSpec, t):
    out = np.exp(log_characteristic_function(spec, t))
    return out if np.ndim(t) else complex(out)


def _cf_truncation_point(spec: LimitLawSpec) -> float:
    t = 1.0
    for _ in range(60):
        if abs(characteristic_function(spec, t)) < CF_TRUNCATION_EPS:
            return t
        t *= 2.0
    raise QuadratureError("characteristic function does not decay; no "
                          "truncation point found", achieved=t)


def cdf_via_inversion(spec: LimitLawSpec, x_grid, n_t: int = 16384,
                      monotone_tol: float = 1e-6):
    """CDF at the sorted points x_grid by half-inversion of the CF.

    F(x) = 1/2 - (1/pi) int_0^{t*} Im[e^{-itx} psi(t)]/t dt with t* chosen by
    doubling search on |psi|; the result is clipped to [0, 1] and corrected
    to be monotone (correction must stay below monotone_tol).
    """
    x = np.asarray(x_grid, dtype=np.float64)
    if x.ndim != 1 or np.any(np.diff(x) < 0.0):
        raise DomainError("x_grid must be a sorted 1-d array")
    t_star = _cf_truncation_point(spec)
    t = np.linspace(0.0, t_star, n_t + 1)
    psi = characteristic_function(spec, t[1:])
    # integrand -> -x as t -> 0
    phase = np.exp(-1j * np.outer(x, t[1:]))
    integrand = np.empty((x.size, n_t + 1))
    integrand[:, 1:] = (phase * psi).imag / t[1:]
    integrand[:, 0] = -x
    dt = t_star / n_t
    # composite Simpson (n_t is even)
    weights = np.full(n_t + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    integral = integrand @ weights * (dt / 3.0)
    F = 0.5 - integral / math.pi
    F = np.clip(F, 0.0, 1.0)
    F_mono = np.maximum.accumulate(F)
    correction = float(np.max(F_mono - F)) if F.size else 0.0
    if correction > monotone_tol:
        raise QuadratureError(
            f"inversion CDF non-monotone beyond tolerance ({correction:.2e})",
            achieved=correction)
    return F_mono


# ---------------------------------------------------------------------------
# hybrid sampler
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _jump_quantile_table(d: int, T0: float, knots: int = 1 << 17):
    u = np.linspace(0.0, T0, knots + 1)
    cdf = cumulative_simpson(np.cosh(u) ** (d - 1), x=u, initial=0.0)
    total = cdf[-1]
    cdf /= total
    return u, cdf, total


def sample_limit(spec: LimitLawSpec, n: int, seed: int,
                 chunk_draws: int = 10000) -> np.ndarray:
    """n hybrid-sampler draws of the limit variable.

    Each draw is the compensated jump sum over [0, T0] plus an independent
    Gaussian carrying the small-jump tail variance.
    """
    u_tab, cdf_tab, total = _jump_quantile_table(spec.d, spec.T0)
    mean_jumps = spec.rate * total
    compensator = spec.rate * math.sinh(spec.T0)
    sigma_tail = math.sqrt(spec.tail_variance)
    out = np.empty(n)
    for b, start in enumerate(range(0, n, chunk_draws)):
        m = min(chunk_draws, n - start)
        rng = make_rng(seed, b)
        counts = rng.poisson(mean_jumps, size=m)
        s = np.interp(rng.random(int(counts.sum())), cdf_tab, u_tab)
        h = np.cosh(s) ** (-(spec.d - 2))
        offsets = np.concatenate(([0], np.cumsum(counts)))
        sums = kernels.zeta_increment_sums(h, offsets)
        out[start:start + m] = sums - compensator + sigma_tail * rng.standard_normal(m)
    return out


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def write_cf_csv(path, t_grid, psi_values) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,re_psi,im_psi\n")
        for t, p in zip(t_grid, psi_values):
            p = complex(p)
            fh.write(f"{float(t)!r},{p.real!r},{p.imag!r}\n")


def write_cdf_csv(path, x_grid, F_values) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,F\n")
        for x, F in zip(x_grid, F_values):
            fh.write(f"{float(x)!r},{float(F)!r}\n")
