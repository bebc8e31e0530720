"""Poisson sampling of hyperplane coordinates under the invariant measure.

Coordinates are (s, u) with s the signed distance to the origin and u a unit
direction vector; the intensity in s is
``multiplier * (cosh s - lambda sinh s)^{d-1}`` on [-R, R].  Streams are
keyed by (seed, replicate_index) through a counter-based Philox generator so
replicates are reproducible independently of execution order.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, UnsupportedDimensionError
from .hyperbolic import ModelConfig, lambda_geometry

CDF_KNOTS = 8193  # >= 4096 knots for the tabulated-CDF route

MAGIC = b"HYPF"
DUMP_VERSION = 1


def make_rng(seed: int, replicate_index: int = 0) -> np.random.Generator:
    """Counter-based splittable stream keyed by (seed, replicate_index)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(replicate_index,))
    return np.random.Generator(np.random.Philox(ss))


# ---------------------------------------------------------------------------
# intensity
# ---------------------------------------------------------------------------

def intensity_density(config: ModelConfig, s) -> float:
    """multiplier * (cosh s - lambda sinh s)^{d-1}."""
    d = config.d
    geom = config.geometry
    s = np.asarray(s, dtype=np.float64)
    if geom.is_horospheric:
        out = np.exp(-(d - 1) * s)
    else:
        out = (geom.mu * np.cosh(s - geom.delta)) ** (d - 1)
    out = config.intensity_multiplier * out
    return float(out) if out.ndim == 0 else out


def mean_count(config: ModelConfig) -> float:
    """Integral of the intensity density over [-R, R]."""
    d, R = config.d, config.R
    mult = config.intensity_multiplier
    geom = config.geometry
    if geom.is_horospheric:
        return mult * 2.0 * math.sinh((d - 1) * R) / (d - 1)
    if d == 2:
        # mu * int cosh(s - Delta) = mu * 2 sinh R cosh Delta = 2 sinh R
        return mult * 2.0 * math.sinh(R)
    val, _ = quad(lambda u: math.cosh(u) ** (d - 1),
                  -R - geom.delta, R - geom.delta, limit=200)
    return mult * geom.mu ** (d - 1) * val


# ---------------------------------------------------------------------------
# inverse CDF of the normalized s-density
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _cdf_inverse_table(d: int, lam: float, R: float):
    """Monotone spline p -> s for the generic (d >= 3, lambda < 1) case.

    Tabulated on a grid uniform in u = s - Delta (the density is symmetric
    there), CDF by cumulative Simpson on CDF_KNOTS knots.
    """
    geom = lambda_geometry(lam)
    u = np.linspace(-R - geom.delta, R - geom.delta, CDF_KNOTS)
    dens = np.cosh(u) ** (d - 1)
    cdf = cumulative_simpson(dens, x=u, initial=0.0)
    cdf /= cdf[-1]
    # strictly increasing by positivity of the density
    return PchipInterpolator(cdf, u + geom.delta)


def inverse_cdf(config: ModelConfig, p):
    """Quantile function of the normalized s-density on [-R, R]."""
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any((p_arr < 0.0) | (p_arr > 1.0)):
        raise DomainError("quantile argument must lie in [0, 1]")
    d, R = config.d, config.R
    geom = config.geometry
    if geom.is_horospheric:
        a = d - 1
        lo, hi = math.exp(-a * R), math.exp(a * R)
        out = -np.log(hi - p_arr * (hi - lo)) / a
    elif d == 2:
        delta = geom.delta
        lo, hi = math.sinh(-R - delta), math.sinh(R - delta)
        out = delta + np.arcsinh(lo + p_arr * (hi - lo))
    else:
        out = _cdf_inverse_table(d, geom.lam, R)(p_arr)
    out = np.clip(out, -R, R)
    return float(out) if p_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# process samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperplaneCoord:
    s: float
    u: np.ndarray


@dataclass(frozen=True)
class ProcessSample:
    """One realization of the hyperplane process.

    s holds the signed distances in draw order, u the matching unit
    directions (shape (n, d)), or None when direction sampling is disabled.
    """

    config: ModelConfig
    s: np.ndarray
    u: np.ndarray | None
    seed: int
    replicate_index: int = 0

    @property
    def coords(self):
        if self.u is None:
            raise ValueError("directions were not sampled")
        return [HyperplaneCoord(float(si), ui) for si, ui in zip(self.s, self.u)]

    def __len__(self):
        return self.s.shape[0]


def sample_process(config: ModelConfig, seed: int, replicate_index: int = 0,
                   with_directions: bool = True) -> ProcessSample:
    """Draw one Poisson realization of the process restricted to [-R, R]."""
    rng = make_rng(seed, replicate_index)
    n = int(rng.poisson(mean_count(config)))
    p = rng.random(n)
    s = np.atleast_1d(np.asarray(inverse_cdf(config, p), dtype=np.float64))
    if n == 0:
        s = np.empty(0)
    u = None
    if with_directions:
        g = rng.standard_normal((n, config.d))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        u = g / np.where(norms == 0.0, 1.0, norms)
    return ProcessSample(config=config, s=s, u=u, seed=seed,
                         replicate_index=replicate_index)


# ---------------------------------------------------------------------------
# the auxiliary half-line process zeta
# ---------------------------------------------------------------------------

def zeta_rate(d: int, lam: float) -> float:
    """Default density multiplier 2 (1 - lambda^2)^{(d-1)/2}."""
    return 2.0 * (1.0 - lam * lam) ** (0.5 * (d - 1))


@lru_cache(maxsize=64)
def _zeta_quantile_table(d: int, T: float, knots: int = CDF_KNOTS):
    """Quantile interpolator for density cosh^{d-1} on [0, T] (unit rate)."""
    u = np.linspace(0.0, T, knots)
    dens = np.cosh(u) ** (d - 1)
    cdf = cumulative_simpson(dens, x=u, initial=0.0)
    total = cdf[-1]
    cdf /= total
    return PchipInterpolator(cdf, u), total


def zeta_mean_count(d: int, lam: float, T: float, rate: float | None = None) -> float:
    rate = zeta_rate(d, lam) if rate is None else rate
    _, total = _zeta_quantile_table(d, float(T))
    return rate * total


def sample_zeta(d: int, lam: float, T: float, seed: int,
                rate: float | None = None, rng=None) -> np.ndarray:
    """Poisson process on [0, T] with density rate * cosh^{d-1}(s), sorted.

    rate defaults to 2 (1-lambda^2)^{(d-1)/2}; pass rate=1 for the
    unoriented half-line variant.
    """
    if lam >= 1.0:
        raise UnsupportedDimensionError("the zeta process requires lambda < 1")
    if T <= 0.0:
        return np.empty(0)
    rate = zeta_rate(d, lam) if rate is None else rate
    interp, total = _zeta_quantile_table(d, float(T))
    if rng is None:
        rng = make_rng(seed)
    n = int(rng.poisson(rate * total))
    return np.sort(interp(rng.random(n)))


# ---------------------------------------------------------------------------
# binary dump
# ---------------------------------------------------------------------------

def write_sample_dump(path, samples) -> None:
    """Little-endian dump: one (header, payload) block per ProcessSample."""
    with open(path, "wb") as fh:
        for sample in samples:
            cfg = sample.config
            n = len(sample)
            fh.write(MAGIC)
            fh.write(struct.pack("<HHddQQ", DUMP_VERSION, cfg.d, cfg.lam,
                                 cfg.R, sample.seed, n))
            if sample.u is None:
                raise ValueError("cannot dump a sample without directions")
            rec = np.empty((n, 1 + cfg.d))
            rec[:, 0] = sample.s
            rec[:, 1:] = sample.u
            fh.write(rec.astype("<f8").tobytes())


def read_sample_dump(path):
    """Inverse of :func:`write_sample_dump`; multiplier defaults to 1."""
    out = []
    header = struct.Struct("<HHddQQ")
    with open(path, "rb") as fh:
        while True:
            magic = fh.read(4)
            if not magic:
                break
            if magic != MAGIC:
                raise ValueError(f"bad magic {magic!r}")
            version, d, lam, R, seed, n = header.unpack(fh.read(header.size))
            if version != DUMP_VERSION:
                raise ValueError(f"unsupported dump version {version}")
            rec = np.frombuffer(fh.read(8 * n * (1 + d)), dtype="<f8")
            rec = rec.reshape(n, 1 + d)
            cfg = ModelConfig(d=d, lam=lam, R=R)
            out.append(ProcessSample(config=cfg, s=rec[:, 0].copy(),
                                     u=rec[:, 1:].copy(), seed=seed))
    return out
