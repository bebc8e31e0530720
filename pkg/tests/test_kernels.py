"""Kernel dispatch: numba and numpy paths must agree bit-for-bit-ish."""

import math

import numpy as np
import pytest

from hypfluct import kernels
from hypfluct.hyperbolic import ModelConfig, intersection_volume

needs_numba = pytest.mark.skipif(not kernels.USE_NUMBA,
                                 reason="numba path disabled")


def _random_inputs(seed, d, lam, R=4.0, n=5000):
    rng = np.random.default_rng(seed)
    s = rng.uniform(-R, R, size=n)
    mu = math.sqrt(1.0 - lam * lam)
    delta = math.atanh(lam) if lam < 1.0 else math.inf
    return s, mu, delta


@pytest.mark.parametrize("d,lam", [(2, 0.0), (3, 0.5), (4, 0.0), (5, 0.9),
                                   (3, 1.0), (6, 1.0)])
def test_section_volumes_match_scalar_path(d, lam):
    config = ModelConfig(d=d, lam=lam, R=4.0)
    geom = config.geometry
    s, mu, delta = _random_inputs(0, d, lam)
    from hypfluct.hyperbolic import ball_kappa
    vols = kernels.section_volumes(s, 4.0, d, lam, mu, delta, ball_kappa(d - 1))
    # spot-check 50 points against the log-space scalar evaluation
    for i in range(0, len(s), 100):
        expected = intersection_volume(config, float(s[i]))
        assert vols[i] == pytest.approx(expected, rel=1e-10, abs=1e-12)


@needs_numba
@pytest.mark.parametrize("d,lam", [(2, 0.0), (3, 0.5), (4, 0.0), (5, 0.9), (4, 1.0)])
def test_numba_and_numpy_volumes_agree(d, lam):
    s, mu, delta = _random_inputs(1, d, lam)
    from hypfluct.hyperbolic import ball_kappa
    kappa = ball_kappa(d - 1)
    dl = delta if math.isfinite(delta) else 0.0
    a = kernels._section_volumes_nb(np.ascontiguousarray(s), 4.0, d, lam, mu, dl, kappa)
    b = kernels._section_volumes_np(s, 4.0, d, lam, mu, dl, kappa)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_signed_sums_against_fsum():
    rng = np.random.default_rng(2)
    vol = rng.exponential(size=1000)
    s = rng.uniform(-1.0, 1.0, size=1000)
    offsets = np.array([0, 100, 100, 350, 1000], dtype=np.int64)
    pos, neg = kernels.signed_sums(vol, s, offsets)
    for r in range(4):
        seg = slice(offsets[r], offsets[r + 1])
        assert pos[r] == pytest.approx(
            math.fsum(vol[seg][s[seg] >= 0.0]), rel=1e-13, abs=1e-13)
        assert neg[r] == pytest.approx(
            math.fsum(vol[seg][s[seg] < 0.0]), rel=1e-13, abs=1e-13)


@needs_numba
def test_signed_sums_numba_numpy_agree():
    rng = np.random.default_rng(3)
    vol = rng.exponential(size=20000)
    s = rng.uniform(-1.0, 1.0, size=20000)
    offsets = np.sort(rng.choice(20001, size=30, replace=False)).astype(np.int64)
    offsets[0], offsets[-1] = 0, 20000
    a = kernels._signed_sums_nb(vol, s, offsets)
    b = kernels._signed_sums_np(vol, s, offsets)
    np.testing.assert_allclose(a[0], b[0], rtol=1e-11)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-11)


def test_zeta_increment_sums_against_fsum():
    rng = np.random.default_rng(4)
    h = rng.random(size=500)
    offsets = np.array([0, 0, 200, 500], dtype=np.int64)
    sums = kernels.zeta_increment_sums(h, offsets)
    assert sums[0] == 0.0
    assert sums[1] == pytest.approx(math.fsum(h[:200]), rel=1e-13)
    assert sums[2] == pytest.approx(math.fsum(h[200:]), rel=1e-13)


@needs_numba
def test_zeta_increment_sums_numba_numpy_agree():
    rng = np.random.default_rng(5)
    h = rng.random(size=30000)
    offsets = np.linspace(0, 30000, 16).astype(np.int64)
    a = kernels._zeta_increment_sums_nb(h, offsets)
    b = kernels._zeta_increment_sums_np(h, offsets)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_numpy_fallback_env_flag(tmp_path):
    """The env flag must flip USE_NUMBA in a fresh interpreter."""
    import subprocess
    import sys
    code = "import hypfluct.kernels as k; print(k.USE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code],
                         env={"HYPFLUCT_NO_NUMBA": "1", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True)
    assert out.stdout.strip() == "False"
