"""Hot numeric kernels: batch section volumes and per-replicate sums.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy
fallback.  Selection happens once at import time; set the environment
variable ``HYPFLUCT_NO_NUMBA=1`` to force the numpy path (used by the
benchmark and as a safety hatch on platforms without a working numba).

The batch kernels evaluate the closed-form section volumes directly in
linear space, which is fine for the Monte Carlo radii (R <= ~300).  The
overflow-safe log-space scalar path lives in :mod:`hypfluct.hyperbolic`.
"""

from __future__ import annotations

import math
import os

import numpy as np

USE_NUMBA = os.environ.get("HYPFLUCT_NO_NUMBA", "").strip() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _section_volumes_np(s, R, d, lam, mu, delta, kappa_dm1):
    """Closed-form section volumes for an array of signed distances.

    lambda < 1 supports d in {2,3,4,5}; lambda = 1 supports any d.
    """
    s = np.asarray(s, dtype=np.float64)
    if lam == 1.0:
        arg = 2.0 * np.exp(s) * np.maximum(np.cosh(R) - np.cosh(s), 0.0)
        return kappa_dm1 * arg ** (0.5 * (d - 1))
    u = s - delta
    q = (mu * np.cosh(R) - lam * np.sinh(u)) / np.cosh(u)
    q = np.maximum(q, 1.0)
    if d == 2:
        rho = np.arccosh(q)
        return (2.0 / mu) * rho
    if d == 3:
        return (TWO_PI / mu) * (np.cosh(R) - np.cosh(s)).clip(min=0.0) / np.cosh(u)
    if d == 4:
        rho = np.arccosh(q)
        sh = np.sqrt(np.maximum(q * q - 1.0, 0.0))
        return (TWO_PI / mu ** 3) * (q * sh - rho)
    if d == 5:
        return (2.0 * math.pi ** 2 / (3.0 * mu ** 4)) * (q - 1.0) ** 2 * (q + 2.0)
    raise ValueError("batch kernel supports d <= 5 for lambda < 1")


def _signed_sums_np(vol, s, offsets):
    """Per-replicate sums of vol, split by sign of s (s >= 0 counts positive).

    offsets[i] is the start index of replicate i; offsets[-1] == len(vol).
    """
    pos_mask = s >= 0.0
    n_rep = len(offsets) - 1
    pos = np.zeros(n_rep)
    neg = np.zeros(n_rep)
    starts = offsets[:-1]
    cs_pos = np.concatenate(([0.0], np.cumsum(vol * pos_mask)))
    cs_neg = np.concatenate(([0.0], np.cumsum(vol * (~pos_mask))))
    pos = cs_pos[offsets[1:]] - cs_pos[starts]
    neg = cs_neg[offsets[1:]] - cs_neg[starts]
    return pos, neg


def _zeta_increment_sums_np(h_vals, offsets):
    """Per-draw sums of jump sizes h over contiguous segments."""
    cs = np.concatenate(([0.0], np.cumsum(h_vals)))
    return cs[offsets[1:]] - cs[offsets[:-1]]


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def _section_volumes_nb(s, R, d, lam, mu, delta, kappa_dm1):
        n = s.shape[0]
        out = np.empty(n)
        cosh_R = math.cosh(R)
        if lam == 1.0:
            half = 0.5 * (d - 1)
            for i in range(n):
                arg = 2.0 * math.exp(s[i]) * (cosh_R - math.cosh(s[i]))
                out[i] = kappa_dm1 * arg ** half if arg > 0.0 else 0.0
            return out
        for i in range(n):
            u = s[i] - delta
            q = (mu * cosh_R - lam * math.sinh(u)) / math.cosh(u)
            if q < 1.0:
                q = 1.0
            if d == 2:
                out[i] = (2.0 / mu) * math.log(q + math.sqrt(q * q - 1.0))
            elif d == 3:
                diff = cosh_R - math.cosh(s[i])
                out[i] = (TWO_PI / mu) * (diff if diff > 0.0 else 0.0) / math.cosh(u)
            elif d == 4:
                sh = math.sqrt(q * q - 1.0)
                rho = math.log(q + sh)
                out[i] = (TWO_PI / mu ** 3) * (q * sh - rho)
            elif d == 5:
                out[i] = (2.0 * math.pi ** 2 / (3.0 * mu ** 4)) * (q - 1.0) ** 2 * (q + 2.0)
            else:
                out[i] = math.nan
        return out

    @njit(cache=True)
    def _signed_sums_nb(vol, s, offsets):
        n_rep = offsets.shape[0] - 1
        pos = np.zeros(n_rep)
        neg = np.zeros(n_rep)
        for r in range(n_rep):
            # Kahan accumulation: many terms spanning several e-folds
            sp = 0.0
            cp = 0.0
            sn = 0.0
            cn = 0.0
            for i in range(offsets[r], offsets[r + 1]):
                if s[i] >= 0.0:
                    y = vol[i] - cp
                    t = sp + y
                    cp = (t - sp) - y
                    sp = t
                else:
                    y = vol[i] - cn
                    t = sn + y
                    cn = (t - sn) - y
                    sn = t
            pos[r] = sp
            neg[r] = sn
        return pos, neg

    @njit(cache=True)
    def _zeta_increment_sums_nb(h_vals, offsets):
        n = offsets.shape[0] - 1
        out = np.empty(n)
        for r in range(n):
            acc = 0.0
            c = 0.0
            for i in range(offsets[r], offsets[r + 1]):
                y = h_vals[i] - c
                t = acc + y
                c = (t - acc) - y
                acc = t
            out[r] = acc
        return out


# ---------------------------------------------------------------------------
# public dispatch
# ---------------------------------------------------------------------------

def section_volumes(s, R, d, lam, mu, delta, kappa_dm1):
    s = np.ascontiguousarray(s, dtype=np.float64)
    if USE_NUMBA and (lam == 1.0 or d <= 5):
        return _section_volumes_nb(s, float(R), d, float(lam), float(mu),
                                   float(delta) if math.isfinite(delta) else 0.0,
                                   float(kappa_dm1))
    return _section_volumes_np(s, float(R), d, float(lam), float(mu),
                               float(delta) if math.isfinite(delta) else 0.0,
                               float(kappa_dm1))


def signed_sums(vol, s, offsets):
    vol = np.ascontiguousarray(vol, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    if USE_NUMBA:
        return _signed_sums_nb(vol, s, offsets)
    return _signed_sums_np(vol, s, offsets)


def zeta_increment_sums(h_vals, offsets):
    h_vals = np.ascontiguousarray(h_vals, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    if USE_NUMBA:
        return _zeta_increment_sums_nb(h_vals, offsets)
    return _zeta_increment_sums_np(h_vals, offsets)
