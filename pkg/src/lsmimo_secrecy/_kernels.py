"""Hot loops: per-sample MRT channel gains and the dual-ascent inner loop.

Each kernel exists twice: a loop version compiled with numba, and a
numpy / plain-Python version. ``LSMIMO_SECRECY_JIT=0`` in the environment (or
numba being absent) selects the fallback at import time. Both versions are
always importable under ``*_numba`` / ``*_numpy`` names so they can be
compared against each other.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

_JIT_REQUESTED = os.environ.get("LSMIMO_SECRECY_JIT", "1").strip().lower() not in ("0", "false", "no", "off")
HAVE_NUMBA = numba is not None
BACKEND = "numba" if (HAVE_NUMBA and _JIT_REQUESTED) else "numpy"

_LN2 = math.log(2.0)


# --------------------------------------------------------------------------
# channel gains
# --------------------------------------------------------------------------

def channel_gains_numpy(h_hat, e, g, rho):
    """Return ``(|h^H w|^2, max_i |g_i w|^2)`` per sample, with ``w = h_hat / ||h_hat||``.

    Shapes: ``h_hat``, ``e`` are ``(n, N_t)``; ``g`` is ``(n, N_r, N_t)``.
    """
    norm = np.sqrt(np.einsum("ij,ij->i", h_hat.real, h_hat.real) + np.einsum("ij,ij->i", h_hat.imag, h_hat.imag))
    w = h_hat / norm[:, None]
    h = math.sqrt(rho) * h_hat + math.sqrt(1.0 - rho) * e
    legit = np.abs(np.einsum("ij,ij->i", h.conj(), w)) ** 2
    eve = np.abs(np.einsum("irj,ij->ir", g, w)) ** 2
    return legit, eve.max(axis=1)


def _channel_gains_loop(h_hat, e, g, rho):
    n, nt = h_hat.shape
    nr = g.shape[1]
    legit = np.empty(n)
    eve = np.empty(n)
    sr = math.sqrt(rho)
    se = math.sqrt(1.0 - rho)
    for k in range(n):
        norm2 = 0.0
        for j in range(nt):
            z = h_hat[k, j]
            norm2 += z.real * z.real + z.imag * z.imag
        inv = 1.0 / math.sqrt(norm2)
        acc = 0j
        for j in range(nt):
            hj = sr * h_hat[k, j] + se * e[k, j]
            acc += hj.conjugate() * h_hat[k, j]
        legit[k] = (acc.real * acc.real + acc.imag * acc.imag) * inv * inv
        best = 0.0
        for i in range(nr):
            gi = 0j
            for j in range(nt):
                gi += g[k, i, j] * h_hat[k, j]
            val = (gi.real * gi.real + gi.imag * gi.imag) * inv * inv
            if val > best:
                best = val
        eve[k] = best
    return legit, eve


# --------------------------------------------------------------------------
# dual ascent on the box-constrained power problem
# --------------------------------------------------------------------------

def _relaxed_argmin(q, mu, nu, lterm, bandwidth, p_cap):
    # Lagrangian minimiser over (0, p_cap]; unique stationary root of
    # L P^2 - P + c = 0 with c = W / (ln2 * (q - mu + nu)), written stably.
    s = q - mu + nu
    if s <= 0.0:
        return p_cap
    c = bandwidth / (_LN2 * s)
    p = 2.0 * c / (1.0 + math.sqrt(1.0 - 4.0 * lterm * c))
    return p if p < p_cap else p_cap


def _settled(p, mu, nu, p_min, p_max, tol):
    # primal feasibility plus complementary slackness, both to within tol
    if p < p_min - tol or p > p_max + tol:
        return False
    if mu > 0.0 and abs(p - p_min) >= tol:
        return False
    if nu > 0.0 and abs(p - p_max) >= tol:
        return False
    return True


def _curvature(p, lterm, bandwidth):
    return bandwidth / _LN2 * (1.0 - 2.0 * lterm * p) / (p * (1.0 - lterm * p)) ** 2


def _make_dual_ascent(relaxed_argmin, settled, curvature):
    # one loop body for both backends; numba sees the helpers as closure constants
    def dual_ascent(q, lterm, bandwidth, p_min, p_max, p_cap, step_mu, step_nu, max_iter, tol):
        # step_mu/step_nu <= 0 selects curvature-scaled steps at the current power,
        # throttled so that q - mu + nu at most halves per iteration
        auto = step_mu <= 0.0 or step_nu <= 0.0
        mu = 0.0
        nu = 0.0
        p_prev = relaxed_argmin(q, mu, nu, lterm, bandwidth, p_cap)
        converged = False
        it = 0
        for it in range(1, max_iter + 1):
            if auto:
                k = curvature(p_prev, lterm, bandwidth)
                mu_new = max(mu + k * (p_min - p_prev), 0.0)
                nu_new = max(nu + k * (p_prev - p_max), 0.0)
                s_old = q - mu + nu
                drop = s_old - (q - mu_new + nu_new)
                if s_old > 0.0 and drop > 0.5 * s_old:
                    t = 0.5 * s_old / drop
                    mu_new = max(mu + t * k * (p_min - p_prev), 0.0)
                    nu_new = max(nu + t * k * (p_prev - p_max), 0.0)
                mu = mu_new
                nu = nu_new
            else:
                mu = max(mu + step_mu * (p_min - p_prev), 0.0)
                nu = max(nu + step_nu * (p_prev - p_max), 0.0)
            p = relaxed_argmin(q, mu, nu, lterm, bandwidth, p_cap)
            if abs(p - p_prev) < tol and settled(p, mu, nu, p_min, p_max, tol):
                p_prev = p
                converged = True
                break
            p_prev = p
        return p_prev, mu, nu, it, converged

    return dual_ascent


dual_ascent_numpy = _make_dual_ascent(_relaxed_argmin, _settled, _curvature)

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    channel_gains_numba = _jit(_channel_gains_loop)
    dual_ascent_numba = numba.njit(nogil=True)(_make_dual_ascent(_jit(_relaxed_argmin), _jit(_settled), _jit(_curvature)))
else:  # pragma: no cover
    channel_gains_numba = None
    dual_ascent_numba = None


if BACKEND == "numba":
    channel_gains = channel_gains_numba
    dual_ascent = dual_ascent_numba
else:
    channel_gains = channel_gains_numpy
    dual_ascent = dual_ascent_numpy
