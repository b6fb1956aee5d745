"""
Special functions used by the link equations.

scipy.special provides the base evaluations; this module adds the domain
checks the link layer relies on and polishes results to the configured
tolerance. All functions accept scalars or numpy arrays.
"""

import logging
import math

import numpy as np
from scipy import optimize
from scipy import special as sp

from src.constants.errors import DomainError
from src.constants.params import DEFAULT_TOLERANCE, ToleranceConfig

logger = logging.getLogger(__name__)

INV_E = float(np.exp(-1.0))

# slack for arguments that land a rounding error below -1/e
_BRANCH_SLACK = 1e-15


def _bracketed_w0(x: float, tol: ToleranceConfig) -> float:
    """w0(x) by Brent's method on [-1, log1p(x) + 1]."""
    lo, hi = -1.0, math.log1p(max(x, 0.0)) + 1.0
    f = lambda w: w * math.exp(w) - x
    if f(lo) >= 0.0:
        return lo
    return optimize.brentq(f, lo, hi, rtol=max(tol.rel_tol, 4 * np.finfo(float).eps), maxiter=tol.max_iter)


def lambert_w0(x, tol: ToleranceConfig = DEFAULT_TOLERANCE):
    """
    Principal branch of the Lambert W function, w * exp(w) = x with w >= -1.

    Args:
        x: real scalar or array, x >= -1/e
        tol: Halley refinement controls

    Returns:
        w with the same shape as x

    Raises:
        DomainError: if any x < -1/e
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(x_arr)) or np.any(x_arr < -INV_E - _BRANCH_SLACK):
        raise DomainError(f"lambert_w0 undefined below -1/e, got {x}")

    x_arr = np.maximum(x_arr, -INV_E)
    with np.errstate(invalid="ignore"):
        w = np.real(sp.lambertw(x_arr, 0))
    # scipy may give nan at the branch point itself
    w = np.where(x_arr + INV_E <= _BRANCH_SLACK, -1.0, w)

    bad = ~np.isfinite(w)
    if np.any(bad):
        logger.debug("lambert_w0: %d non-finite scipy values, solving by bracket", int(bad.sum()))
        w = np.atleast_1d(np.array(w, dtype=float))
        xs = np.atleast_1d(x_arr)
        for k in np.flatnonzero(np.atleast_1d(bad)):
            w.flat[k] = _bracketed_w0(float(xs.flat[k]), tol)
        w = w.reshape(x_arr.shape)

    # Halley polish; the derivative vanishes at the branch point w = -1
    active = np.abs(w + 1.0) > 1e-6
    for _ in range(tol.max_iter):
        safe = np.where(active, w, 0.0)
        ew = np.exp(safe)
        f = safe * ew - x_arr
        denom = ew * (safe + 1.0) - (safe + 2.0) * f / (2.0 * safe + 2.0)
        step = np.where(active, f / denom, 0.0)
        w = w - step
        if np.all(np.abs(step) <= tol.rel_tol * np.maximum(1.0, np.abs(w))):
            break
    else:
        logger.debug("lambert_w0: Halley polish hit max_iter=%d", tol.max_iter)

    return w if w.ndim else float(w)


def erfc(x):
    """Complementary error function, monotone decreasing from 2 to 0."""
    out = sp.erfc(np.asarray(x, dtype=float))
    return out if out.ndim else float(out)


def erfc_inv(y, tol: ToleranceConfig = DEFAULT_TOLERANCE):
    """
    Inverse of erfc on (0, 2).

    One Newton step on erfc(x) - y tightens scipy's estimate for the tiny
    BER targets the range formula feeds in.

    Raises:
        DomainError: if any y is outside the open interval (0, 2)
    """
    y_arr = np.asarray(y, dtype=float)
    if np.any(~((y_arr > 0.0) & (y_arr < 2.0))):
        raise DomainError(f"erfc_inv defined on (0, 2), got {y}")

    x = sp.erfcinv(y_arr)
    # the upper half (x < 0) has no relative precision left to gain
    lower = y_arr < 1.0
    for _ in range(tol.max_iter):
        slope = -2.0 / np.sqrt(np.pi) * np.exp(-x * x)
        step = np.where(lower, (sp.erfc(x) - y_arr) / slope, 0.0)
        x = x - step
        if np.all(np.abs(step) <= tol.rel_tol * np.maximum(1.0, np.abs(x))):
            break

    return x if x.ndim else float(x)
