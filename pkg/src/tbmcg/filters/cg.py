"""Conjugate-gradient adaptive filter, plain or with robust outlier rejection.

One code path serves both algorithms: ``CGFilter(weighting=None)`` is the
standard online CG filter, and attaching a :class:`~tbmcg.mestimate.TukeyBiweight`
turns it into the robust variant that skips the rank-1 correlation updates
whenever the error exceeds the cutoff. With ``weighting=TukeyBiweight(inf)``
the weighting factor is exactly 1 and the two are bit-identical.

Per sample the filter performs a single CG iteration on the exponentially
weighted normal equations: the correlation matrix ``R`` and cross-correlation
``theta`` decay by the forgetting factor and receive a weighted rank-1 update,
the residual is propagated recursively, and the weights move along a
Polak-Ribiere conjugate direction.
"""

import numpy as np

from ..validation import ConfigError, as_finite_vector, check_length, check_open_unit, check_positive
from .base import AdaptiveFilter


class CGFilter(AdaptiveFilter):
    """Online conjugate-gradient filter with optional robust weighting.

    Parameters
    ----------
    n_taps : int
        Filter length.
    forgetting : float
        Exponential forgetting factor in (0, 1) for the correlation
        estimates.
    step_scale : float
        Positive scale applied to the CG step size.
    weighting : TukeyBiweight or None
        Error weighting. ``None`` gives the standard CG filter
        (weighting factor identically 1).
    ridge : float
        Initial diagonal loading of the correlation matrix; keeps the
        step-size denominator well defined on the first iterations.
    step_guard : float
        Step size is forced to 0 when ``|p @ R p|`` falls below this.
    residual_guard : float
        Direction restarts at the residual when the previous residual energy
        falls below this.
    pr_plus : bool
        Clamp negative Polak-Ribiere coefficients to zero (restart). Set
        False for the unclamped coefficient.

    Attributes
    ----------
    w_ : ndarray
        Current weight estimate.
    last_weight_ : float
        Weighting factor applied at the most recent update.
    diverged_ : bool
        Set when the state stops being finite; never raises.
    """

    def __init__(self, n_taps, forgetting=0.999, step_scale=0.001, weighting=None,
                 ridge=1e-2, step_guard=1e-12, residual_guard=1e-12, pr_plus=True):
        self.n_taps = n_taps
        self.forgetting = forgetting
        self.step_scale = step_scale
        self.weighting = weighting
        self.ridge = ridge
        self.step_guard = step_guard
        self.residual_guard = residual_guard
        self.pr_plus = pr_plus
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_open_unit("forgetting", self.forgetting)
        check_positive("step_scale", self.step_scale)
        check_positive("ridge", self.ridge)
        if self.weighting is not None and not hasattr(self.weighting, "c"):
            raise ConfigError("weighting must expose a cutoff attribute 'c'")

    def _allocate(self):
        L = self.n_taps
        self.R_ = self.ridge * np.eye(L)
        self.theta_ = np.zeros(L)
        self.g_ = np.zeros(L)
        self.p_ = np.zeros(L)
        self._last_t = 1.0
        self._outer = np.empty((L, L))
        self._Rp = np.empty(L)

    @property
    def last_weight_(self):
        return self._last_t * self._last_t

    def _update(self, x, e, d):
        L = self.n_taps
        lam = self.forgetting
        ops = self.ops_
        R, theta = self.R_, self.theta_

        if self.weighting is None:
            # standard CG: weighting factor identically 1
            R *= lam
            np.multiply.outer(x, x, out=self._outer)
            R += self._outer
            ops.mults += 2 * L * L
            ops.adds += L * L
            theta *= lam
            theta += d * x
            ops.mults += 2 * L
            ops.adds += L
            ge = e * x
            ops.mults += L
            self._last_t = 1.0
        else:
            c = self.weighting.c
            ops.comparisons += 1
            if abs(e) <= c:
                # apply the square root of the weighting factor twice: the
                # rank-1 update stays exactly symmetric and PSD
                r = e / c
                t = 1.0 - r * r
                ops.mults += 2
                ops.adds += 1
                xw = t * x
                xww = t * xw
                ops.mults += 2 * L
                R *= lam
                np.multiply.outer(xw, xw, out=self._outer)
                R += self._outer
                ops.mults += 2 * L * L
                ops.adds += L * L
                theta *= lam
                theta += d * xww
                ops.mults += 2 * L
                ops.adds += L
                ge = e * xww
                ops.mults += L
                self._last_t = t
            else:
                # outlier: rank-1 terms vanish, only the decay survives
                R *= lam
                theta *= lam
                ops.mults += L * L + L
                ge = None
                self._last_t = 0.0

        Rp = np.matmul(R, self.p_, out=self._Rp)
        ops.mults += L * L
        ops.adds += L * (L - 1)
        den = float(self.p_ @ Rp)
        num = float(self.p_ @ self.g_)
        ops.mults += 2 * L
        ops.adds += 2 * (L - 1)
        if abs(den) < self.step_guard:
            delta = 0.0
        else:
            delta = self.step_scale * (num / den)
            ops.mults += 2

        g_new = lam * self.g_ - delta * Rp
        ops.mults += 2 * L
        ops.adds += L
        if ge is not None:
            g_new += ge
            ops.adds += L

        gg = float(self.g_ @ self.g_)
        ops.mults += L
        ops.adds += L - 1
        if gg < self.residual_guard:
            beta = 0.0
        else:
            beta = float((g_new - self.g_) @ g_new) / gg
            ops.mults += L + 1
            ops.adds += 2 * L - 1
            if self.pr_plus and beta < 0.0:
                beta = 0.0

        p_new = g_new + beta * self.p_
        ops.mults += L
        ops.adds += L
        self.w_ += delta * p_new
        ops.mults += L
        ops.adds += L

        self.g_ = g_new
        self.p_ = p_new

    def weight_error_diagnostic(self, h_true):
        """R-weighted squared weight error ``(h_true - w) @ R @ (h_true - w)``.

        Non-negative by construction (the correlation estimate is PSD plus
        the initial ridge); its trace decaying toward zero is the runtime
        signature of CG convergence.
        """
        self._ensure_state()
        h_true = as_finite_vector("h_true", h_true, self.n_taps)
        err = h_true - self.w_
        return float(err @ self.R_ @ err)


def tbmcg_filter(n_taps, c=20.0, **kwargs):
    """Convenience constructor for the robust CG filter with cutoff ``c``."""
    from ..mestimate import TukeyBiweight

    return CGFilter(n_taps, weighting=TukeyBiweight(c), **kwargs)
