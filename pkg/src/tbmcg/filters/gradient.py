"""Stochastic-gradient adaptive filters: LMS family and robust variants."""

import numpy as np

from ..validation import check_length, check_open_unit, check_positive
from .base import AdaptiveFilter


class LMS(AdaptiveFilter):
    """Plain least-mean-square filter: ``w += mu * e * x``."""

    def __init__(self, n_taps, mu=0.01):
        self.n_taps = n_taps
        self.mu = mu
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        if self.mu != 0.0:
            check_positive("mu", self.mu)

    def _update(self, x, e, d):
        self.w_ += (self.mu * e) * x
        self.ops_.mults += self.n_taps + 1
        self.ops_.adds += self.n_taps


class NLMS(AdaptiveFilter):
    """Normalized LMS: step size divided by the regressor energy."""

    def __init__(self, n_taps, mu=0.5, eps=1e-3):
        self.n_taps = n_taps
        self.mu = mu
        self.eps = eps
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_positive("mu", self.mu)
        check_positive("eps", self.eps)

    def _update(self, x, e, d):
        L = self.n_taps
        energy = float(x @ x)
        self.w_ += (self.mu * e / (self.eps + energy)) * x
        self.ops_.mults += 2 * L + 2
        self.ops_.adds += 2 * L


class LMM(AdaptiveFilter):
    """Least mean M-estimate: LMS with a three-part Hampel error clamp.

    The error scale is re-estimated every sample as 1.4826 times the median
    absolute error over the last ``window`` samples; the Hampel knees sit at
    (1.96, 2.24, 2.576) times that scale. Errors beyond the outer knee
    contribute nothing to the update, which is what makes the filter hold up
    under impulsive noise.
    """

    KNEES = (1.96, 2.24, 2.576)
    MAD_SCALE = 1.4826

    def __init__(self, n_taps, mu=0.01, window=9):
        self.n_taps = n_taps
        self.mu = mu
        self.window = window
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_positive("mu", self.mu)
        check_length("window", self.window)

    def _allocate(self):
        self._abs_err = np.zeros(self.window)
        self._filled = 0
        self._pos = 0

    def clamp(self, e):
        """Hampel three-part clamp of the error at the current scale."""
        sigma = self.MAD_SCALE * self._median_abs()
        xi, d1, d2 = (k * sigma for k in self.KNEES)
        ae = abs(e)
        if ae <= xi:
            return e
        if ae <= d1:
            return float(np.copysign(xi, e))
        if ae <= d2:
            return float(np.copysign(xi, e) * (d2 - ae) / (d2 - d1))
        return 0.0

    def _median_abs(self):
        if self._filled == 0:
            return 0.0
        return float(np.median(self._abs_err[: self._filled]))

    def _update(self, x, e, d):
        self._abs_err[self._pos] = abs(e)
        self._pos = (self._pos + 1) % self.window
        self._filled = min(self._filled + 1, self.window)
        psi = self.clamp(e)
        self.w_ += (self.mu * psi) * x
        self.ops_.mults += self.n_taps + 5
        self.ops_.adds += self.n_taps + 1
        self.ops_.comparisons += 3


class NMCC(AdaptiveFilter):
    """Normalized maximum-correntropy filter.

    A normalized LMS update scaled by the Gaussian kernel
    ``exp(-e**2 / (2 * kernel_width**2))``; one exponential per sample, and
    the update fades out for errors far beyond the kernel width.
    """

    def __init__(self, n_taps, mu=0.5, kernel_width=2.0, eps=1e-3):
        self.n_taps = n_taps
        self.mu = mu
        self.kernel_width = kernel_width
        self.eps = eps
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_positive("mu", self.mu)
        check_positive("kernel_width", self.kernel_width)
        check_positive("eps", self.eps)

    def kernel(self, e):
        return float(np.exp(-e * e / (2.0 * self.kernel_width ** 2)))

    def _update(self, x, e, d):
        L = self.n_taps
        energy = float(x @ x)
        gain = self.mu * self.kernel(e) * e / (self.eps + energy)
        self.w_ += gain * x
        self.ops_.mults += 2 * L + 5
        self.ops_.adds += 2 * L


class RLMS(AdaptiveFilter):
    """Robust LMS with a Cauchy score: ``w += mu * e / (1 + shape * e**2) * x``.

    The score redescends like ``1/e`` for large errors, bounding the damage a
    single impulse can do. This is the weight update behind the robust
    filtered-x LMS controller.
    """

    def __init__(self, n_taps, mu=0.01, shape=1.0):
        self.n_taps = n_taps
        self.mu = mu
        self.shape = shape
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_positive("mu", self.mu)
        check_positive("shape", self.shape)

    def _update(self, x, e, d):
        psi = e / (1.0 + self.shape * e * e)
        self.w_ += (self.mu * psi) * x
        self.ops_.mults += self.n_taps + 5
        self.ops_.adds += self.n_taps + 1


class LogLMS(AdaptiveFilter):
    """LMS driven by the gradient of a logarithmic error cost.

    Behaves like plain LMS for ``|e| <= knee`` and switches to the
    ``knee**2 / e`` score beyond it, so impulsive errors produce vanishing
    updates instead of proportional ones. Core of the log-cost filtered-x
    controller.
    """

    def __init__(self, n_taps, mu=0.01, knee=1.0):
        self.n_taps = n_taps
        self.mu = mu
        self.knee = knee
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_positive("mu", self.mu)
        check_positive("knee", self.knee)

    def _update(self, x, e, d):
        if abs(e) <= self.knee:
            psi = e
        else:
            psi = self.knee * self.knee / e
        self.w_ += (self.mu * psi) * x
        self.ops_.mults += self.n_taps + 3
        self.ops_.adds += self.n_taps
        self.ops_.comparisons += 1
