"""Exponentially weighted recursive least squares."""

import numpy as np

from ..validation import check_length, check_open_unit, check_positive
from .base import AdaptiveFilter


class RLS(AdaptiveFilter):
    """RLS with inverse-correlation recursion.

    Solves the exponentially weighted least-squares problem exactly at every
    sample: with ``P(0) = I / delta`` the weights equal the regularized
    normal-equation solution over all data seen so far, which is what the
    oracle test in the suite checks against.

    Parameters
    ----------
    n_taps : int
        Filter length.
    forgetting : float
        Exponential forgetting factor in (0, 1).
    delta : float
        Initial regularization; ``P(0) = I / delta``.
    """

    def __init__(self, n_taps, forgetting=0.999, delta=1e-2):
        self.n_taps = n_taps
        self.forgetting = forgetting
        self.delta = delta
        self.reset()

    def _validate_params(self):
        check_length("n_taps", self.n_taps)
        check_open_unit("forgetting", self.forgetting)
        check_positive("delta", self.delta)

    def _allocate(self):
        self.P_ = np.eye(self.n_taps) / self.delta

    def _update(self, x, e, d):
        L = self.n_taps
        lam = self.forgetting
        pi = self.P_ @ x
        denom = lam + float(x @ pi)
        k = pi / denom
        self.w_ += k * e
        self.P_ -= np.outer(k, pi)
        self.P_ /= lam
        self.ops_.mults += 3 * L * L + 3 * L + 1
        self.ops_.adds += L * L + 3 * L
