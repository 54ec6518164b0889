"""Tukey's biweight (bisquare) M-estimate: objective, score and weighting factor.

The biweight family fully rejects gross outliers: both the score and the
weighting factor are identically zero beyond the cutoff ``c``, so a single
wild sample contributes nothing to an estimate built from these functions.
Inside the cutoff the weighting decays smoothly from 1 at zero error to 0 at
``|e| = c`` (the "redescending" property).
"""

import numpy as np

from .validation import ConfigError


class TukeyBiweight:
    """Tukey's biweight M-estimate with tuning constant ``c``.

    Parameters
    ----------
    c : float
        Positive cutoff, in the same units as the error signal. Errors with
        ``|e| <= c`` fall on the polynomial branch; larger errors are treated
        as outliers. ``c = inf`` is accepted as a sentinel that disables
        rejection entirely (the weighting factor is then identically 1).

    Notes
    -----
    The objective here is normalized to the range [0, 1/3], with the constant
    branch 1/3 for ``|e| > c``. Under this normalization the score is
    ``(c**2 / 2)`` times the derivative of the objective; the proportionality
    constant is exact and is pinned by the unit slope of the score at zero.
    """

    def __init__(self, c):
        c = float(c)
        if np.isnan(c) or c <= 0.0:
            raise ConfigError(f"threshold c must be positive, got {c!r}")
        self.c = c

    def __repr__(self):
        return f"{self.__class__.__name__}(c={self.c})"

    def _ratio_sq(self, e):
        e = np.asarray(e, dtype=np.float64)
        if not np.all(np.isfinite(e)):
            raise ValueError("error value must be finite")
        with np.errstate(invalid="ignore"):
            u = (e / self.c) ** 2
        if np.isinf(self.c):
            u = np.zeros_like(e)
        return e, u

    def objective(self, e):
        """Loss value in [0, 1/3].

        Piecewise: ``u - u**2 + u**3/3`` with ``u = (e/c)**2`` on the inlier
        branch, constant 1/3 beyond the cutoff. Even in ``e`` and continuous
        at ``|e| = c``.
        """
        e, u = self._ratio_sq(e)
        inlier = u - u * u + u * u * u / 3.0
        out = np.where(np.abs(e) <= self.c, inlier, 1.0 / 3.0)
        return float(out) if np.isscalar(out) or out.ndim == 0 else out

    def weight(self, e):
        """Weighting factor ``(1 - (e/c)**2)**2`` on inliers, 0 on outliers.

        Always in [0, 1]; equals 1 at zero error and 0 at ``|e| >= c``.
        """
        e, u = self._ratio_sq(e)
        t = 1.0 - u
        out = np.where(np.abs(e) <= self.c, t * t, 0.0)
        return float(out) if np.isscalar(out) or out.ndim == 0 else out

    def score(self, e):
        """Influence of an error: ``e * weight(e)``.

        Odd in ``e``, unit slope at the origin, and redescending to exactly
        zero for ``|e| >= c``.
        """
        e = np.asarray(e, dtype=np.float64)
        out = e * self.weight(e)
        return float(out) if out.ndim == 0 else out
