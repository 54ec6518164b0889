"""Common machinery for the online adaptive filters.

Every algorithm shares one per-sample contract: ``step(x, d) -> (y, e)``
consumes a length-``n_taps`` regressor and a desired sample, updates the
weights once, and reports the filter output and a-priori error. ``adapt``
exposes the same weight update driven by an externally supplied error, which
is what the filtered-x controllers in the ANC loop need.

The classes follow the scikit-learn estimator protocol (``get_params`` /
``set_params`` / ``fit`` / ``predict``) so they can be cloned, grid-searched
and put in pipelines, but they do not require scikit-learn at runtime.
"""

import inspect
from dataclasses import dataclass

import numpy as np

from ..validation import as_finite_vector, check_finite_scalar


@dataclass
class OpCounter:
    """Arithmetic performed by the most recent ``step``/``adapt`` call.

    Counts floating-point additions/subtractions, multiplications/divisions
    and the data-dependent outlier comparison. Control-flow safeguards (the
    step-size and restart guards) and divergence monitoring are not counted.
    """

    adds: int = 0
    mults: int = 0
    comparisons: int = 0

    def reset(self):
        self.adds = 0
        self.mults = 0
        self.comparisons = 0

    def copy(self):
        return OpCounter(self.adds, self.mults, self.comparisons)

    def as_dict(self):
        return {"adds": self.adds, "mults": self.mults, "comparisons": self.comparisons}


def regressor_matrix(signal, n_taps):
    """Tapped-delay-line regressors for a 1-D signal.

    Row ``n`` is ``[x(n), x(n-1), ..., x(n-n_taps+1)]`` with zeros before the
    start of the signal.
    """
    signal = np.asarray(signal, dtype=np.float64)
    if signal.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {signal.shape}")
    padded = np.concatenate([np.zeros(n_taps - 1), signal])
    windows = np.lib.stride_tricks.sliding_window_view(padded, n_taps)
    return np.ascontiguousarray(windows[:, ::-1])


class AdaptiveFilter:
    """Base class: state management, validation and the estimator protocol.

    Subclasses store their hyperparameters in ``__init__`` (one attribute per
    constructor argument, scikit-learn style), allocate state in
    ``_allocate`` and implement the weight update in ``_update(x, e, d)``.
    """

    def __init__(self):
        raise TypeError("AdaptiveFilter is abstract")

    # -- scikit-learn estimator protocol -------------------------------
    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep=True):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {self.__class__.__name__}")
            setattr(self, key, value)
        self._state_ready = False
        return self

    # -- state ----------------------------------------------------------
    def reset(self):
        """Validate hyperparameters and re-zero all filter state."""
        self._validate_params()
        self.w_ = np.zeros(self.n_taps)
        self.iteration_ = 0
        self.diverged_ = False
        self.ops_ = OpCounter()
        self._allocate()
        self._state_ready = True
        return self

    def _ensure_state(self):
        if not getattr(self, "_state_ready", False):
            self.reset()

    def _validate_params(self):  # overridden
        pass

    def _allocate(self):  # overridden
        pass

    def _update(self, x, e, d):
        raise NotImplementedError

    # -- per-sample interface --------------------------------------------
    def step(self, x, d):
        """One output-and-adapt cycle; returns ``(y, e)``."""
        self._ensure_state()
        x = as_finite_vector("x", x, self.n_taps)
        d = check_finite_scalar("d", d)
        ops = self.ops_
        ops.reset()
        y = float(self.w_ @ x)
        e = d - y
        ops.mults += self.n_taps
        ops.adds += self.n_taps
        self._update(x, e, d)
        self.iteration_ += 1
        self._check_finite()
        return y, e

    def adapt(self, x, e, d=None):
        """Weight update from an externally computed error.

        Used by the filtered-x controllers, where the error is measured at a
        sensor rather than derived from ``d - w @ x``. When ``d`` is omitted
        it is reconstructed as ``e + w @ x``.
        """
        self._ensure_state()
        x = as_finite_vector("x", x, self.n_taps)
        e = check_finite_scalar("e", e)
        ops = self.ops_
        ops.reset()
        if d is None:
            d = float(self.w_ @ x) + e
            ops.mults += self.n_taps
            ops.adds += self.n_taps
        self._update(x, e, d)
        self.iteration_ += 1
        self._check_finite()

    def _check_finite(self):
        if not np.all(np.isfinite(self.w_)):
            self.diverged_ = True

    def op_count(self):
        """Operation counts of the most recent step."""
        self._ensure_state()
        if self.iteration_ == 0:
            raise RuntimeError("no step has been taken yet")
        return self.ops_.copy()

    # -- batch interface ---------------------------------------------------
    def _as_regressors(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = regressor_matrix(X, self.n_taps)
        if X.ndim != 2 or X.shape[1] != self.n_taps:
            raise ValueError(f"X must be (n_samples, {self.n_taps}) or a 1-D signal")
        return X

    def fit(self, X, d):
        """Run the adaptation over a full record, starting from zero weights.

        ``X`` is either an ``(n_samples, n_taps)`` regressor matrix or a raw
        1-D input signal (converted with :func:`regressor_matrix`).
        """
        self.reset()
        return self.partial_fit(X, d)

    def partial_fit(self, X, d):
        """Continue the adaptation over a record without resetting state."""
        self._ensure_state()
        X = self._as_regressors(X)
        d = np.asarray(d, dtype=np.float64)
        if d.shape != (X.shape[0],):
            raise ValueError("d must be 1-D with one sample per row of X")
        for n in range(X.shape[0]):
            self.step(X[n], d[n])
        self.n_iter_ = self.iteration_
        return self

    def predict(self, X):
        """Filter output ``X @ w`` with the current weights."""
        self._ensure_state()
        return self._as_regressors(X) @ self.w_

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{self.__class__.__name__}({params})"
