"""scikit-learn style wrappers around the depth functions.

>>> import numpy as np
>>> from lqdepth import LqZonoidDepth
>>> est = LqZonoidDepth(q=2).fit(np.array([[0.0], [1.0], [2.0]]))
>>> est.score_samples([[1.0]])
array([1.])
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .contour import contour_set
from .depths import (
    DEFAULT_CONFIG,
    DataCloud,
    DepthOrder,
    in_convex_hull,
    lq_depth,
    mahalanobis_depth,
    zonoid_depth,
)


class _DepthBase(TransformerMixin, BaseEstimator):
    """``fit`` stores the cloud; ``transform`` returns depths as one column."""

    def fit(self, X, y=None):
        X = validate_data(self, X, ensure_min_samples=2, dtype=np.float64)
        self._check_params()
        self.cloud_ = DataCloud(X)
        self.location_ = self.cloud_.mean
        self.covariance_ = self.cloud_.covariance
        return self

    def _check_params(self):
        pass

    def _validate(self, X):
        check_is_fitted(self, "cloud_")
        return validate_data(self, X, reset=False, dtype=np.float64)

    def _one(self, x):
        raise NotImplementedError

    def score_samples(self, X):
        """Depth of each row of ``X``; larger means more central."""
        X = self._validate(X)
        return np.array([self._one(x).depth for x in X], dtype=float)

    def transform(self, X):
        return self.score_samples(X)[:, None]

    def in_hull(self, X):
        """Convex hull membership of each row of ``X``."""
        X = self._validate(X)
        return np.array([in_convex_hull(self.cloud_, x) for x in X], dtype=bool)


class LqZonoidDepth(_DepthBase):
    """L_q-norm zonoid depth for ``q`` in ``[1, inf]``.

    Parameters
    ----------
    q : float or "inf", default=1.0
        Order of the power mean. ``q=2`` coincides with Mahalanobis depth.
    config : SolverConfig, optional
        Engine tolerances and routes; the defaults suit most uses.
    """

    def __init__(self, q=1.0, config=None):
        self.q = q
        self.config = config

    def _check_params(self):
        DepthOrder(self.q)

    def _one(self, x):
        return lq_depth(self.cloud_, x, self.q, config=self.config or DEFAULT_CONFIG)

    def discrepancy(self, X):
        """Minimal power-mean distance ``S_q`` for each row (``1/depth - 1``)."""
        X = self._validate(X)
        return np.array([self._one(x).discrepancy for x in X], dtype=float)

    def contours(self, levels, rays=72):
        """Trimmed-region boundaries of the fitted planar cloud."""
        check_is_fitted(self, "cloud_")
        return contour_set(self.cloud_, self.q, levels, rays, config=self.config or DEFAULT_CONFIG)


class ZonoidDepth(_DepthBase):
    """Classical zonoid depth; exactly zero outside the convex hull."""

    def _one(self, x):
        return zonoid_depth(self.cloud_, x)


class MahalanobisDepth(_DepthBase):
    """``1 / (1 + Mahalanobis distance)`` with the 1/n sample covariance."""

    def _one(self, x):
        return mahalanobis_depth(self.cloud_, x)
