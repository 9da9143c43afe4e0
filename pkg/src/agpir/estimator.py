"""Estimator-style facade: ``fit`` stores files on simulated servers, ``predict`` retrieves them."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .curve import HyperellipticCurve
from .field import GF
from .lsss import make_rng
from .pir import decode, encode_storage, make_queries, plan_scheme, respond_all


def check_field_array(field: GF, a, name: str = "array", ndim: int = 2) -> np.ndarray:
    """Validate that ``a`` holds canonical elements of ``field``."""
    arr = check_array(a, dtype=np.int64, ensure_2d=ndim == 2, ensure_all_finite=True,
                      ensure_min_samples=1, input_name=name)
    if ndim == 1:
        arr = arr.reshape(-1)
    if np.any((arr < 0) | (arr >= field.q)):
        raise ValueError(f"{name} contains values outside 0..{field.q - 1}")
    return arr


class SecurePIR(BaseEstimator):
    """X-secure, T-private retrieval of whole files.

    ``fit(files)`` plans a scheme for M = len(files) files of L fragments each
    (L = files.shape[1]) and secret-shares them. ``predict(mu)`` runs one
    query per index (0-based, like row indices of ``files``) and returns the
    decoded fragments.

    Example::

        >>> est = SecurePIR(field=GF(13), X=2, T=2, random_state=0)
        >>> files = [[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12]]
        >>> est.fit(files).predict([2]).tolist()
        [[9, 10, 11, 12]]
    """

    def __init__(self, field: GF | None = None, curve: HyperellipticCurve | None = None,
                 X: int = 1, T: int = 1, random_state: int | None = None, n_jobs: int = 1):
        self.field = field
        self.curve = curve
        self.X = X
        self.T = T
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, files, y=None):
        if self.field is None:
            raise ValueError("field must be set")
        files = check_field_array(self.field, files, "files")
        M, L = files.shape
        self.scheme_ = plan_scheme(self.field, self.curve, self.X, self.T, L=L, M=M)
        self._rng = make_rng(self.random_state)
        self.storage_ = encode_storage(self.scheme_, files, self._rng)
        self.n_files_, self.n_fragments_ = M, L
        return self

    def predict(self, mu) -> np.ndarray:
        check_is_fitted(self, "storage_")
        idx = np.asarray(mu, dtype=np.int64).reshape(-1)
        if np.any((idx < 0) | (idx >= self.n_files_)):
            raise ValueError(f"file index out of range 0..{self.n_files_ - 1}")
        out = np.empty((idx.size, self.n_fragments_), dtype=np.int64)
        for i, m in enumerate(idx):
            q = make_queries(self.scheme_, int(m) + 1, self._rng)
            out[i] = decode(self.scheme_, respond_all(self.scheme_, self.storage_, q, self.n_jobs))
        return out

    @property
    def rate_(self):
        check_is_fitted(self, "scheme_")
        return self.scheme_.rate
