"""Seeded synthetic data: group labels, Gaussian features, four outcome families.

Generation is a pure function of (spec, seed). Randomness comes from numpy's
Philox bit generator, a counter-based generator whose streams are cheap to
derive and independent by construction; normal variates use numpy's ziggurat
sampler. Seeds for replications, trees and other substreams are derived with
:func:`derive_seed` (base XOR blake2b-64 of the tags), so every substream is
reproducible and independent of execution order.

Group labels are deterministic: the first ``n_per_group`` rows are A=0, the
rest A=1. Fixed group sizes match the simulation design and remove one source
of variance.

For classification families the stored ``y`` is the true risk Phi(index) or
S(index) with no added noise, and ``z`` is the Bernoulli(y) draw; prediction
errors are always measured against the risk, which only a simulation can
observe.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, ndtr

from .exceptions import InvalidCovarianceError
from .moments import MixtureSpec

FAMILIES = ("linear", "polynomial", "probit", "logit")
REGRESSION_FAMILIES = ("linear", "polynomial")
CLASSIFICATION_FAMILIES = ("probit", "logit")

_BETA_LENGTH = {"linear": 3, "polynomial": 6, "probit": 3, "logit": 3}
_SEED_MASK = (1 << 64) - 1

CSV_HEADER = ["x1", "x2", "a", "y", "z"]


def derive_seed(base_seed: int, *tags) -> int:
    """Derive an independent 64-bit substream seed from a base seed and tags.

    Implemented as base XOR blake2b-64 of the rendered tags, so derived
    seeds are stable across platforms and runs.
    """
    label = ":".join(repr(t) for t in tags).encode()
    h = hashlib.blake2b(label, digest_size=8).digest()
    return (int(base_seed) ^ int.from_bytes(h, "big")) & _SEED_MASK


def logistic_cdf(x):
    """Standard logistic CDF S(x) = 1 / (1 + exp(-x)).

    Evaluated in the numerically stable two-branch form; no overflow for
    any float argument and no underflow to zero until past |x| ~ 709.
    """
    return expit(x)


@dataclass(frozen=True)
class DgpSpec:
    """One data generating process: outcome family, coefficients, features.

    Parameters
    ----------
    family : str
        One of linear, polynomial, probit, logit.
    beta : tuple of floats
        (b0, b1, b2) for linear/probit/logit; (b0..b5) for polynomial,
        where b3, b4, b5 multiply X1^2, X2^2, X1*X2.
    mixture : MixtureSpec
        Group-conditional feature distributions and weights.
    n_per_group : int
        Rows generated for each group label.
    """

    family: str
    beta: tuple[float, ...]
    mixture: MixtureSpec
    n_per_group: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("unknown family %r, expected one of %r" % (self.family, FAMILIES))
        beta = tuple(float(b) for b in self.beta)
        object.__setattr__(self, "beta", beta)
        want = _BETA_LENGTH[self.family]
        if len(beta) != want:
            raise ValueError(
                "family %r needs %d coefficients, got %d" % (self.family, want, len(beta))
            )
        if not all(math.isfinite(b) for b in beta):
            raise ValueError("beta entries must be finite")
        if int(self.n_per_group) != self.n_per_group or self.n_per_group < 1:
            raise ValueError("n_per_group must be a positive integer")
        object.__setattr__(self, "n_per_group", int(self.n_per_group))

    @property
    def is_classification(self) -> bool:
        return self.family in CLASSIFICATION_FAMILIES


@dataclass
class Dataset:
    """Columnar simulated data.

    ``y`` is the regression outcome or the classification true risk;
    ``z`` is the Bernoulli(y) label for classification and None otherwise.
    """

    x1: np.ndarray
    x2: np.ndarray
    a: np.ndarray
    y: np.ndarray
    z: np.ndarray | None = field(default=None)

    @property
    def n(self) -> int:
        return self.x1.shape[0]

    def to_csv(self, path) -> None:
        """Write rows with header x1,x2,a,y,z; z is empty for regression."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            z = self.z
            for i in range(self.n):
                writer.writerow(
                    [
                        repr(float(self.x1[i])),
                        repr(float(self.x2[i])),
                        int(self.a[i]),
                        repr(float(self.y[i])),
                        "" if z is None else int(z[i]),
                    ]
                )

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != CSV_HEADER:
                raise ValueError("unexpected CSV header %r" % (header,))
            cols = {name: [] for name in CSV_HEADER}
            for row in reader:
                for name, value in zip(CSV_HEADER, row):
                    cols[name].append(value)
        has_z = any(v != "" for v in cols["z"])
        return cls(
            x1=np.array([float(v) for v in cols["x1"]]),
            x2=np.array([float(v) for v in cols["x2"]]),
            a=np.array([int(v) for v in cols["a"]], dtype=np.int64),
            y=np.array([float(v) for v in cols["y"]]),
            z=np.array([int(v) for v in cols["z"]], dtype=np.int64) if has_z else None,
        )


def _cholesky_2x2(cov: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a 2x2 PSD matrix, written out explicitly."""
    s11, s12 = cov[0, 0], cov[0, 1]
    s22 = cov[1, 1]
    if s11 < 0:
        raise InvalidCovarianceError("Var(X1) is negative: %r" % s11)
    l11 = math.sqrt(max(s11, 0.0))
    if l11 > 0:
        l21 = s12 / l11
    elif abs(s12) <= 1e-12:
        l21 = 0.0
    else:
        raise InvalidCovarianceError("degenerate X1 with nonzero covariance")
    rest = s22 - l21 * l21
    if rest < -1e-10:
        raise InvalidCovarianceError("covariance is not PSD (Schur complement %r)" % rest)
    l22 = math.sqrt(max(rest, 0.0))
    return np.array([[l11, 0.0], [l21, l22]])


def _index(beta: tuple[float, ...], x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return beta[0] + beta[1] * x1 + beta[2] * x2


def _regression_mean(spec: DgpSpec, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    h = _index(spec.beta, x1, x2)
    if spec.family == "polynomial":
        b = spec.beta
        h = h + b[3] * x1 * x1 + b[4] * x2 * x2 + b[5] * x1 * x2
    return h


def generate(spec: DgpSpec, seed: int) -> Dataset:
    """Simulate a dataset: n_per_group rows of group 0, then of group 1.

    Features come from each group's bivariate normal via an explicit 2x2
    Cholesky factor; regression outcomes add N(0,1) noise; classification
    outcomes store the exact risk in ``y`` and a Bernoulli draw in ``z``.
    Identical (spec, seed) gives a bit-identical Dataset.
    """
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _SEED_MASK))
    n = spec.n_per_group
    parts = []
    for g in spec.mixture.groups:
        standard = rng.standard_normal((n, 2))
        chol = _cholesky_2x2(g.cov_array())
        parts.append(standard @ chol.T + g.mean_array())
    features = np.vstack(parts)
    x1 = features[:, 0].copy()
    x2 = features[:, 1].copy()
    a = np.repeat(np.array([0, 1], dtype=np.int64), n)

    if spec.family in REGRESSION_FAMILIES:
        noise = rng.standard_normal(2 * n)
        y = _regression_mean(spec, x1, x2) + noise
        return Dataset(x1=x1, x2=x2, a=a, y=y, z=None)

    index = _index(spec.beta, x1, x2)
    y = ndtr(index) if spec.family == "probit" else expit(index)
    z = (rng.random(2 * n) < y).astype(np.int64)
    return Dataset(x1=x1, x2=x2, a=a, y=y, z=z)
