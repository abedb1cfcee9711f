"""From-scratch model fitting: OLS, probit/logit MLE, CART regression forest.

The maximum-likelihood fits use damped Newton with analytic gradients and
Hessians (start at zero, step-halving line search, hard iteration cap); the
forest is bagged CART with a variance-reduction split criterion. scipy
supplies only scalar numerics primitives (normal CDF, log CDF, logistic),
never the fitting itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_ndtr, ndtr

from .dgp import Dataset, derive_seed
from .exceptions import ConvergenceError, RankDeficiencyError, SeparationError

FEATURE_SETS = ("both", "x1_only")

_GRAD_TOL = 1e-6
_STEP_TOL = 1e-8
_MAX_ITER = 100
_MAX_HALVINGS = 30
# Accepted index magnitudes beyond this mean the likelihood is driving the
# coefficients off to infinity, i.e. (quasi-)separation.
_SEPARATION_INDEX = 30.0
_RANK_TOL = 1e-10
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_features(features: str) -> None:
    if features not in FEATURE_SETS:
        raise ValueError("features must be one of %r, got %r" % (FEATURE_SETS, features))


def _design(x1: np.ndarray, x2: np.ndarray | None, features: str) -> np.ndarray:
    _check_features(features)
    x1 = np.asarray(x1, dtype=float)
    if features == "x1_only":
        return np.column_stack([np.ones_like(x1), x1])
    if x2 is None:
        raise ValueError("features='both' requires x2")
    return np.column_stack([np.ones_like(x1), x1, np.asarray(x2, dtype=float)])


@dataclass(frozen=True)
class FitDiagnostics:
    """Optimizer trace for the MLE families."""

    iterations: int
    grad_max: float
    log_likelihood: tuple[float, ...]


@dataclass(frozen=True)
class ForestParams:
    """Forest hyperparameters; the defaults are declared, not tuned."""

    n_trees: int = 100
    max_depth: int = 8
    min_leaf: int = 5
    bootstrap_ratio: float = 1.0


@dataclass(frozen=True)
class Tree:
    """One CART tree in flattened-array form; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray


@dataclass(frozen=True)
class FittedModel:
    """A fitted predictor: coefficients for ols/probit/logit, trees for forest."""

    family: str
    features: str
    coefficients: tuple[float, ...] | None = None
    forest: tuple[Tree, ...] | None = None
    forest_params: ForestParams | None = None
    diagnostics: FitDiagnostics | None = None

    def to_summary(self) -> dict:
        out = {
            "family": self.family,
            "features": self.features,
            "coefficients": None if self.coefficients is None else list(self.coefficients),
        }
        if self.diagnostics is not None:
            out["diagnostics"] = {
                "iterations": self.diagnostics.iterations,
                "grad_max": self.diagnostics.grad_max,
            }
        return out


def fit_ols(data: Dataset, features: str) -> FittedModel:
    """Least squares of y on an intercept plus the selected features.

    Solves the normal equations by LU factorization with partial pivoting.
    Full column rank is required: smallest/largest singular value of the
    design must exceed 1e-10, else RankDeficiencyError.
    """
    x = _design(data.x1, data.x2, features)
    sv = np.linalg.svd(x, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] / sv[0] <= _RANK_TOL:
        raise RankDeficiencyError(
            "design matrix is rank deficient (singular value ratio %.3e)"
            % (sv[-1] / sv[0] if sv[0] else 0.0)
        )
    coef = np.linalg.solve(x.T @ x, x.T @ np.asarray(data.y, dtype=float))
    return FittedModel(family="ols", features=features, coefficients=tuple(coef))


def _mills(t: np.ndarray) -> np.ndarray:
    """phi(t) / Phi(t), guarded for large |t| where the direct ratio is 0/0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    direct = np.abs(t) <= 8.0
    td = t[direct]
    out[direct] = np.exp(-0.5 * td * td - _LOG_SQRT_2PI) / ndtr(td)
    tg = t[~direct]
    out[~direct] = np.exp(-0.5 * tg * tg - _LOG_SQRT_2PI - log_ndtr(tg))
    return out


class _ProbitLink:
    """Bernoulli log-likelihood pieces for risk = Phi(index)."""

    @staticmethod
    def loglik(eta: np.ndarray, z: np.ndarray) -> float:
        return float(np.sum(np.where(z == 1, log_ndtr(eta), log_ndtr(-eta))))

    @staticmethod
    def grad_weights(eta: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lam_pos = _mills(eta)
        lam_neg = _mills(-eta)
        u = np.where(z == 1, lam_pos, -lam_neg)
        w = np.where(z == 1, lam_pos * (lam_pos + eta), lam_neg * (lam_neg - eta))
        return u, w


class _LogitLink:
    """Bernoulli log-likelihood pieces for risk = S(index)."""

    @staticmethod
    def loglik(eta: np.ndarray, z: np.ndarray) -> float:
        return float(-np.sum(np.where(z == 1, np.logaddexp(0.0, -eta), np.logaddexp(0.0, eta))))

    @staticmethod
    def grad_weights(eta: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        p = expit(eta)
        return z - p, p * (1.0 - p)


def _newton_mle(x: np.ndarray, z: np.ndarray, link) -> tuple[np.ndarray, FitDiagnostics]:
    """Damped Newton ascent of the Bernoulli log-likelihood.

    Starts at zero, halves the step until the log-likelihood does not
    decrease beyond its own rounding floor (relative 1e-12; the true
    improvement of a near-optimal step can round away in a sum of n
    terms), and stops once the gradient max-norm is <= 1e-6. A step below
    1e-8 returns early only if the gradient has also passed; with a
    still-large gradient the loop continues (near the optimum quadratic
    convergence finishes in one more pass). Accepted iterates whose index
    magnitudes pass 30 raise SeparationError (the MLE is running off to
    infinity); exhausting 100 iterations raises ConvergenceError.
    """
    if z.min() == z.max():
        raise SeparationError("all outcomes are the same class; the MLE does not exist")
    coef = np.zeros(x.shape[1])
    eta = x @ coef
    ll = link.loglik(eta, z)
    trace = [ll]
    for iteration in range(1, _MAX_ITER + 1):
        u, w = link.grad_weights(eta, z)
        grad = x.T @ u
        grad_max = float(np.max(np.abs(grad)))
        if grad_max <= _GRAD_TOL:
            return coef, FitDiagnostics(
                iterations=iteration - 1, grad_max=grad_max, log_likelihood=tuple(trace)
            )
        info = x.T @ (x * w[:, None])
        try:
            step = np.linalg.solve(info, grad)
        except np.linalg.LinAlgError as err:
            raise ConvergenceError("singular information matrix: %s" % err) from err

        if float(np.max(np.abs(x @ (coef + step)))) > _SEPARATION_INDEX:
            raise SeparationError(
                "index magnitudes exceed %g at iteration %d; data appear separable"
                % (_SEPARATION_INDEX, iteration)
            )

        slack = 1e-12 * max(1.0, abs(ll))
        scale = 1.0
        for _ in range(_MAX_HALVINGS + 1):
            trial = coef + scale * step
            eta_trial = x @ trial
            ll_trial = link.loglik(eta_trial, z)
            if ll_trial >= ll - slack:
                break
            scale *= 0.5
        else:
            raise ConvergenceError(
                "line search failed after %d halvings at iteration %d"
                % (_MAX_HALVINGS, iteration)
            )

        step_max = float(np.max(np.abs(scale * step)))
        coef, eta, ll = trial, eta_trial, ll_trial
        trace.append(ll)
        if step_max < _STEP_TOL:
            u, _ = link.grad_weights(eta, z)
            grad_max = float(np.max(np.abs(x.T @ u)))
            if grad_max <= _GRAD_TOL:
                return coef, FitDiagnostics(
                    iterations=iteration, grad_max=grad_max, log_likelihood=tuple(trace)
                )
    u, _ = link.grad_weights(eta, z)
    raise ConvergenceError(
        "no convergence after %d iterations (gradient max-norm %.3e)"
        % (_MAX_ITER, float(np.max(np.abs(x.T @ u))))
    )


def _fit_mle(data: Dataset, features: str, link, family: str) -> FittedModel:
    if data.z is None:
        raise ValueError("classification fit requires a dataset with z labels")
    x = _design(data.x1, data.x2, features)
    z = np.asarray(data.z, dtype=float)
    coef, diagnostics = _newton_mle(x, z, link)
    return FittedModel(
        family=family,
        features=features,
        coefficients=tuple(coef),
        diagnostics=diagnostics,
    )


def fit_probit(data: Dataset, features: str) -> FittedModel:
    """Probit MLE of z on an intercept plus the selected features."""
    return _fit_mle(data, features, _ProbitLink, "probit")


def fit_logit(data: Dataset, features: str) -> FittedModel:
    """Logit MLE of z on an intercept plus the selected features."""
    return _fit_mle(data, features, _LogitLink, "logit")


def _grow_tree(xmat: np.ndarray, y: np.ndarray, params: ForestParams) -> Tree:
    """CART regression tree: greedy variance-reduction splits, depth-capped."""
    n_features = xmat.shape[1]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    root = new_node()
    stack = [(root, np.arange(y.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        yr = y[rows]
        m = rows.shape[0]
        value[node] = float(yr.mean())
        if depth >= params.max_depth or m < 2 * params.min_leaf or yr.min() == yr.max():
            continue

        best = None  # (cost, feature, threshold, sorted rows, left size)
        for f in range(n_features):
            xf = xmat[rows, f]
            order = np.argsort(xf, kind="stable")
            xs = xf[order]
            ys = yr[order]
            csum = np.cumsum(ys)
            csum2 = np.cumsum(ys * ys)
            total, total2 = csum[-1], csum2[-1]
            sizes = np.arange(params.min_leaf, m - params.min_leaf + 1)
            valid = xs[sizes - 1] < xs[sizes]
            if not valid.any():
                continue
            sizes = sizes[valid]
            ls, ls2 = csum[sizes - 1], csum2[sizes - 1]
            rs, rs2 = total - ls, total2 - ls2
            cost = (ls2 - ls * ls / sizes) + (rs2 - rs * rs / (m - sizes))
            pick = int(np.argmin(cost))
            if best is None or cost[pick] < best[0]:
                i = int(sizes[pick])
                thr = 0.5 * (xs[i - 1] + xs[i])
                if not xs[i - 1] < thr:  # adjacent floats can round the midpoint
                    thr = xs[i - 1]
                best = (float(cost[pick]), f, float(thr), rows[order], i)

        if best is None:
            continue
        _, f, thr, sorted_rows, i = best
        go_left = xmat[sorted_rows, f] <= thr
        left_rows = sorted_rows[go_left]
        right_rows = sorted_rows[~go_left]
        if min(left_rows.shape[0], right_rows.shape[0]) < params.min_leaf:
            # midpoint landed on the upper value; split on the lower one
            thr = float(xmat[sorted_rows[i - 1], f])
            go_left = xmat[sorted_rows, f] <= thr
            left_rows = sorted_rows[go_left]
            right_rows = sorted_rows[~go_left]
        feature[node] = f
        threshold[node] = thr
        lid, rid = new_node(), new_node()
        left[node], right[node] = lid, rid
        stack.append((lid, left_rows, depth + 1))
        stack.append((rid, right_rows, depth + 1))

    return Tree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=float),
    )


def fit_forest(
    data: Dataset,
    features: str,
    params: ForestParams | None = None,
    seed: int = 0,
) -> FittedModel:
    """Bagged CART regression forest for y, deterministic given the seed.

    Each tree trains on a bootstrap resample drawn from its own
    counter-derived substream, so the ensemble is identical regardless of
    the order trees are built in.
    """
    params = params or ForestParams()
    x = _design(data.x1, data.x2, features)[:, 1:]  # trees do not use an intercept
    y = np.asarray(data.y, dtype=float)
    n = y.shape[0]
    if n < 2 * params.min_leaf:
        raise ValueError("need at least 2*min_leaf rows, got %d" % n)
    n_boot = max(1, int(round(params.bootstrap_ratio * n)))
    trees = []
    for t in range(params.n_trees):
        rng = np.random.Generator(np.random.Philox(key=derive_seed(seed, "tree", t)))
        boot = rng.integers(0, n, size=n_boot)
        trees.append(_grow_tree(x[boot], y[boot], params))
    return FittedModel(
        family="forest", features=features, forest=tuple(trees), forest_params=params
    )


def _tree_predict(tree: Tree, xmat: np.ndarray) -> np.ndarray:
    idx = np.zeros(xmat.shape[0], dtype=np.int64)
    while True:
        rows = np.nonzero(tree.feature[idx] >= 0)[0]
        if rows.shape[0] == 0:
            return tree.value[idx]
        nodes = idx[rows]
        xv = xmat[rows, tree.feature[nodes]]
        go_left = xv <= tree.threshold[nodes]
        idx[rows] = np.where(go_left, tree.left[nodes], tree.right[nodes])


def tree_predictions(model: FittedModel, x1, x2=None) -> np.ndarray:
    """Per-tree predictions, shape (n_trees, n); the forest score is their mean."""
    if model.forest is None:
        raise ValueError("model has no trees")
    xmat = _design(x1, x2, model.features)[:, 1:]
    return np.vstack([_tree_predict(tree, xmat) for tree in model.forest])


def predict(model: FittedModel, x1, x2=None) -> np.ndarray:
    """Score rows with a fitted model.

    ols and forest return real-valued scores; probit returns Phi(index)
    and logit returns S(index), both in [0, 1]. ``x2`` may be omitted for
    x1_only models.
    """
    if model.family == "forest":
        return tree_predictions(model, x1, x2).mean(axis=0)
    x = _design(x1, x2, model.features)
    index = x @ np.asarray(model.coefficients, dtype=float)
    if model.family == "ols":
        return index
    if model.family == "probit":
        return ndtr(index)
    if model.family == "logit":
        return expit(index)
    raise ValueError("unknown model family %r" % (model.family,))
