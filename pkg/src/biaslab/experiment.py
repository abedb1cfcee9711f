"""Config-driven experiment grid: generate, fit, audit, aggregate, emit.

A run maps (cell, replication) pairs to audits. Replication r of cell c
uses the derived seed base XOR hash(c, r), so every replication owns an
independent stream and the aggregated output does not depend on execution
order. Aggregation averages the per-replication statistics in replication
order with exactly rounded sums; the aggregated tau is recomputed as
b_group1 - b_group0 so the identity holds for the reported means.

Analytic predictions are attached where a closed form exists:

* correct specification (linear/ols, probit/probit, logit/logit on both
  features): all-zero errors;
* linear DGP fit by ols on X1 only: the omitted-variable closed form,
  exact for any mixture;
* probit DGP fit by probit on X1 only: the probit closed form, only when
  its independence/equal-variance assumptions hold, and compared with an
  extra 0.02 tolerance in quadrature because the pooled X2 is a mixture
  rather than the Gaussian the derivation assumes.

Cells whose fit raises (separation, rank deficiency, non-convergence) are
recorded as rows with an error message and verdict "error"; a grid run
always produces a full report.
"""

from __future__ import annotations

import json
import math
import sys
import time
from dataclasses import dataclass, field

from .analytic_linear import (
    GroupErrorPrediction,
    LinearDgpCoefficients,
    omitted_group_errors,
)
from .analytic_probit import ProbitDgpCoefficients, omitted_group_errors_probit
from .audit import Comparison, ErrorReport, compare, error_report
from .dgp import (
    CLASSIFICATION_FAMILIES,
    DgpSpec,
    derive_seed,
    generate,
)
from .estimators import (
    ForestParams,
    fit_forest,
    fit_logit,
    fit_ols,
    fit_probit,
    predict,
)
from .exceptions import (
    AssumptionViolationError,
    BiaslabError,
    ConfigError,
    InvalidCovarianceError,
)
from .moments import GroupGaussianSpec, MixtureSpec

MODELS = ("ols", "probit", "logit", "forest")
DEFAULT_SEED = 20240914
DEFAULT_REPLICATIONS = 30

CSV_HEADER = (
    "dgp,model,features,b_pop,b_g0,b_g1,tau,"
    "se_pop,se_g0,se_g1,se_tau,analytic_b_g0,analytic_b_g1,analytic_tau,verdict"
)

# Mixture approximation slack for the probit closed form (see module docstring).
PROBIT_MIXTURE_TOLERANCE = 0.02

TABLE_BETA = (-2.0, 1.0, 1.0)
TABLE_BETA_POLY = (-2.0, 1.0, 1.0, 1.0, 1.0, -1.0)
TABLE_MIXTURE = MixtureSpec(
    groups=(
        GroupGaussianSpec(mean=(1.0, 1.0), covariance=((1.0, 0.5), (0.5, 1.0))),
        GroupGaussianSpec(mean=(1.0, 3.0), covariance=((1.0, -0.5), (-0.5, 1.0))),
    ),
    weight_protected=0.5,
)


@dataclass(frozen=True)
class ExperimentCell:
    """One grid cell: a data generating process, a model family, a feature set."""

    dgp: DgpSpec
    model: str
    features: str
    replications: int | None = None  # overrides the config-wide count

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError("unknown model %r, expected one of %r" % (self.model, MODELS))
        if self.features not in ("both", "x1_only"):
            raise ConfigError("features must be 'both' or 'x1_only', got %r" % (self.features,))
        if self.model in ("probit", "logit") and self.dgp.family not in CLASSIFICATION_FAMILIES:
            raise ConfigError(
                "%s model needs binary outcomes; DGP family %r has none"
                % (self.model, self.dgp.family)
            )
        if self.replications is not None and self.replications < 1:
            raise ConfigError("replications must be >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    cells: tuple[ExperimentCell, ...]
    replications: int = DEFAULT_REPLICATIONS
    base_seed: int = DEFAULT_SEED
    z_threshold: float = 4.0

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if not self.cells:
            raise ConfigError("config needs at least one cell")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")


_ROW_FIELDS = (
    "dgp",
    "model",
    "features",
    "replications",
    "b_pop",
    "b_g0",
    "b_g1",
    "tau",
    "se_pop",
    "se_g0",
    "se_g1",
    "se_tau",
    "analytic_b_g0",
    "analytic_b_g1",
    "analytic_tau",
    "verdict",
    "error",
)


@dataclass
class ResultRow:
    """Aggregated statistics for one cell.

    ``wall_time``, ``reports`` and ``comparison`` are runtime extras and
    are excluded from serialization so emitted output depends only on the
    config (byte-identical reruns).
    """

    dgp: str
    model: str
    features: str
    replications: int
    b_pop: float
    b_g0: float
    b_g1: float
    tau: float
    se_pop: float
    se_g0: float
    se_g1: float
    se_tau: float
    analytic_b_g0: float | None = None
    analytic_b_g1: float | None = None
    analytic_tau: float | None = None
    verdict: str = ""
    error: str = ""
    wall_time: float = 0.0
    reports: tuple[ErrorReport, ...] | None = field(default=None, repr=False)
    comparison: Comparison | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in _ROW_FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRow":
        return cls(**{name: d[name] for name in _ROW_FIELDS})


def analytic_for_cell(cell: ExperimentCell) -> tuple[GroupErrorPrediction | None, float]:
    """Closed-form prediction for a cell, plus the comparison slack it needs.

    Returns (None, 0.0) when no closed form covers the cell (polynomial
    DGP, forest model, logit omitted-variable, or probit omitted-variable
    with violated assumptions).
    """
    dgp, model, features = cell.dgp.family, cell.model, cell.features
    correct_spec = (dgp, model) in (("linear", "ols"), ("probit", "probit"), ("logit", "logit"))
    if features == "both" and correct_spec:
        return GroupErrorPrediction(0.0, 0.0, 0.0, 0.0), 0.0
    if features == "x1_only" and dgp == "linear" and model == "ols":
        beta = LinearDgpCoefficients(*cell.dgp.beta)
        return omitted_group_errors(beta, cell.dgp.mixture), 0.0
    if features == "x1_only" and dgp == "probit" and model == "probit":
        beta = ProbitDgpCoefficients(*cell.dgp.beta)
        try:
            return omitted_group_errors_probit(beta, cell.dgp.mixture), PROBIT_MIXTURE_TOLERANCE
        except AssumptionViolationError:
            return None, 0.0
    return None, 0.0


def run_replication(cell: ExperimentCell, seed: int) -> ErrorReport:
    """Generate one dataset, fit the cell's model, audit score vs truth."""
    dataset = generate(cell.dgp, seed)
    if cell.model == "ols":
        model = fit_ols(dataset, cell.features)
    elif cell.model == "probit":
        model = fit_probit(dataset, cell.features)
    elif cell.model == "logit":
        model = fit_logit(dataset, cell.features)
    else:
        model = fit_forest(dataset, cell.features, seed=derive_seed(seed, "forest"))
    predictions = predict(model, dataset.x1, dataset.x2)
    return error_report(predictions, dataset.y, dataset.a)


def aggregate(indexed_reports: list[tuple[int, ErrorReport]]) -> dict[str, float]:
    """Combine per-replication reports into means and replication SEs.

    Input pairs may arrive in any order; they are sorted by replication
    index first, so the result is independent of execution schedule. With
    a single replication the report's own within-sample SEs are passed
    through; otherwise SE = std(stat across reps, ddof=1) / sqrt(R).
    """
    reports = [rep for _, rep in sorted(indexed_reports, key=lambda pair: pair[0])]
    n = len(reports)
    if n == 1:
        only = reports[0]
        return {
            "b_pop": only.b_pop,
            "b_g0": only.b_group0,
            "b_g1": only.b_group1,
            "tau": only.tau,
            "se_pop": only.se_pop,
            "se_g0": only.se_group0,
            "se_g1": only.se_group1,
            "se_tau": only.se_tau,
        }

    def mean_se(values: list[float]) -> tuple[float, float]:
        mean = math.fsum(values) / n
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        return mean, math.sqrt(var / n)

    b_pop, se_pop = mean_se([r.b_pop for r in reports])
    b_g0, se_g0 = mean_se([r.b_group0 for r in reports])
    b_g1, se_g1 = mean_se([r.b_group1 for r in reports])
    _, se_tau = mean_se([r.tau for r in reports])
    return {
        "b_pop": b_pop,
        "b_g0": b_g0,
        "b_g1": b_g1,
        "tau": b_g1 - b_g0,  # identity holds exactly for the reported means
        "se_pop": se_pop,
        "se_g0": se_g0,
        "se_g1": se_g1,
        "se_tau": se_tau,
    }


def run_cell(
    cell: ExperimentCell, cell_index: int, config: ExperimentConfig, keep_reports: bool = False
) -> ResultRow:
    started = time.perf_counter()
    replications = cell.replications or config.replications
    base = dict(
        dgp=cell.dgp.family,
        model=cell.model,
        features=cell.features,
        replications=replications,
    )
    try:
        indexed = [
            (r, run_replication(cell, derive_seed(config.base_seed, cell_index, r)))
            for r in range(replications)
        ]
    except BiaslabError as err:
        nan = float("nan")
        return ResultRow(
            **base,
            b_pop=nan, b_g0=nan, b_g1=nan, tau=nan,
            se_pop=nan, se_g0=nan, se_g1=nan, se_tau=nan,
            verdict="error",
            error="%s: %s" % (type(err).__name__, err),
            wall_time=time.perf_counter() - started,
        )
    stats = aggregate(indexed)
    reports = tuple(rep for _, rep in sorted(indexed, key=lambda pair: pair[0]))
    row = ResultRow(**base, **stats, wall_time=0.0)
    analytic, extra_tol = analytic_for_cell(cell)
    if analytic is not None:
        pooled = ErrorReport(
            b_pop=row.b_pop,
            b_group0=row.b_g0,
            b_group1=row.b_g1,
            tau=row.tau,
            se_pop=row.se_pop,
            se_group0=row.se_g0,
            se_group1=row.se_g1,
            se_tau=row.se_tau,
            n_pop=sum(r.n_pop for r in reports),
            n_group0=sum(r.n_group0 for r in reports),
            n_group1=sum(r.n_group1 for r in reports),
        )
        comparison = compare(analytic, pooled, config.z_threshold, extra_tol)
        row.analytic_b_g0 = analytic.b_group0
        row.analytic_b_g1 = analytic.b_group1
        row.analytic_tau = analytic.tau
        row.verdict = "consistent" if comparison.consistent else "inconsistent"
        row.comparison = comparison
    if keep_reports:
        row.reports = reports
    row.wall_time = time.perf_counter() - started
    return row


def run(config: ExperimentConfig, keep_reports: bool = False) -> list[ResultRow]:
    """Run every cell; deterministic given the config."""
    return [
        run_cell(cell, idx, config, keep_reports=keep_reports)
        for idx, cell in enumerate(config.cells)
    ]


def table1_config(
    n_per_group: int = 10000,
    replications: int = DEFAULT_REPLICATIONS,
    base_seed: int = DEFAULT_SEED,
) -> ExperimentConfig:
    """The built-in ten-cell grid at the reference simulation parameters.

    Row order matches the published layout: linear, logistic, probit,
    forest (both on the linear DGP), then polynomial; each model first
    with both features, then with X1 only.
    """

    def dgp(family: str) -> DgpSpec:
        beta = TABLE_BETA_POLY if family == "polynomial" else TABLE_BETA
        return DgpSpec(
            family=family, beta=beta, mixture=TABLE_MIXTURE, n_per_group=n_per_group
        )

    cells = []
    for family, model in (
        ("linear", "ols"),
        ("logit", "logit"),
        ("probit", "probit"),
        ("linear", "forest"),
        ("polynomial", "ols"),
    ):
        for features in ("both", "x1_only"):
            cells.append(ExperimentCell(dgp=dgp(family), model=model, features=features))
    return ExperimentConfig(
        cells=tuple(cells), replications=replications, base_seed=base_seed
    )


def _sig6(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return "%.6g" % value


def render(rows: list[ResultRow], fmt: str) -> str:
    """Render rows as csv, markdown or json text (6 significant digits for
    the table formats; json keeps full precision)."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for r in rows:
            lines.append(
                ",".join(
                    [r.dgp, r.model, r.features]
                    + [
                        _sig6(v)
                        for v in (
                            r.b_pop, r.b_g0, r.b_g1, r.tau,
                            r.se_pop, r.se_g0, r.se_g1, r.se_tau,
                            r.analytic_b_g0, r.analytic_b_g1, r.analytic_tau,
                        )
                    ]
                    + [r.verdict]
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        header = "| DGP | Model | Features | b_pop | b_group0 | b_group1 | tau |"
        rule = "|---|---|---|---|---|---|---|"
        lines = [header, rule]
        for r in rows:
            lines.append(
                "| %s | %s | %s | %s | %s | %s | %s |"
                % (
                    r.dgp, r.model, r.features,
                    _sig6(r.b_pop), _sig6(r.b_g0), _sig6(r.b_g1), _sig6(r.tau),
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps({"rows": [r.to_dict() for r in rows]}, indent=2) + "\n"
    raise ConfigError("unknown output format %r" % (fmt,))


def emit(rows: list[ResultRow], fmt: str, destination=None) -> None:
    """Write rendered rows to a path, or to stdout when destination is None."""
    text = render(rows, fmt)
    if destination is None:
        sys.stdout.write(text)
        return
    try:
        with open(destination, "w") as fh:
            fh.write(text)
    except OSError as err:
        raise ConfigError("cannot write %r: %s" % (destination, err)) from err


def parse_mixture(obj: dict) -> MixtureSpec:
    """Build a MixtureSpec from its JSON form."""
    try:
        groups = tuple(
            GroupGaussianSpec(
                mean=tuple(g["mean"]),
                covariance=tuple(tuple(row) for row in g["covariance"]),
            )
            for g in obj["groups"]
        )
        return MixtureSpec(
            groups=groups, weight_protected=obj.get("weight_protected", 0.5)
        )
    except (KeyError, TypeError, InvalidCovarianceError) as err:
        raise ConfigError("malformed mixture spec: %s" % err) from err


def parse_config(obj: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from its JSON form."""
    try:
        cells = []
        for cell in obj["cells"]:
            dgp = cell["dgp"]
            spec = DgpSpec(
                family=dgp["family"],
                beta=tuple(dgp["beta"]),
                mixture=parse_mixture(dgp["mixture"]),
                n_per_group=dgp["n_per_group"],
            )
            cells.append(
                ExperimentCell(
                    dgp=spec,
                    model=cell["model"],
                    features=cell["features"],
                    replications=cell.get("replications"),
                )
            )
        return ExperimentConfig(
            cells=tuple(cells),
            replications=obj.get("replications", DEFAULT_REPLICATIONS),
            base_seed=obj.get("seed", DEFAULT_SEED),
            z_threshold=obj.get("z_threshold", 4.0),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError("malformed config: %s" % err) from err


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError("cannot load config %r: %s" % (str(path), err)) from err
    return parse_config(obj)
