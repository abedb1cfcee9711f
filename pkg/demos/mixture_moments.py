#!/usr/bin/env python3
"""
Moments of a two-group Gaussian mixture, by hand and by formula.

A population made of two Gaussian groups has pooled moments that mix the
group moments: means average, while variances pick up an extra
between-group term (law of total variance). This script builds the
reference mixture used across the demos, prints group and pooled moments
side by side, and confirms the pooled numbers against a brute-force
sample.
"""

import numpy as np

from biaslab import GroupGaussianSpec, MixtureSpec, group_moments, pooled_moments


def banner(title):
    print()
    print(title)
    print("-" * 60)


def show(label, m):
    print("%-8s E[X1]=%7.4f  E[X2]=%7.4f  Var(X1)=%7.4f  Var(X2)=%7.4f  Cov=%8.4f"
          % (label, m.e_x1, m.e_x2, m.var_x1, m.var_x2, m.cov_x1x2))


def main():
    # Groups share the X1 marginal but differ in X2 location; the
    # within-group covariances mirror each other.
    mixture = MixtureSpec(
        groups=(
            GroupGaussianSpec(mean=(1.0, 1.0), covariance=((1.0, 0.5), (0.5, 1.0))),
            GroupGaussianSpec(mean=(1.0, 3.0), covariance=((1.0, -0.5), (-0.5, 1.0))),
        ),
        weight_protected=0.5,
    )

    banner("Group and pooled moments")
    m0 = group_moments(mixture, 0)
    m1 = group_moments(mixture, 1)
    pooled = pooled_moments(mixture)
    show("group 0", m0)
    show("group 1", m1)
    show("pooled", pooled)

    banner("Law of total variance, spelled out for X2")
    within = 0.5 * m0.var_x2 + 0.5 * m1.var_x2
    means = np.array([m0.e_x2, m1.e_x2])
    between = np.average((means - pooled.e_x2) ** 2, weights=[0.5, 0.5])
    print("within-group average variance = %.4f" % within)
    print("between-group mean spread     = %.4f" % between)
    print("sum                           = %.4f (pooled Var(X2) = %.4f)"
          % (within + between, pooled.var_x2))

    banner("Pooled covariance can vanish while every group is correlated")
    print("group covariances are +0.5 and -0.5, and the groups share E[X1],")
    print("so the between-group term is zero and the mirror images cancel:")
    print("pooled Cov(X1, X2) = %.12f" % pooled.cov_x1x2)

    banner("Brute-force check (one million draws)")
    rng = np.random.default_rng(7)
    half = 500_000
    draws = [
        rng.multivariate_normal(g.mean, g.covariance, size=half)
        for g in mixture.groups
    ]
    x = np.vstack(draws)
    print("sample  E[X1]=%7.4f  E[X2]=%7.4f  Var(X1)=%7.4f  Var(X2)=%7.4f  Cov=%8.4f"
          % (x[:, 0].mean(), x[:, 1].mean(),
             x[:, 0].var(), x[:, 1].var(),
             np.cov(x[:, 0], x[:, 1])[0, 1]))
    print("formula E[X1]=%7.4f  E[X2]=%7.4f  Var(X1)=%7.4f  Var(X2)=%7.4f  Cov=%8.4f"
          % (pooled.e_x1, pooled.e_x2, pooled.var_x1, pooled.var_x2,
             pooled.cov_x1x2))


if __name__ == "__main__":
    main()
