"""Shared builders and hypothesis strategies for the test modules."""

import math

import hypothesis.strategies as st

from biaslab.moments import GroupGaussianSpec, MixtureSpec

IDENTITY = ((1.0, 0.0), (0.0, 1.0))


def make_mixture(mean0, mean1, cov0=IDENTITY, cov1=IDENTITY, weight=0.5):
    return MixtureSpec(
        groups=(
            GroupGaussianSpec(mean=tuple(mean0), covariance=cov0),
            GroupGaussianSpec(mean=tuple(mean1), covariance=cov1),
        ),
        weight_protected=weight,
    )


def independent_mixture():
    """Identity within-group covariances, group X2 means 1 and 3."""
    return make_mixture((1.0, 1.0), (1.0, 3.0))


@st.composite
def mixtures(draw):
    """Random well-conditioned two-group mixtures."""

    def group():
        m1 = draw(st.floats(-5.0, 5.0))
        m2 = draw(st.floats(-5.0, 5.0))
        v1 = draw(st.floats(0.1, 4.0))
        v2 = draw(st.floats(0.1, 4.0))
        rho = draw(st.floats(-0.9, 0.9))
        c = rho * math.sqrt(v1 * v2)
        return GroupGaussianSpec(mean=(m1, m2), covariance=((v1, c), (c, v2)))

    weight = draw(st.floats(0.05, 0.95))
    return MixtureSpec(groups=(group(), group()), weight_protected=weight)


coefficients = st.floats(-5.0, 5.0)
