import numpy as np
import pytest

from encomp.kernels import KernelSpec, TrimRule, build_context
from encomp.model import validate_sample
from encomp.weighting import WeightSpec, build_weight_matrix, transform_x


def random_problem(seed, n=15, p=1, d=1, h=None, trim_alpha=None):
    """Random sample plus the frozen context and weight matrix built on it."""
    rng = np.random.default_rng(seed)
    sample = validate_sample(rng.normal(size=n), rng.normal(size=(n, p)), rng.normal(size=(n, d)))
    h = float(rng.uniform(0.3, 1.5)) if h is None else h
    ctx = build_context(sample.w, KernelSpec(h), TrimRule(trim_alpha))
    xt = transform_x(sample.x, WeightSpec())
    A = build_weight_matrix(xt, ctx.trim)
    return sample, ctx, xt, A


@pytest.fixture
def problem():
    return random_problem(0)
