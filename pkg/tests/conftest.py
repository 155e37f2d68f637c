import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from mfmsbm.prior import ComponentPmf, compute_log_v


@pytest.fixture(scope="session")
def poisson_pmf():
    return ComponentPmf.truncated_poisson(1.0)


@pytest.fixture(scope="session")
def table8(poisson_pmf):
    return compute_log_v(8, gamma=1.0, pmf=poisson_pmf)


@pytest.fixture(scope="session")
def table100(poisson_pmf):
    return compute_log_v(100, gamma=1.0, pmf=poisson_pmf)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
