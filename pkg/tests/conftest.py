import warnings

import pytest
from hypothesis import settings

from ghzqfi.oracle import DegenerateSpectrumWarning

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _quiet_oracle():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSpectrumWarning)
        yield


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)
