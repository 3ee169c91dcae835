import numpy as np
import pytest

from qorbits.model import InitialCoefficients


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


def random_eta(rng, pattern="C7"):
    """Random normalized coefficients with the zero pattern of a case."""
    mask = {
        "C1": (0, 0, 1, 1),
        "C2": (1, 0, 0, 0),
        "C3": (1, 1, 0, 0),
        "C4": (1, 0, 1, 0),
        "C5": (1, 1, 1, 0),
        "C6": (1, 0, 1, 1),
        "C7": (1, 1, 1, 1),
    }[pattern]
    v = (rng.normal(size=4) + 1j * rng.normal(size=4)) * np.array(mask)
    return InitialCoefficients.normalized(*v)
