import json
from pathlib import Path

import pytest

from fourierpairs import GaussianTestFn, solve_vanishing

FIXTURES = Path(__file__).parent / "fixtures"


def load_gaussians(name: str) -> list[GaussianTestFn]:
    with open(FIXTURES / name) as fh:
        doc = json.load(fh)
    return [
        GaussianTestFn(center=p["center"], freq=p["freq"], width=p["width"])
        for p in doc["params"]
    ]


@pytest.fixture(scope="session")
def psf_gaussians():
    return load_gaussians("gaussians_psf.json")


@pytest.fixture(scope="session")
def pair_gaussians():
    return load_gaussians("gaussians_pair.json")


@pytest.fixture(scope="session")
def operator_gaussians():
    return load_gaussians("gaussians_operator.json")


@pytest.fixture(scope="session")
def jit_warm():
    # first solve triggers backend compilation; timed tests must not pay it
    solve_vanishing(100)
    return True
