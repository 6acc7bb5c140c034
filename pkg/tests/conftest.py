from datetime import timedelta

import pytest

from isarlimits import tradeoff
from isarlimits.scenario import builtin_scenario


@pytest.fixture(scope="session")
def cosmos():
    return builtin_scenario("cosmos2494")


@pytest.fixture(scope="session")
def cosmos_passes(cosmos):
    return tradeoff.scenario_passes(cosmos)


@pytest.fixture(scope="session")
def cosmos_mid(cosmos_passes):
    p = cosmos_passes[0]
    return p.rise + timedelta(seconds=0.5 * p.duration)
