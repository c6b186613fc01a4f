import pytest

import models
from feta import build_featured_team, prune_for_display
from instancegen import run_battery

RANDOM_INSTANCES = 200


@pytest.fixture(scope="session")
def access():
    return models.make_all()


@pytest.fixture(scope="session")
def team(access):
    fsys, fspec = access
    return build_featured_team(fsys, fspec)


@pytest.fixture(scope="session")
def pruned(team):
    return prune_for_display(team)


@pytest.fixture(scope="session")
def battery():
    return run_battery(RANDOM_INSTANCES)
