import pytest

from foldfold import get_scenario
from foldfold.regularize import get_transition


@pytest.fixture(scope="session")
def ii_family():
    return get_scenario("ii-basic").family()


@pytest.fixture(scope="session")
def vi_family():
    return get_scenario("vi-basic").family()


@pytest.fixture(scope="session")
def bf_family():
    return get_scenario("b-field").family()


@pytest.fixture(scope="session")
def ex1_family():
    return get_scenario("ex1").family()


@pytest.fixture(scope="session")
def cubic():
    return get_transition("cubic")


@pytest.fixture(scope="session")
def quintic():
    return get_transition("quintic")


@pytest.fixture(scope="session")
def quintic_b():
    return get_transition("quintic-b")


@pytest.fixture(scope="session")
def septic():
    return get_transition("septic")


@pytest.fixture(scope="session")
def linear():
    return get_transition("linear")
