import hypothesis
import pytest

from srptlab import SpeedConfig, make_instance, simulate_srpt
from srptlab.rationals import rat

hypothesis.settings.register_profile(
    "srptlab",
    deadline=None,
    max_examples=60,
    derandomize=True,
)
hypothesis.settings.load_profile("srptlab")


# Three jobs on two machines; the running example used throughout the suite.
E1_TRIPLES = [(0, 0, 3), (1, 0, 1), (2, 1, 1)]


@pytest.fixture(scope="session")
def e1_instance():
    return make_instance(E1_TRIPLES, machines=2)


@pytest.fixture(scope="session")
def e1_unit_trace(e1_instance):
    return simulate_srpt(e1_instance, SpeedConfig.from_speed(rat(1)))


@pytest.fixture(scope="session")
def e1_fast_trace(e1_instance):
    return simulate_srpt(e1_instance, SpeedConfig.from_speed(rat("3/2")))
