import pytest

from raman_memory.dressed_medium import AtomSystem, ControlField


@pytest.fixture(scope="session")
def cs_atom():
    return AtomSystem.alkali_d1(3.5, 256.0)


@pytest.fixture(scope="session")
def blue_control():
    return ControlField(rabi=15.0, detuning=50.0)


@pytest.fixture(scope="session")
def red_control():
    return ControlField(rabi=15.0, detuning=-50.0)
