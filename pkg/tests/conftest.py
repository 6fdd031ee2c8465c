import pytest

from app.config import settings
from app.services.analysis import SylowAnalyzer
from app.services.construction import custom_action, thm1_action, thm2_action
from app.services.pgroup import catalog
from app.services.semidirect import SemidirectGroup


@pytest.fixture(scope="session")
def c2sq():
    return catalog("C2^2")


@pytest.fixture(scope="session")
def thm1_q3(c2sq):
    """N x| C2^2, N = GF(3)^3: 27 силовских 2-подгрупп, |G_2| = 28"""
    return SemidirectGroup(thm1_action(c2sq, 3))


@pytest.fixture(scope="session")
def thm1_q5(c2sq):
    """N x| C2^2, N = GF(5)^3: 125 силовских 2-подгрупп, |G_2| = 76"""
    return SemidirectGroup(thm1_action(c2sq, 5))


@pytest.fixture(scope="session")
def thm2_c2sq(c2sq):
    return SemidirectGroup(thm2_action(c2sq))


@pytest.fixture(scope="session")
def symmetric3():
    """S3 = GF(3) x| C2, C2 действует умножением на -1: P не избыточна"""
    action = custom_action(catalog("C2"), 3, [[[1]], [[2]]])
    return SemidirectGroup(action)


@pytest.fixture
def config():
    return settings.model_copy()


@pytest.fixture
def analyzer(config):
    return SylowAnalyzer(config)
