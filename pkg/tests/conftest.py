import pytest

from modcov.cases import CaseKind, make_action


@pytest.fixture
def v3_3():
    return make_action(CaseKind.V3, 3)


@pytest.fixture
def c4():
    return make_action(CaseKind.V3C4, 2)
