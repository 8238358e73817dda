from __future__ import annotations

import pytest

from arborloose.quiver import make_quiver


@pytest.fixture
def q2():
    return make_quiver(2)


@pytest.fixture
def q3():
    return make_quiver(3)
