from __future__ import annotations

import pytest

from qsklyanin.exactalg import sym


@pytest.fixture
def q():
    return sym("s") ** 2


@pytest.fixture
def z():
    return sym("z")
