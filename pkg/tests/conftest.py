from __future__ import annotations

import pytest

from typeq import build_field


@pytest.fixture(scope="session")
def f9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def f25():
    return build_field(5, 2)


@pytest.fixture(scope="session")
def f3():
    return build_field(3, 1)
