import json

import numpy as np
import pytest

from builders.matrices import MatrixBuilder


@pytest.fixture
def unit_chain():
    # 0 → 1 с интенсивностью 1, состояние 1 поглощающее
    return MatrixBuilder.two_state(1.0)


@pytest.fixture
def symmetric_chain():
    return MatrixBuilder.two_state(1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def write_json(tmp_path):
    def write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
