from fractions import Fraction

import pytest

from umvue import _pykernels, kernels
from umvue.generators import example1

F = Fraction


@pytest.fixture
def P1():
    return example1("P1")


@pytest.fixture
def P2():
    return example1("P2")


def _backends():
    out = [_pykernels]
    try:
        from umvue import _kernels
    except ImportError:
        pass
    else:
        out.append(_kernels)
    return out


BACKENDS = _backends()


@pytest.fixture(params=BACKENDS, ids=lambda mod: mod.__name__.rsplit(".", 1)[-1])
def backend(request, monkeypatch):
    """Route the linear algebra through one kernel backend."""
    mod = request.param
    for name in ("int_pivots", "float_pivots", "rational_pivots"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return mod
