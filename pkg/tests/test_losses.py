import math
from fractions import Fraction as F

import pytest

from umvue.characterize import is_umvue_oracle
from umvue.generators import BernoulliSpec, bernoulli
from umvue.losses import (
    LossSpec,
    UnsupportedLossError,
    check_derivative_implication,
    check_ubue,
    risk,
)
from umvue.model import StatModel, expectation, variance

LOSSES = [LossSpec(k) for k in ("square", "power4", "exponential")]


def test_risk_examples(P1):
    T = [1, 1, 1, 0]
    assert risk(P1, T, LossSpec("square"), 0) == 1
    S = [F(1, 2), 0, 3, -1]
    for th in range(2):
        assert risk(P1, S, LossSpec("square"), th) == variance(P1, S, th) + expectation(P1, S)[th] ** 2
        assert risk(P1, [0] * 4, LossSpec("exponential"), th) == pytest.approx(1.0)


def test_loss_kinds():
    assert LossSpec("power4")(F(1, 2)) == F(5, 16)
    assert LossSpec("exponential").derivative(0.0) == 1.0
    with pytest.raises(UnsupportedLossError):
        LossSpec("hinge")
    tab = LossSpec("custom-table", ((0, 0), (1, 1), (2, 4)))
    assert tab(F(3, 2)) == F(5, 2) and tab(3) == 7
    assert not tab.differentiable
    with pytest.raises(ValueError, match="convex"):
        LossSpec("custom-table", ((0, 0), (1, 2), (2, 3)))


@pytest.mark.parametrize("loss", LOSSES, ids=lambda l: l.kind)
def test_ubue_holds_for_umvue(P1, loss):
    rep = check_ubue(P1, [1, 1, 1, 0], loss)
    assert rep.holds
    assert rep.downgraded == (loss.kind == "exponential")
    assert len(rep.competitors) >= 100


def test_ubue_finds_violation_along_h1(P1):
    rep = check_ubue(P1, [0, 1, 0, 0], LossSpec("square"))
    assert not rep.holds and rep.margin < 0
    assert rep.to_json()["decision"] == "no"


def test_ubue_vacuous_without_e0():
    m = StatModel.from_rows([["1", "0"], ["1/2", "1/2"]])
    rep = check_ubue(m, [3, -1])
    assert rep.holds and rep.competitors == []


def test_ubue_is_reproducible(P1):
    a = check_ubue(P1, [1, 1, 1, 0], directions=10, seed=7).to_json()
    b = check_ubue(P1, [1, 1, 1, 0], directions=10, seed=7).to_json()
    assert a == b


def test_custom_table_loss(P2):
    tab = LossSpec("custom-table", ((-10, 100), (0, 0), (10, 100)))
    assert check_ubue(P2, [7, 7, 1, 0], tab, directions=20)
    with pytest.raises(UnsupportedLossError):
        check_derivative_implication(P2, [7, 7, 1, 0], tab)


def test_derivative_implication_examples(P1, P2):
    m, T = bernoulli(BernoulliSpec(2, ("1/4", "1/2", "3/4")))
    for model, stat in ((P1, [0, 1, 0, 0]), (P1, [2, 2, 2, 0]), (P2, [1, 2, 3, 4]), (m, T)):
        assert bool(check_derivative_implication(model, stat, LossSpec("square"))) == \
            bool(is_umvue_oracle(model, stat))
    assert check_derivative_implication(P2, [7, 7, 1, 0], LossSpec("exponential"))
    assert not check_derivative_implication(P1, [0, 1, 0, 0], LossSpec("power4"))


def test_exponential_risk_value(P1):
    assert risk(P1, [1, 1, 1, 0], LossSpec("exponential"), 0) == pytest.approx(math.e)
