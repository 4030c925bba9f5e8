import itertools
import random
from fractions import Fraction as F

import pytest

from umvue import linalg
from umvue.characterize import (
    Certificate,
    NotUMVUEError,
    atoms,
    certificate,
    check_sufficiency_definition,
    decompose,
    is_complete,
    is_sufficient,
    is_umvue,
    is_umvue_oracle,
    sigma0,
    sigma0_bruteforce,
    verify_certificate,
)
from umvue.generators import BernoulliSpec, bernoulli
from umvue.model import StatModel, clean, likelihood, to_float

pytestmark = pytest.mark.usefixtures("backend")

P2_EVENTS = [set(), {3}, {4}, {1, 2}, {3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 2, 3, 4}]


def shift(family):
    return {frozenset(x + 1 for x in A) for A in family}


def test_decompose_examples(P1, P2):
    d = decompose(clean(P1), [5, 5, 5, 9])
    assert d.basis_sizes() == {5: 2, 9: 0}
    assert d.members == ((0, 1, 2), (3,))
    assert decompose(clean(P2), [1, 1, 2, 3]).basis_sizes() == {1: 1, 2: 1, 3: 0}
    assert decompose(clean(P1), [0] * 4).basis_sizes() == {0: 2}


def test_is_umvue_p1_p2(P1, P2):
    assert is_umvue(P1, [4, 4, 4, -1])
    d = is_umvue(P1, [0, 0, 1, 0])
    assert not d and set(d.witness) == {0, 1, 2}
    assert is_umvue(P2, [7, 7, 1, 0])
    assert not is_umvue(P2, [1, 2, 3, 4])
    assert is_umvue(P2, [3, 3, 3, 3])


def test_oracle_examples(P1):
    assert is_umvue_oracle(P1, [5, 5, 5, 9])
    assert not is_umvue_oracle(P1, [0, 1, 0, 0])
    inv = StatModel.from_rows([["1", "0"], ["1/2", "1/2"]])
    for T in ([0, 1], [3, -7]):
        assert is_umvue_oracle(inv, T)


@pytest.mark.parametrize("which,rule", [("P1", lambda T: T[0] == T[1] == T[2]),
                                        ("P2", lambda T: T[0] == T[1])])
def test_exhaustive_templates(request, which, rule):
    m = request.getfixturevalue(which)
    for T in itertools.product(range(3), repeat=4):
        assert bool(is_umvue(m, T)) == rule(T) == bool(is_umvue_oracle(m, T))


def test_completeness_examples(P1):
    assert is_complete(P1, [5, 5, 5, 9])
    assert not is_complete(P1, [1, 2, 3, 4])
    m, T = bernoulli(BernoulliSpec(2, ("1/4", "1/2", "3/4")))
    assert is_complete(m, T)


def test_sufficiency_examples(P1, P2):
    m, T = bernoulli(BernoulliSpec(3, ("1/5", "1/3", "1/2", "3/4")))
    assert is_sufficient(m, T)
    assert not is_sufficient(P1, [5, 5, 5, 9])
    assert is_sufficient(P1, [0, 1, 2, 3])
    one = StatModel.from_rows([["1/2", "1/2"], ["1/2", "1/2"]])
    assert check_sufficiency_definition(one, [0, 0])
    assert not check_sufficiency_definition(P1, [0, 0, 0, 0])
    for model, stat in ((P1, [5, 5, 5, 9]), (P2, [1, 1, 0, 0]), (P2, [0, 0, 0, 0]), (m, T)):
        assert bool(is_sufficient(model, stat)) == bool(check_sufficiency_definition(model, stat))


def test_sigma0_examples(P1, P2):
    assert sigma0(P1).blocks == ((0, 1, 2), (3,))
    assert sigma0(P2).blocks == ((0, 1), (2,), (3,))
    assert shift(sigma0(P1).events()) == {frozenset(), frozenset({1, 2, 3}), frozenset({4}),
                                          frozenset({1, 2, 3, 4})}
    eye = StatModel.from_rows([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    assert sigma0(eye).blocks == ((0,), (1,), (2,))


def test_sigma0_bruteforce_examples(P1, P2):
    assert shift(sigma0_bruteforce(P1)) == {frozenset(s) for s in ([], [1, 2, 3], [4], [1, 2, 3, 4])}
    assert shift(sigma0_bruteforce(P2)) == {frozenset(s) for s in P2_EVENTS}
    assert sigma0_bruteforce(StatModel.from_rows([["1"]])) == {frozenset(), frozenset({0})}
    assert atoms(sigma0_bruteforce(P2), 4) == [(0, 1), (2,), (3,)]


def test_sigma0_bruteforce_cap(P1):
    with pytest.raises(ValueError, match="cap"):
        sigma0_bruteforce(P1, cap=3)


def test_certificate_p2(P2):
    T = [7, 7, 1, 0]
    cert = certificate(P2, T)
    lam = cert.lambda_
    assert lam.shape == (2, 2)
    for x, t in enumerate(T[:3]):
        col = likelihood(P2, x)
        assert linalg.matvec(lam, col) == tuple(t * v for v in col)
    assert verify_certificate(P2, cert)


def test_certificate_constant_is_scaled_identity(P1):
    cert = certificate(P1, [3, 3, 3, 3])
    assert cert.lambda_.rows == ((3, 0), (0, 3))
    assert verify_certificate(P1, cert)


def test_certificate_refuses_non_umvue(P1):
    with pytest.raises(NotUMVUEError, match="not a UMVUE"):
        certificate(P1, [0, 1, 0, 0])


def test_verify_rejects_wrong_operator(P2):
    eye = linalg.Matrix.from_rows([[1, 0], [0, 1]])
    bad = Certificate(eye, P2.statistic([7, 7, 1, 0]), (0, 1))
    assert not verify_certificate(P2, bad)


def test_hand_built_diag_certificate(P2):
    # diag(7, 1) in the basis {l1, l3}, written in the standard basis
    B = linalg.Matrix.from_columns([likelihood(P2, 0), likelihood(P2, 2)])
    D = linalg.Matrix.from_rows([[7, 0], [0, 1]])
    lam = linalg.matmul(linalg.matmul(B, D), linalg.inverse(B))
    assert verify_certificate(P2, Certificate(lam, P2.statistic([7, 7, 1, 0]), (0, 1)))


def test_float_mode_agrees(P1, P2):
    for m, good, bad in ((P1, [2, 2, 2, 5], [0, 1, 0, 0]), (P2, [7, 7, 1, 0], [1, 2, 3, 4])):
        fm = to_float(m)
        good_f, bad_f = [float(v) for v in good], [float(v) for v in bad]
        assert is_umvue(fm, good_f) and is_umvue_oracle(fm, good_f)
        assert not is_umvue(fm, bad_f) and not is_umvue_oracle(fm, bad_f)
        assert sigma0(fm).blocks == sigma0(m).blocks
        assert verify_certificate(fm, certificate(fm, good_f))


def test_random_statistics_agree(P1, P2):
    rng = random.Random(3)
    for m in (P1, P2):
        for _ in range(50):
            T = [F(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(4)]
            assert bool(is_umvue(m, T)) == bool(is_umvue_oracle(m, T))
