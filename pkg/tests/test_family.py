"""Recursion-step derivation, identity verification, and excision checks.

Expected child numerators are frozen from hand expansion of the product
forms; identity mismatch positions are cross-checked against a dense-array
oracle that never touches the sparse polynomial arithmetic.
"""

from fractions import Fraction

import pytest

from roughpi.family import (
    FamilyBreak,
    FamilyStep,
    IdentityCheck,
    child_numerator_stats,
    derive_child,
    excision_check,
    step_to_json,
    verify_identity,
)
from roughpi.poly import Integrand, IntPolynomial, NotRoughSupported, expand_series
from roughpi.rough import rough_prefix

F3 = Integrand(IntPolynomial({0: 1}), 1, 2)
F5 = Integrand(IntPolynomial({0: 1, 4: 1}), 1, 6)
F7 = Integrand(
    IntPolynomial({0: 1, 6: -1, 10: -1, 12: 1, 16: 1, 18: -1, 22: -1, 28: 1}), 1, 30
)
G5 = Integrand(IntPolynomial({0: 1, 4: -1}), -1, 6)
G7_NUM = IntPolynomial({0: 1, 6: 1, 10: -1, 12: 1, 16: -1, 18: 1, 22: -1, 28: -1})
H5 = Integrand(IntPolynomial({0: 1, 4: -1}), 1, 6)
H7_NUM = IntPolynomial({0: 1, 6: -1, 10: 1, 12: 1, 16: -1, 18: -1, 22: 1, 28: -1})
JJ1 = Integrand(IntPolynomial({0: 1, 2: 1}), 1, 4)
JJ3_NUM = IntPolynomial({0: 1, 4: -1, 6: -1, 10: 1})


# dense-array oracle for the cross-multiplied identity


def dense(poly: IntPolynomial, size: int) -> list[int]:
    out = [0] * size
    for e, c in poly.terms():
        out[e] += c
    return out


def dense_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def oracle_first_mismatch(step: FamilyStep) -> int | None:
    p, kp = step.parent.period, step.child.period
    d = step.parent.denom_sign
    size = kp + step.parent.numerator.degree + 1
    parent_num = dense(step.parent.numerator, size)
    shifted = dense(
        step.parent.numerator.compose_power(step.k).shifted(step.k - 1), size
    )
    parent_den = dense(IntPolynomial({0: 1, p: d}), size)
    child_den = dense(IntPolynomial({0: 1, kp: d}), size)
    lhs = dense_mul(dense(step.child.numerator, size), parent_den)
    rhs = [
        x + step.sign * y
        for x, y in zip(dense_mul(parent_num, child_den), dense_mul(shifted, parent_den))
    ]
    for e, (x, y) in enumerate(zip(lhs, rhs)):
        if x != y:
            return e
    return None


# derivation


def test_f3_to_f5():
    step = derive_child(F3, 3)
    assert step.sign == 1
    assert step.scale == Fraction(4, 3)
    assert step.child == F5
    assert verify_identity(step)


def test_f5_to_f7():
    step = derive_child(F5, 5)
    assert step.sign == -1
    assert step.scale == Fraction(4, 5)
    assert step.child == F7
    assert verify_identity(step)


def test_f7_to_f11():
    step = derive_child(F7, 7)
    assert step.sign == 1
    assert step.scale == Fraction(8, 7)
    assert child_numerator_stats(step) == (208, 48, 1)
    numerator = step.child.numerator
    assert numerator.is_palindromic(208)
    assert numerator.support == frozenset(n - 1 for n in rough_prefix(11, 210))
    assert verify_identity(step)


def test_g5_to_g7():
    step = derive_child(G5, 5)
    assert step.sign == 1
    assert step.scale == Fraction(6, 5)
    assert step.child.numerator == G7_NUM
    assert step.child.denom_sign == -1
    assert verify_identity(step)


def test_h5_to_h7():
    step = derive_child(H5, 5)
    assert step.sign == 1
    assert step.child.numerator == H7_NUM
    assert step.child.denom_sign == 1
    assert verify_identity(step)


def test_jj1_to_jj3():
    step = derive_child(JJ1, 3)
    assert step.sign == -1
    assert step.scale == Fraction(2, 3)
    assert step.child == Integrand(JJ3_NUM, 1, 12)
    assert verify_identity(step)


def test_chain_scale_product():
    total = Fraction(1)
    g = F3
    for k in (3, 5, 7):
        step = derive_child(g, k)
        total *= step.scale
        g = step.child
    assert total == Fraction(128, 105)


def test_break_no_rough_parent_structure():
    # series over 1 mod 4 positions is 3-rough but no sign lands on 5-rough
    with pytest.raises(FamilyBreak):
        derive_child(Integrand(IntPolynomial({0: 1}), 1, 4), 3)


def test_break_wrong_index_for_h5():
    # k=3 precondition holds (all positions odd) yet both candidates spill
    # onto positions divisible by 3
    with pytest.raises(FamilyBreak):
        derive_child(H5, 3)


def test_derive_rejects_bad_index():
    with pytest.raises(ValueError):
        derive_child(F3, 2)
    with pytest.raises(ValueError):
        derive_child(F3, 4)
    with pytest.raises(ValueError):
        derive_child(F3, 5)  # period 2 is not a multiple of primorial(5)


def test_derive_requires_rough_support():
    bad = Integrand(IntPolynomial({0: 1, 2: 1}), 1, 6)
    with pytest.raises(NotRoughSupported):
        derive_child(bad, 5)


# identity verification


def test_identity_all_derived_steps():
    for parent, k in ((F3, 3), (F5, 5), (F7, 7), (G5, 5), (H5, 5), (JJ1, 3)):
        step = derive_child(parent, k)
        check = verify_identity(step)
        assert check
        assert check.first_mismatch is None
        assert oracle_first_mismatch(step) is None


def test_identity_flipped_sign_reports_first_mismatch():
    step = derive_child(F5, 5)
    flipped = FamilyStep(
        parent=step.parent,
        k=step.k,
        sign=-step.sign,
        child=step.child,
        scale=step.scale,
    )
    check = verify_identity(flipped)
    assert not check
    assert check.first_mismatch == oracle_first_mismatch(flipped)
    assert check.first_mismatch == 4


def test_identity_corrupted_child():
    step = derive_child(F3, 3)
    corrupted = FamilyStep(
        parent=step.parent,
        k=step.k,
        sign=step.sign,
        child=Integrand(IntPolynomial({0: 1, 4: -1}), 1, 6),
        scale=step.scale,
    )
    check = verify_identity(corrupted)
    assert not check
    assert check.first_mismatch == oracle_first_mismatch(corrupted)


def test_identity_rejects_malformed_steps():
    step = derive_child(F3, 3)
    with pytest.raises(ValueError):
        verify_identity(
            FamilyStep(parent=F3, k=1, sign=1, child=F3, scale=Fraction(2))
        )
    with pytest.raises(ValueError):
        verify_identity(
            FamilyStep(parent=F3, k=3, sign=2, child=step.child, scale=step.scale)
        )
    with pytest.raises(ValueError):
        verify_identity(
            FamilyStep(parent=F3, k=3, sign=1, child=F7, scale=step.scale)
        )
    with pytest.raises(ValueError):
        verify_identity(
            FamilyStep(parent=F3, k=3, sign=1, child=G5, scale=step.scale)
        )


def test_identity_check_truthiness():
    assert bool(IdentityCheck(True)) is True
    assert bool(IdentityCheck(False, first_mismatch=6)) is False


# excision


def test_excision_adjacent_pairs():
    assert excision_check(F3, F5, 25)
    assert excision_check(F5, F7, 60)
    assert excision_check(G5, derive_child(G5, 5).child, 60)
    assert excision_check(H5, derive_child(H5, 5).child, 60)
    assert excision_check(F7, derive_child(F7, 7).child, 210)


def test_excision_rejects_non_adjacent():
    g7 = derive_child(G5, 5).child
    assert not excision_check(F3, g7, 30)  # period ratio 15 is not prime
    assert not excision_check(F5, g7, 30)  # prime ratio, different family
    assert not excision_check(F3, Integrand(JJ3_NUM, 1, 12), 24)


def test_excision_detects_corruption():
    tweaked = IntPolynomial(dict(F5.numerator.terms()) | {4: -1})
    assert not excision_check(F3, Integrand(tweaked, 1, 6), 25)


def test_excision_matches_series_deletion():
    prefix = expand_series(F3, 60).coeffs
    child_prefix = expand_series(F5, 60).coeffs
    for pos in range(1, 61):
        expected = 0 if pos % 3 == 0 else prefix[pos - 1]
        assert child_prefix[pos - 1] == expected


# serialization


def test_step_to_json():
    step = derive_child(F3, 3)
    payload = step_to_json(step, parent_id="S3-f")
    assert payload == {
        "parent_id": "S3-f",
        "k": 3,
        "sign": 1,
        "scale": [4, 3],
        "child_numerator": [[0, 1], [4, 1]],
        "denom_sign": 1,
        "period": 6,
    }
    assert step_to_json(step)["parent_id"] is None
