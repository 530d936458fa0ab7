import itertools
from fractions import Fraction

import pytest

from gl2bialg.liealg import (ALGEBRAS, GL2, H4, ad_action, bracket, bracket_elements,
                             eta_invariance_check, jacobi_violations, tensor_from_json, wedge, wedge_labels)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_jacobi_holds(name):
    assert jacobi_violations(ALGEBRAS[name]) == []


def test_gl2_brackets():
    J3, Jp, Jm, I = (GL2.basis(l) for l in GL2.labels)
    assert bracket("J3", "J+") == Jp * 2
    assert bracket("J3", "J-") == Jm * -2
    assert bracket("J+", "J-") == J3
    for l in GL2.labels:
        assert bracket("I", l).is_zero()


def test_h4_brackets():
    N, Ap, Am, M = (H4.basis(l) for l in H4.labels)
    assert bracket("N", "A+", H4) == Ap
    assert bracket("N", "A-", H4) == -Am
    assert bracket("A-", "A+", H4) == M
    assert bracket("M", "N", H4).is_zero()


def test_tensor_json_round_trip():
    t = wedge_labels(GL2, "J3", "J+") * Fraction(3, 2) - wedge_labels(GL2, "J-", "I")
    assert tensor_from_json(t.to_json(), GL2) == t


def test_wedge_antisymmetry():
    x, y = GL2.basis("J+"), GL2.basis("J3") + GL2.basis("I") * 2
    assert wedge(x, y) == -wedge(y, x)
    assert wedge(x, x).is_zero()
    assert wedge(x, y).is_antisymmetric()


def test_ad_action_is_a_derivation_of_tensor_products():
    xs = [GL2.basis(l) for l in GL2.labels]
    for z, x, y in itertools.product(xs, repeat=3):
        lhs = ad_action(z, x.otimes(y))
        rhs = bracket_elements(z, x).otimes(y) + x.otimes(bracket_elements(z, y))
        assert lhs == rhs


def test_invariant_form():
    assert eta_invariance_check(1, 0)
    assert eta_invariance_check(Fraction(2, 3), 5)
