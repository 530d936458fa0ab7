import random
from fractions import Fraction

import pytest

from gl2bialg.bialgebra import (FAMILY_KEYS, ClassicalRMatrix, Cocommutator, NotABialgebra, ParamPoint,
                                apply_automorphism, c_to_params, classify, coboundary_delta, cocycle_check,
                                cojacobi_constraints, generic_cocommutator, jacobi_constraint_polys,
                                params_to_c, sample_point, same_up_to_scalar, schouten, schouten_closed_form)
from gl2bialg.liealg import GL2, wedge_labels


def test_generic_cocommutator_is_a_cocycle():
    assert cocycle_check(generic_cocommutator())


def test_non_cocycle_detected():
    bad = Cocommutator.from_map(GL2, {"I": wedge_labels(GL2, "J+", "J-")})
    assert not cocycle_check(bad)


def test_constraints_recovered():
    assert same_up_to_scalar(cojacobi_constraints(), jacobi_constraint_polys())


def test_generic_delta_is_coboundary_of_generic_r():
    r = ClassicalRMatrix.from_params()
    assert coboundary_delta(r) == generic_cocommutator()


def test_schouten_closed_form_symbolic():
    r = ClassicalRMatrix.from_c()
    assert schouten(r) == schouten_closed_form()


def test_param_c_round_trip():
    p = {"a_p": 1, "a_m": 2, "b_p": Fraction(1, 3), "b_m": -1, "a": 5, "b": 7}
    back = c_to_params(params_to_c(p))
    assert all(back[k].constant_value() == Fraction(v) for k, v in p.items())


@pytest.mark.parametrize("assign,family,kind", [
    (["a+=1", "a-=1", "b+=2", "b-=-2", "a=1", "b=2"], "I+", "standard"),
    (["a+=1", "a-=-1", "a=1"], "I+", "non-standard"),
    (["a-=2", "a=1"], "I-", "standard"),
    (["a=1", "b=3"], "II", "standard"),
    (["b+=1", "b-=2", "b=1/2"], "II", "non-standard"),
])
def test_classify(assign, family, kind):
    tag = classify(ParamPoint.from_assignments(assign))
    assert (tag.family, tag.type) == (family, kind)


def test_classify_rejects_non_bialgebra():
    with pytest.raises(NotABialgebra) as e:
        classify(ParamPoint.from_assignments(["a+=1", "b=1"]))
    assert "a_p*b - b_p*a" in e.value.violated


def test_bad_assignments():
    with pytest.raises(ValueError):
        ParamPoint.from_assignments(["c=1"])
    with pytest.raises(ValueError):
        ParamPoint.from_assignments(["a+"])


@pytest.mark.parametrize("key", FAMILY_KEYS)
def test_family_samples_are_bialgebras(key):
    rng = random.Random(7)
    for _ in range(5):
        pt = sample_point(rng, key)
        tag = classify(pt)
        assert tag.key == key


def test_automorphism_maps_I_minus_to_I_plus():
    pt = ParamPoint.from_assignments(["a-=2", "a=1", "b-=3", "b=-3/2"])
    img = apply_automorphism(pt)
    assert classify(img).family == "I+"
    r = ClassicalRMatrix.from_params(pt.as_dict())
    # delta is natural under the automorphism
    assert apply_automorphism(coboundary_delta(r)) == coboundary_delta(apply_automorphism(r))
