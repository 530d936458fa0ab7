import itertools
import random

import numpy as np
import pytest
from scipy.linalg import expm

from gl2bialg.bialgebra import ClassicalRMatrix, ParamPoint, jacobi_constraint_polys, sample_point
from gl2bialg.liealg import GL2, bracket
from gl2bialg.poissonlie import (ENTRIES, NotEmbeddable, constraint_combination, entry_brackets,
                                 invariant_fields, kupershmidt_map, poisson_bracket, poisson_jacobi,
                                 reference_coordinate_brackets, reference_entry_brackets, sklyanin_table,
                                 table_difference)
from gl2bialg.symbolics import TH_M, TH_P, V, W


@pytest.fixture(scope="module")
def generic_table():
    return sklyanin_table(ClassicalRMatrix.from_params())


def test_left_and_right_fields_commute():
    left, right = invariant_fields()
    for x, y in itertools.product(GL2.labels, repeat=2):
        assert left[x].commutator(right[y]).is_zero()


def test_invariant_fields_represent_gl2():
    # left fields close on the algebra, right fields on its opposite
    left, right = invariant_fields()
    for x, y in itertools.combinations(GL2.labels, 2):
        br = bracket(x, y)
        for fields, sign in ((left, 1), (right, -1)):
            expect = [0, 0, 0, 0]
            got = fields[x].commutator(fields[y])
            for (k,), c in br.items():
                for i, comp in enumerate(fields[GL2.labels[k]].components):
                    expect[i] = comp * (c.constant_value() * sign) + expect[i]
            assert all((g - e).is_zero() for g, e in zip(got.components, expect))


def test_coordinate_table_matches_reference(generic_table):
    assert table_difference(generic_table, reference_coordinate_brackets()) == {}


def test_entry_table_matches_reference_identically(generic_table):
    assert table_difference(entry_brackets(generic_table), reference_entry_brackets()) == {}


def test_jacobi_obstructions_lie_in_constraint_ideal_span(generic_table):
    for p in poisson_jacobi(generic_table):
        assert constraint_combination(p) is not None


def test_bracket_antisymmetry_and_leibniz(generic_table):
    f, g, h = V * TH_P, W + TH_M * TH_M, V * W * TH_P
    assert poisson_bracket(generic_table, f, g) == -poisson_bracket(generic_table, g, f)
    assert (poisson_bracket(generic_table, f, g * h)
            == poisson_bracket(generic_table, f, g) * h + g * poisson_bracket(generic_table, f, h))


def test_jacobi_holds_on_family_points():
    rng = random.Random(3)
    for key in ("I+-std", "II-nonstd"):
        pt = sample_point(rng, key)
        t = sklyanin_table(ClassicalRMatrix.from_params(pt.as_dict()))
        assert all(p.is_zero() for p in poisson_jacobi(t))


def test_jacobi_fails_off_the_constraints():
    pt = ParamPoint.from_assignments(["a+=1", "b=1"])
    t = sklyanin_table(ClassicalRMatrix.from_params(pt.as_dict()))
    assert any(not p.is_zero() for p in poisson_jacobi(t))


def test_entries_are_the_matrix_elements():
    pt = {"theta3": 0.2, "theta_p": 0.5, "theta_m": -0.3, "theta": 0.1}
    J3 = np.diag([1.0, -1.0]); Jp = np.array([[0, 1.0], [0, 0]]); Jm = Jp.T
    T = expm(pt["theta_m"] * Jm) @ expm(pt["theta"] * np.eye(2)) @ expm(pt["theta3"] * J3) @ expm(pt["theta_p"] * Jp)
    got = [[ENTRIES["A"].evaluate(pt), ENTRIES["B"].evaluate(pt)], [ENTRIES["C"].evaluate(pt), ENTRIES["D"].evaluate(pt)]]
    assert np.allclose(T, got)


def test_kupershmidt():
    m = kupershmidt_map(ParamPoint.from_assignments(["a-=1", "b-=1", "a=2", "b=3", "a+=1", "b+=-1"]))
    assert m == {"r": 5, "s": 0, "u": -2, "v": 1, "w": 2}
    with pytest.raises(NotEmbeddable):
        kupershmidt_map(ParamPoint.from_assignments(["a-=1"]))


def test_constraint_combination_exact():
    g1, g2, g3 = jacobi_constraint_polys()
    assert constraint_combination(g1 * 2 - g3) == [2, 0, -1]
