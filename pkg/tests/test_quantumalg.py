import math

import numpy as np
import pytest

from gl2bialg.quantumalg import (CoproductRule, Exp, MatrixBackend, MethodInapplicable, Phi1, build_R,
                                 casimir_check, coassociativity_check, coproduct_eval, deformed_rep_Ib,
                                 evaluate, flip_operator, fundamental_rep, gens, homomorphism_check,
                                 intertwine_check, lm_coproduct, matrix_from_json, matrix_to_json,
                                 primitive_terms, qybe_check, quantization_Ia, quantization_Ib,
                                 quantization_II, quantization_LM, quantization_xxz, relations_residual,
                                 residual, triangularity_check, undeformed_relations, undeformed_rule)

LABELS = ("J3", "J+", "J-", "I")


def test_phi1_matches_series():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(3, 3)) * 0.5
    got = evaluate(Phi1(gens("X")[0]), {"X": X}, MatrixBackend(3))
    series = sum(np.linalg.matrix_power(X, k) / math.factorial(k + 1) for k in range(30))
    assert residual(got, series) < 1e-12
    assert residual(evaluate(Phi1(gens("X")[0]), {"X": np.zeros((2, 2))}, MatrixBackend(2)), np.eye(2)) == 0


def test_exp_nilpotent_argument():
    N = np.array([[0, 1], [0, 0]], dtype=complex)
    got = evaluate(Exp(gens("X")[0]), {"X": N}, MatrixBackend(2))
    assert residual(got, np.eye(2) + N) < 1e-15


def test_flip_operator_swaps_factors():
    x, y = np.array([1.0, 2.0, 3.0]), np.array([0.5, -1.0, 4.0])
    assert np.allclose(flip_operator(3) @ np.kron(x, y), np.kron(y, x))


def test_json_round_trip():
    m = np.array([[1 + 2j, 0], [3, -0.5j]])
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)


def test_fundamental_rep_is_undeformed_gl2():
    rep = fundamental_rep()
    q = quantization_II(0.0, 0.0)
    assert max(relations_residual(q, rep.matrices, 2).values()) < 1e-15
    # the zero-parameter coproduct is the primitive one
    prim = coproduct_eval(undeformed_rule(), rep)
    for l, m in coproduct_eval(q.rule, rep).items():
        assert residual(m, prim[l]) < 1e-15


@pytest.mark.parametrize("q", [quantization_Ia(1.0, 0.7), quantization_Ib(1.0, 0.5), quantization_xxz(0.5, 0.3),
                               quantization_II(0.5, 0.3)], ids=lambda q: q.name)
def test_homomorphism_and_coassociativity(q):
    assert max(homomorphism_check(q).values()) < 1e-10
    assert coassociativity_check(q.rule, "primitive-scalar") < 1e-10


def test_Ib_rep_is_a_representation_for_several_central_values():
    q = quantization_Ib(0.8, -0.6)
    for lam in (1.0, -2.0, 0.3):
        rep = deformed_rep_Ib(0.8, -0.6, lam)
        assert max(relations_residual(q, rep.matrices, 2).values()) < 1e-12


def test_non_coassociative_rule_detected():
    J3, Jp, Jm, I = gens(*LABELS)
    rule = CoproductRule("bad", LABELS, {"J3": primitive_terms(J3), "I": primitive_terms(I),
                                         "J-": primitive_terms(Jm),
                                         "J+": primitive_terms(Jp) + ((1.0, J3, Jp),)}, ("J3", "I"))
    assert coassociativity_check(rule, "rep3", fundamental_rep()) > 0.5
    assert coassociativity_check(rule, "primitive-scalar") > 0.1


def test_primitive_scalar_refuses_functions_left_of_generators():
    J3, Jp, Jm, I = gens(*LABELS)
    rule = CoproductRule("odd", LABELS, {"J3": primitive_terms(J3), "I": primitive_terms(I),
                                         "J-": primitive_terms(Jm), "J+": ((1.0, Exp(J3) * Jm, Jp),)},
                         ("J3", "I"))
    with pytest.raises(MethodInapplicable):
        coassociativity_check(rule, "primitive-scalar")


def test_lm_coproduct_matches_closed_form_at_zero_b_minus():
    rep = fundamental_rep()
    closed = coproduct_eval(quantization_II(0.7, -0.4).rule, rep)
    for l, m in lm_coproduct(0.7, 0.0, -0.4, rep).items():
        assert residual(m, closed[l]) < 1e-12


def test_lm_coassociative_with_b_minus():
    q = quantization_LM(0.7, 0.3, -0.4)
    assert q.relations is None
    assert coassociativity_check(q.rule, "rep3", fundamental_rep()) < 1e-10


def test_lm_matches_the_exponential_of_the_bialgebra_matrix_to_first_order():
    # small parameters: Delta(X) - Delta_0(X) is the cocommutator-sized correction
    rep = fundamental_rep()
    t = 1e-6
    d = lm_coproduct(t, 0.0, 0.0, rep)
    prim = coproduct_eval(undeformed_rule(), rep)
    diff = (d["J3"] - prim["J3"]) / t
    assert residual(diff, np.kron(rep["J+"], rep["I"])) < 1e-5


def test_R_matrices():
    Ra = build_R("Ia", a_p=1.0, a=math.log(2))
    assert qybe_check(Ra) < 1e-12
    kind, norm = triangularity_check(Ra)
    assert kind == "quasitriangular-proper" and norm > 1e-3
    R2 = build_R("II-matrix", b_p=0.4, b=-0.9)
    assert triangularity_check(R2)[0] == "triangular"
    assert residual(R2.matrix, build_R("II-exp", b_p=0.4, b=-0.9).matrix) < 1e-12
    with pytest.raises(ValueError):
        build_R("Ia", a_p=1.0, a=0.0)


def test_R_reduces_to_identity_when_undeformed():
    assert residual(build_R("II-matrix", b_p=0.0, b=0.0).matrix, np.eye(4)) == 0


def test_intertwining():
    q = quantization_II(0.4, -0.9)
    R = build_R("II-matrix", b_p=0.4, b=-0.9)
    assert max(intertwine_check(R, coproduct_eval(q.rule, fundamental_rep())).values()) < 1e-12
    # the unflipped coproduct is not intertwined when the deformation is on
    P = flip_operator(2)
    delta = coproduct_eval(q.rule, fundamental_rep())
    flipped = {l: P @ m @ P for l, m in delta.items()}
    assert max(intertwine_check(R, flipped).values()) > 1e-3


def test_casimirs():
    for q in (quantization_Ia(1.0, 0.7), quantization_Ib(0.8, -0.6), quantization_xxz(0.5, 0.3),
              quantization_II(0.5, 0.3)):
        c = casimir_check(q)
        assert c.centrality < 1e-12 and c.scalar_residual < 1e-12


def test_xxz_casimir_limit():
    # at small a the deformed Casimir tends to the undeformed value 3 (J3^2 + 2{J+,J-} on C^2)
    c = casimir_check(quantization_xxz(1e-5, 0.0))
    assert abs(c.value - 3) < 1e-8


def test_undeformed_relations_fail_in_a_wrong_rep():
    q = quantization_II(0.0, 0.0)
    rep = {"J3": np.eye(2), "J+": np.array([[0, 1.0], [0, 0]]), "J-": np.array([[0, 0], [1.0, 0]]), "I": np.eye(2)}
    assert max(relations_residual(q, rep, 2).values()) > 0.5
    assert len(undeformed_relations()) == 6
