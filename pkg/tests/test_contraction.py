import itertools

import pytest

from gl2bialg.bialgebra import ClassicalRMatrix, Cocommutator, generic_cocommutator
from gl2bialg.contraction import (GL2_IN_H4, H4_IN_GL2, REFERENCE_EXPONENTS, SCHEMES, ContractedBialgebra,
                                  ContractionError, OscillatorGap, contract, divergent_terms, minimal_exponents,
                                  oscillator_normalize, table2, tensor_limit, transform_delta, transform_r)
from gl2bialg.liealg import GL2, H4, TensorElement, bracket_elements


def test_basis_maps_are_inverse():
    for i in range(GL2.dim):
        back = GL2_IN_H4[i].map_basis({j: H4_IN_GL2[l] for j, l in enumerate(H4.labels)}, GL2)
        assert back == GL2.basis(GL2.labels[i])


def test_h4_relations_emerge_in_the_limit():
    # brackets of the eps-rescaled gl(2) generators differ from h4 by positive eps powers only
    gl2_in_h4 = {i: GL2_IN_H4[i] for i in range(GL2.dim)}
    for (i, x), (j, y) in itertools.combinations(enumerate(H4.labels), 2):
        br = bracket_elements(H4_IN_GL2[x], H4_IN_GL2[y]).map_basis(gl2_in_h4, H4)
        expect = TensorElement.zero(H4, 1)
        for k, c in H4.bracket_indices(i, j).items():
            expect = expect + H4.basis(H4.labels[k]) * c
        for _, c in (br - expect).items():
            assert all(dict(mono).get("eps", 0) > 0 for mono, _ in c.items())


@pytest.mark.parametrize("family", sorted(REFERENCE_EXPONENTS))
@pytest.mark.parametrize("kind", ["r", "delta"])
def test_minimal_exponents(family, kind):
    assert minimal_exponents(kind, family) == REFERENCE_EXPONENTS[family]


def test_extra_beta_direction_needs_cubic_power():
    got = minimal_exponents("r", SCHEMES["I+-std-beta"])
    assert got == {"n_p": 1, "n_bp": 3, "n_m": 3, "n": 2}
    assert minimal_exponents("delta", SCHEMES["I+-std-beta"]) == got


@pytest.mark.parametrize("family", sorted(REFERENCE_EXPONENTS))
def test_contract_reproduces_table(family):
    b = contract(family)
    r, delta = table2(family)
    assert b.r == r and b.delta == delta
    assert b.checks() == {"cocycle": True, "coboundary": True}
    assert b.is_coboundary


def test_alias_and_unknown_family():
    assert contract("II-nonstandard").exponents == {"n": 2, "n_p": 3, "n_m": 3}
    with pytest.raises(KeyError):
        contract("III")


def test_smaller_exponents_diverge():
    scheme = SCHEMES["II-nonstd"]
    t = transform_r(ClassicalRMatrix.from_params(), scheme, {"n": 1, "n_p": 3, "n_m": 3})
    assert divergent_terms(t)
    t = transform_r(ClassicalRMatrix.from_params(), scheme, {"n": 2, "n_p": 3, "n_m": 3})
    assert not divergent_terms(t)


def test_remove_beta_p():
    scheme = SCHEMES["I+-std-beta"]
    exps = minimal_exponents("r", scheme)
    r = tensor_limit(transform_r(ClassicalRMatrix.from_params(), scheme, exps))
    d = transform_delta(generic_cocommutator(), scheme, exps)
    b = ContractedBialgebra("I+-std", r, Cocommutator(H4, tuple(tensor_limit(x) for x in d.images)), exps)
    assert "beta_p" in b.r.to_text()
    n = oscillator_normalize(b, "remove_beta_p")
    assert n.r == table2("I+-std")[0] and n.delta == table2("I+-std")[1]


def test_standard_II_normalization_and_gap():
    b = contract("II-std")
    n = oscillator_normalize(b, "standard_II", {"vartheta": 2, "xi": 1})
    assert n.checks() == {"cocycle": True, "coboundary": True}
    assert "beta_p" in n.r.to_text() and "beta_m" in n.r.to_text()
    with pytest.raises(OscillatorGap):
        oscillator_normalize(b, "standard_II", {"vartheta": 1, "xi": 1})
    with pytest.raises(OscillatorGap):
        oscillator_normalize(b, "standard_II", {"vartheta": 1, "xi": -1})
    with pytest.raises(ContractionError):
        oscillator_normalize(b, "standard_II")


def test_scan_box_without_solution():
    with pytest.raises(ContractionError):
        minimal_exponents("r", "II-nonstd", upper=2)
