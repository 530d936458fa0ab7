import numpy as np
import pytest

from gl2bialg.quantumalg import residual
from gl2bialg.spinchain import (MAX_SITES, ChainHamiltonian, ChainSpec, DimensionCapExceeded, chain_hamiltonian,
                                invariance_check, iteration_order_residual, spectral_distance, spectrum,
                                two_site_block, two_site_block_closed)


@pytest.mark.parametrize("b,b_p", [(0.0, 0.0), (0.5, 0.0), (-0.3, 1.2), (1.5, -0.7), (0.0, 0.9)])
def test_block_matches_closed_form(b, b_p):
    assert residual(two_site_block(b, b_p), two_site_block_closed(b, b_p)) < 1e-12


def test_undeformed_block_spectrum():
    ev = spectrum(two_site_block(0.0, 0.0)).eigenvalues
    assert np.allclose(ev, [0, 8, 8, 8])


def test_block_is_heisenberg_plus_constant():
    # C on C^2 (x) C^2 at zero deformation: 6 + 2 (sigma.sigma)
    sx = np.array([[0, 1], [1, 0]]); sy = np.array([[0, -1j], [1j, 0]]); sz = np.diag([1, -1])
    heis = sum(np.kron(s, s) for s in (sx, sy, sz))
    assert residual(two_site_block(0.0, 0.0), 6 * np.eye(4) + 2 * heis) < 1e-12


def test_coproduct_iteration_order_irrelevant():
    assert iteration_order_residual(0.8, -0.5, copies=4) < 1e-12


def test_open_chain_invariance():
    for bonds in (1, 2, 3):
        H = chain_hamiltonian(ChainSpec(bonds, 0.7, -0.4))
        assert max(invariance_check(H).values()) < 1e-10


def test_periodic_chain_breaks_invariance_only_when_twisted():
    assert max(invariance_check(chain_hamiltonian(ChainSpec(3, 1.0, 0.0, "periodic"))).values()) > 1e-3
    assert max(invariance_check(chain_hamiltonian(ChainSpec(3, 0.0, 0.0, "periodic"))).values()) < 1e-12


def test_hermiticity():
    assert chain_hamiltonian(ChainSpec(2, 0.0, 0.0)).is_hermitian
    assert not chain_hamiltonian(ChainSpec(2, 0.5, 0.0)).is_hermitian


def test_open_chain_isospectral_to_heisenberg():
    ref = spectrum(chain_hamiltonian(ChainSpec(3, 0.0, 0.0)))
    for b, b_p in ((0.6, 0.0), (0.6, 0.8)):
        s = spectrum(chain_hamiltonian(ChainSpec(3, b, b_p)))
        assert s.is_real
        assert spectral_distance(s, ref) < 1e-6


def test_two_bond_spectrum():
    ev = spectrum(chain_hamiltonian(ChainSpec(2))).eigenvalues
    assert np.allclose(ev, [4, 4, 12, 12, 16, 16, 16, 16])


def test_json_round_trip():
    H = chain_hamiltonian(ChainSpec(2, 0.3, 0.1, "periodic"))
    back = ChainHamiltonian.from_json(H.to_json())
    assert back.spec == H.spec and residual(back.matrix, H.matrix) == 0


def test_spec_validation():
    with pytest.raises(DimensionCapExceeded):
        ChainSpec(MAX_SITES)
    with pytest.raises(ValueError):
        ChainSpec(0)
    with pytest.raises(ValueError):
        ChainSpec(2, boundary="twisted")
    H = chain_hamiltonian(ChainSpec(2, 0.3, 0.0))
    with pytest.raises(ValueError):
        invariance_check(H, b=0.1)
