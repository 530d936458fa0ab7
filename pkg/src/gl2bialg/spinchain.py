"""Spin chains from the two-site coproduct of the gl(2) Casimir.

Bond Hamiltonians are (D (x) D)(Delta(C)) for the family II non-standard
quantization at b- = 0 in the fundamental representation.  Chains of N bonds
live on N+1 sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .quantumalg import (E12, E21, ID2, SIGMA3, MatrixBackend, _phi1_scalar, evaluate, fundamental_rep,
                         iterated_coproduct, matrix_from_json, matrix_to_json, quantization_II, residual)

MAX_SITES = 12


class DimensionCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    bonds: int
    b: float = 0.0
    b_p: float = 0.0
    boundary: str = "open"

    def __post_init__(self):
        if self.bonds < 1:
            raise ValueError("need at least one bond")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be open or periodic, not {self.boundary!r}")
        if self.sites > MAX_SITES:
            raise DimensionCapExceeded(f"{self.sites} sites exceed the cap of {MAX_SITES}")

    @property
    def sites(self) -> int:
        return self.bonds + 1

    @property
    def dim(self) -> int:
        return 2 ** self.sites

    @property
    def deformation(self) -> str:
        return "twisted-XXX" if self.b_p == 0 else "twisted-XXX-deformed"

    def to_json(self) -> dict:
        return {"bonds": self.bonds, "b": self.b, "b_p": self.b_p, "boundary": self.boundary,
                "deformation": self.deformation}


@dataclass(frozen=True)
class ChainHamiltonian:
    spec: ChainSpec
    matrix: sp.csr_matrix

    @property
    def is_hermitian(self) -> bool:
        return residual(self.matrix, self.matrix.conj().T) < 1e-12

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "hermitian": self.is_hermitian, "matrix": matrix_to_json(self.matrix)}

    @classmethod
    def from_json(cls, data: dict) -> "ChainHamiltonian":
        s = data["spec"]
        spec = ChainSpec(s["bonds"], s["b"], s["b_p"], s["boundary"])
        return cls(spec, sp.csr_matrix(matrix_from_json(data["matrix"])))


def two_site_block(b: float, b_p: float) -> np.ndarray:
    """(D (x) D)(Delta(C)) with C = J3^2 + 2(J+J- + J-J+)."""
    q = quantization_II(b_p, b)
    rep = fundamental_rep()
    delta = iterated_coproduct(q.rule, rep, 2)
    return evaluate(q.casimir, delta, MatrixBackend(4))


def two_site_block_closed(b: float, b_p: float) -> np.ndarray:
    """Closed-form bond operator; b-dependent factors continued analytically to b = 0."""
    kron = np.kron
    up = float(_phi1_scalar(b).real)            # (e^b - 1)/b
    dn = -float(_phi1_scalar(-b).real)          # (e^-b - 1)/b
    c2 = -0.5 * (math.sinh(b / 2) / (b / 2)) ** 2 if b else -0.5   # (1 - cosh b)/b^2
    return (6 * np.eye(4) + 2 * (kron(SIGMA3, SIGMA3) + 2 * math.exp(-b) * kron(E21, E12)
                                 + 2 * math.exp(b) * kron(E12, E21))
            + 2 * b_p * (up * kron(E12, SIGMA3) + dn * kron(SIGMA3, E12))
            + 2 * b_p ** 2 * c2 * kron(E12, E12))


def _embed(op: np.ndarray, site: int, sites: int) -> sp.csr_matrix:
    """Two-site operator acting on (site, site+1), 0-based."""
    left = sp.identity(2 ** site, format="csr")
    right = sp.identity(2 ** (sites - site - 2), format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def _embed_wrap(op: np.ndarray, sites: int) -> sp.csr_matrix:
    """Bond (last site, first site): first tensor factor on the last site."""
    out = sp.csr_matrix((2 ** sites, 2 ** sites), dtype=complex)
    mid = sp.identity(2 ** (sites - 2), format="csr")
    units = [np.outer(np.eye(2)[i], np.eye(2)[j]) for i in range(2) for j in range(2)]
    for ia, A in enumerate(units):
        for ib, B in enumerate(units):
            c = np.sum(op * np.kron(A, B))   # coefficient of A (x) B
            if c != 0:
                out = out + c * sp.kron(sp.kron(sp.csr_matrix(B), mid), sp.csr_matrix(A), format="csr")
    return out


def chain_hamiltonian(spec: ChainSpec) -> ChainHamiltonian:
    block = two_site_block(spec.b, spec.b_p)
    H = sp.csr_matrix((spec.dim, spec.dim), dtype=complex)
    for i in range(spec.bonds):
        H = H + _embed(block, i, spec.sites)
    if spec.boundary == "periodic":
        H = H + _embed_wrap(block, spec.sites)
    return ChainHamiltonian(spec, H.tocsr())


def invariance_check(H: ChainHamiltonian, b: float | None = None, b_p: float | None = None) -> Dict[str, float]:
    """||[H, Delta^(sites)(X)]|| per generator."""
    b = H.spec.b if b is None else b
    b_p = H.spec.b_p if b_p is None else b_p
    if (b, b_p) != (H.spec.b, H.spec.b_p):
        raise ValueError("quantization parameters differ from those of the Hamiltonian")
    q = quantization_II(b_p, b)
    ops = iterated_coproduct(q.rule, fundamental_rep(), H.spec.sites, sparse=True)
    return {l: residual(H.matrix @ X - X @ H.matrix) for l, X in ops.items()}


def iteration_order_residual(b: float, b_p: float, copies: int = 3) -> float:
    q = quantization_II(b_p, b)
    left = iterated_coproduct(q.rule, fundamental_rep(), copies, side="left")
    right = iterated_coproduct(q.rule, fundamental_rep(), copies, side="right")
    return max(residual(left[l], right[l]) for l in q.labels)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    is_real: bool

    def to_json(self) -> dict:
        return {"is_real": self.is_real,
                "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues]}


def spectrum(H, tol: float = 1e-9) -> Spectrum:
    """Eigenvalues sorted by (real, imag)."""
    M = H.dense() if isinstance(H, ChainHamiltonian) else np.asarray(H, dtype=complex)
    if residual(M, M.conj().T) < 1e-12:
        ev = scipy.linalg.eigvalsh(M).astype(complex)
    else:
        ev = scipy.linalg.eigvals(M)
    ev = np.array(sorted(ev, key=lambda z: (round(z.real, 9), round(z.imag, 9))))
    return Spectrum(ev, bool(np.all(np.abs(ev.imag) < tol)))


def spectral_distance(s1: Spectrum, s2: Spectrum) -> float:
    if len(s1.eigenvalues) != len(s2.eigenvalues):
        raise ValueError("spectra of different sizes")
    return float(np.max(np.abs(s1.eigenvalues - s2.eigenvalues)))


def pauli() -> List[np.ndarray]:
    return [SIGMA3, E12, E21, ID2]
