"""Lie bialgebra contraction gl(2) -> h4 with per-parameter epsilon exponents.

Generators: A+ = eps J+, A- = eps J-, N = (J3 + I)/2, M = eps^2 I.
Each deformation parameter is rescaled as ``old = sum scale * eps^n * new``
with one integer exponent per symbol; symbols may be shared between
parameters when the contraction only converges with them tied.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bialgebra import (ClassicalRMatrix, Cocommutator, coboundary_delta, cocycle_check, family_point,
                        generic_cocommutator)
from .liealg import GL2, H4, TensorElement, bracket_elements, wedge_labels
from .symbolics import DivergenceReport, MultiPoly, sym

EPS = MultiPoly.var("eps")


class ContractionError(ValueError):
    pass


class OscillatorGap(ContractionError):
    """Basis change undefined: one of the isolated oscillator bialgebras."""


def _h4(terms: Mapping[str, object]) -> TensorElement:
    return TensorElement.from_labels(H4, {(k,): v for k, v in terms.items()})


def _gl2(terms: Mapping[str, object]) -> TensorElement:
    return TensorElement.from_labels(GL2, {(k,): v for k, v in terms.items()})


#: gl(2) generators written in the h4 basis
GL2_IN_H4 = {
    0: _h4({"N": 2, "M": -EPS ** -2}),
    1: _h4({"A+": EPS ** -1}),
    2: _h4({"A-": EPS ** -1}),
    3: _h4({"M": EPS ** -2}),
}

#: h4 generators written in the gl(2) basis
H4_IN_GL2 = {
    "N": _gl2({"J3": Fraction(1, 2), "I": Fraction(1, 2)}),
    "A+": _gl2({"J+": EPS}),
    "A-": _gl2({"J-": EPS}),
    "M": _gl2({"I": EPS ** 2}),
}


@dataclass(frozen=True)
class Rescaling:
    """``param = sum(scale * eps^exponent * new)`` over the listed terms."""

    param: str
    terms: Tuple[Tuple[Fraction, str, str], ...]  # (scale, exponent symbol, new parameter)

    def value(self, exps: Mapping[str, int]) -> MultiPoly:
        out = MultiPoly()
        for scale, sym_name, new in self.terms:
            out = out + MultiPoly.var(new) * EPS ** exps[sym_name] * scale
        return out


def _rs(param, *terms):
    return Rescaling(param, tuple((Fraction(s), e, n) for s, e, n in terms))


@dataclass(frozen=True)
class ContractionScheme:
    family: str
    rescalings: Tuple[Rescaling, ...]
    exponent_symbols: Tuple[str, ...]
    contracted_params: Tuple[str, ...]

    def params(self, exps: Mapping[str, int]) -> Dict[str, MultiPoly]:
        """All six gl(2) parameters, dependent ones resolved by the family relations."""
        free = {r.param: r.value(exps) for r in self.rescalings}
        return family_point(self.family, **free)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rescalings": {
                r.param: [{"scale": str(s), "exponent": e, "parameter": n} for s, e, n in r.terms]
                for r in self.rescalings
            },
        }


SCHEMES: Dict[str, ContractionScheme] = {
    "I+-std": ContractionScheme(
        "I+-std",
        (_rs("a_p", (1, "n_p", "alpha_p")), _rs("b_p", (-1, "n_p", "alpha_p")),
         _rs("a_m", (-1, "n_m", "beta_m")), _rs("a", (1, "n", "vartheta"))),
        ("n_p", "n_m", "n"), ("alpha_p", "beta_m", "vartheta")),
    "I+-nonstd": ContractionScheme(
        "I+-nonstd",
        (_rs("a_p", (1, "n_p", "alpha_p")), _rs("b_p", (-1, "n_p", "alpha_p")), _rs("a", (1, "n", "vartheta"))),
        ("n_p", "n"), ("alpha_p", "vartheta")),
    "II-std": ContractionScheme(
        "II-std",
        (_rs("a", (-1, "n_xi", "xi")), _rs("b", (-1, "n", "vartheta"))),
        ("n_xi", "n"), ("xi", "vartheta")),
    "II-nonstd": ContractionScheme(
        "II-nonstd",
        (_rs("b_p", (2, "n_p", "beta_p")), _rs("b_m", (-2, "n_m", "beta_m")), _rs("b", (-1, "n", "vartheta"))),
        ("n", "n_p", "n_m"), ("vartheta", "beta_p", "beta_m")),
}

# I+ standard with the extra beta_p direction b+ = -eps alpha_p - 2 eps^k beta_p
SCHEMES["I+-std-beta"] = ContractionScheme(
    "I+-std",
    (_rs("a_p", (1, "n_p", "alpha_p")), _rs("b_p", (-1, "n_p", "alpha_p"), (-2, "n_bp", "beta_p")),
     _rs("a_m", (-1, "n_m", "beta_m")), _rs("a", (1, "n", "vartheta"))),
    ("n_p", "n_bp", "n_m", "n"), ("alpha_p", "beta_p", "beta_m", "vartheta"))

#: exponents of the reference parameter maps (regression targets)
REFERENCE_EXPONENTS = {
    "I+-std": {"n_p": 1, "n_m": 3, "n": 2},
    "I+-nonstd": {"n_p": 1, "n": 2},
    "II-std": {"n_xi": 2, "n": 2},
    "II-nonstd": {"n": 2, "n_p": 3, "n_m": 3},
}

FAMILY_ALIASES = {
    "I+-standard": "I+-std", "I+-nonstandard": "I+-nonstd", "I+-non-standard": "I+-nonstd",
    "II-standard": "II-std", "II-nonstandard": "II-nonstd", "II-non-standard": "II-nonstd",
}


def scheme_for(family: str) -> ContractionScheme:
    key = FAMILY_ALIASES.get(family, family)
    if key not in SCHEMES:
        raise KeyError(f"no contraction scheme for {family!r}; choose from {sorted(SCHEMES)}")
    return SCHEMES[key]


# ---------------------------------------------------------------------------
# transformation and limits
# ---------------------------------------------------------------------------

def transform_r(r: ClassicalRMatrix | TensorElement, scheme: ContractionScheme | None = None,
                exps: Mapping[str, int] | None = None) -> TensorElement:
    """r rewritten over h4 with Laurent coefficients in eps.

    With a scheme, ``r`` is taken as the generic r-matrix and its parameters
    are replaced through the scheme at the given exponents.
    """
    t = r.tensor if isinstance(r, ClassicalRMatrix) else r
    if scheme is not None:
        t = t.subs(scheme.params(exps))
    return t.map_basis(GL2_IN_H4, H4)


def transform_delta(delta: Cocommutator, scheme: ContractionScheme | None = None,
                    exps: Mapping[str, int] | None = None) -> Cocommutator:
    """delta(X') for the h4 generators, images rewritten over h4."""
    if scheme is not None:
        delta = delta.subs(scheme.params(exps))
    images = []
    for label in H4.labels:
        img = delta.apply(H4_IN_GL2[label])
        images.append(img.map_basis(GL2_IN_H4, H4))
    return Cocommutator(H4, tuple(images))


def divergent_terms(t: TensorElement) -> Dict[tuple, DivergenceReport]:
    """Coefficients carrying negative eps powers, keyed by basis index."""
    bad = {}
    for idx, c in t.items():
        neg = {d: p for d, p in c.collect("eps").items() if d < 0}
        if neg:
            bad[idx] = DivergenceReport(neg)
    return bad


def tensor_limit(t: TensorElement) -> TensorElement:
    """eps -> 0 limit; raises ContractionError on divergence."""
    bad = divergent_terms(t)
    if bad:
        worst = min(rep.min_degree for rep in bad.values())
        raise ContractionError(f"divergent terms down to eps^{worst}")
    return t.map_coefficients(lambda c: c.collect("eps").get(0, MultiPoly()))


def _degree_data(kind: str, scheme: ContractionScheme):
    """(explicit eps power, exponent-symbol weights) for every term at zero exponents.

    Each contracted parameter is attached to a single exponent symbol, so the
    eps-degree of a term is linear in the exponent vector.
    """
    owner = {}
    for resc in scheme.rescalings:
        for _, sym_name, new in resc.terms:
            if owner.setdefault(new, sym_name) != sym_name:
                raise ContractionError(f"{new} is rescaled by two exponent symbols")
    zero = {s: 0 for s in scheme.exponent_symbols}
    if kind == "r":
        tensors = [transform_r(ClassicalRMatrix.from_params(), scheme, zero)]
    elif kind == "delta":
        tensors = list(transform_delta(generic_cocommutator(), scheme, zero).images)
    else:
        raise ValueError(f"kind must be 'r' or 'delta', not {kind!r}")
    rows = set()
    for t in tensors:
        for _, c in t.items():
            for mono, _ in c.items():
                powers = dict(mono)
                weights = tuple(sum(k for v, k in powers.items() if owner.get(v) == s)
                                for s in scheme.exponent_symbols)
                rows.add((powers.get("eps", 0), weights))
    return sorted(rows)


def _converges(rows, cand: Sequence[int]) -> bool:
    return all(d + sum(w * n for w, n in zip(weights, cand)) >= 0 for d, weights in rows)


def minimal_exponents(kind: str, family: str | ContractionScheme, lower: int = 0,
                      upper: int = 6) -> Dict[str, int]:
    """Componentwise-minimal integer exponents making ``kind`` converge.

    Scans the box [lower, upper]^k; the convergent set must have a unique
    minimal element. Convergence need not be upward closed: raising the
    exponent of a divisor parameter can push a dependent parameter negative.
    """
    scheme = family if isinstance(family, ContractionScheme) else scheme_for(family)
    syms = scheme.exponent_symbols
    rows = _degree_data(kind, scheme)
    good = [cand for cand in itertools.product(range(lower, upper + 1), repeat=len(syms))
            if _converges(rows, cand)]
    if not good:
        raise ContractionError(f"{kind} does not converge for exponents in [{lower}, {upper}]")
    minimal = [g for g in good if not any(h != g and all(h[i] <= g[i] for i in range(len(syms))) for h in good)]
    if len(minimal) != 1:
        raise ContractionError(f"no unique minimal exponent vector for {kind}: {minimal}")
    return dict(zip(syms, minimal[0]))


# ---------------------------------------------------------------------------
# contracted bialgebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractedBialgebra:
    family: str
    r: TensorElement
    delta: Cocommutator
    exponents: Dict[str, int]
    ledger: Dict[str, Dict[str, int]] = field(default_factory=dict)

    @property
    def is_coboundary(self) -> bool:
        return self.ledger.get("r") == self.ledger.get("delta")

    def subs(self, mapping) -> "ContractedBialgebra":
        return ContractedBialgebra(self.family, self.r.subs(mapping), self.delta.subs(mapping),
                                   self.exponents, self.ledger)

    def checks(self) -> Dict[str, bool]:
        return {
            "cocycle": bool(cocycle_check(self.delta, H4)),
            "coboundary": coboundary_delta(self.r, H4) == self.delta,
        }

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "algebra": "h4",
            "r": self.r.to_text(),
            "delta": self.delta.to_json(),
            "exponents": self.exponents,
            "convergence": self.ledger,
            "coboundary": self.is_coboundary,
            "checks": self.checks(),
        }


def contract(family: str, exponents: Mapping[str, int] | None = None) -> ContractedBialgebra:
    """Contract a Table-1 family; exponents default to the discovered minimal ones."""
    scheme = scheme_for(family)
    ledger = {"r": minimal_exponents("r", scheme), "delta": minimal_exponents("delta", scheme)}
    if exponents is None:
        exponents = {s: max(ledger["r"][s], ledger["delta"][s]) for s in scheme.exponent_symbols}
    r = tensor_limit(transform_r(ClassicalRMatrix.from_params(), scheme, exponents))
    d = transform_delta(generic_cocommutator(), scheme, exponents)
    delta = Cocommutator(H4, tuple(tensor_limit(img) for img in d.images))
    key = FAMILY_ALIASES.get(family, family)
    return ContractedBialgebra(key, r, delta, dict(exponents), ledger)


def _hw(*labels):
    return wedge_labels(H4, *labels)


def table2(family: str) -> Tuple[TensorElement, Cocommutator]:
    """Reference contracted r-matrix and cocommutator of a family."""
    key = FAMILY_ALIASES.get(family, family)
    alpha_p, beta_p, beta_m, vartheta, xi = sym("alpha_p", "beta_p", "beta_m", "vartheta", "xi")
    zero = TensorElement.zero(H4, 2)
    if key in ("I+-std", "I+-nonstd"):
        bm = beta_m if key == "I+-std" else vartheta * vartheta / alpha_p
        r = _hw("N", "A+") * alpha_p + (_hw("N", "M") - _hw("A+", "A-")) * vartheta + _hw("A-", "M") * bm
        delta = {
            "N": _hw("N", "A+") * alpha_p - _hw("A-", "M") * bm,
            "A+": zero,
            "A-": (_hw("N", "M") - _hw("A+", "A-")) * alpha_p + _hw("A-", "M") * (vartheta * 2),
        }
    elif key == "II-std":
        r = _hw("N", "M") * vartheta + _hw("A+", "A-") * xi
        delta = {"A+": _hw("A+", "M") * -(vartheta + xi), "A-": _hw("A-", "M") * (vartheta - xi)}
    elif key == "II-nonstd":
        r = _hw("N", "M") * vartheta + _hw("A+", "M") * beta_p + _hw("A-", "M") * beta_m
        delta = {
            "N": _hw("A+", "M") * beta_p - _hw("A-", "M") * beta_m,
            "A+": _hw("A+", "M") * -vartheta,
            "A-": _hw("A-", "M") * vartheta,
        }
    else:
        raise KeyError(family)
    return r, Cocommutator.from_map(H4, delta)


# ---------------------------------------------------------------------------
# oscillator basis changes
# ---------------------------------------------------------------------------

def _invert_unitriangular(rows: Sequence[Sequence[MultiPoly]]) -> List[List[MultiPoly]]:
    """Inverse of a matrix whose pivots are nonzero constants (Gauss-Jordan)."""
    n = len(rows)
    a = [[MultiPoly.coerce(x) for x in row] + [MultiPoly.const(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col].is_constant() and not a[i][col].is_zero()), None)
        if piv is None:
            raise ContractionError("basis change has no constant pivot")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col].constant_value()
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and not a[i][col].is_zero():
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def basis_change(b: ContractedBialgebra, new_generators: Mapping[str, TensorElement]) -> ContractedBialgebra:
    """Rewrite a bialgebra in the primed basis X'_k = new_generators[k] (old basis).

    Raises ContractionError if the primed generators break the h4 relations.
    """
    labels = H4.labels
    P = [[new_generators[k].coefficient(l) for l in labels] for k in labels]
    for i, j in itertools.combinations(range(len(labels)), 2):
        lhs = bracket_elements(new_generators[labels[i]], new_generators[labels[j]])
        rhs = TensorElement.zero(H4, 1)
        for k, c in H4.bracket_indices(i, j).items():
            rhs = rhs + new_generators[labels[k]] * c
        if lhs != rhs:
            raise ContractionError(f"[{labels[i]}', {labels[j]}'] breaks the h4 relations")
    Pinv = _invert_unitriangular(P)
    old_in_new = {j: TensorElement(H4, 1, {(k,): Pinv[j][k] for k in range(len(labels))})
                  for j in range(len(labels))}
    r = b.r.map_basis(old_in_new, H4)
    images = tuple(b.delta.apply(new_generators[l]).map_basis(old_in_new, H4) for l in labels)
    return ContractedBialgebra(b.family, r, Cocommutator(H4, images), b.exponents, b.ledger)


def oscillator_normalize(b: ContractedBialgebra, which: str,
                         values: Optional[Mapping[str, object]] = None) -> ContractedBialgebra:
    """Oscillator-basis normalizations.

    ``remove_beta_p``: N' = N + (beta_p/alpha_p) M absorbs beta_p in family I+.
    ``standard_II``: N' = N - beta_p/(vartheta+xi) A+ - beta_m/(vartheta-xi) A-,
    A'+ = A+ - beta_m/(vartheta-xi) M, A'- = A- - beta_p/(vartheta+xi) M brings
    beta_p, beta_m into the standard family II. Needs numeric vartheta, xi via
    ``values``.
    """
    if values:
        b = b.subs(values)
    alpha_p, beta_p, beta_m, vartheta, xi = sym("alpha_p", "beta_p", "beta_m", "vartheta", "xi")
    if values:
        alpha_p, beta_p, beta_m, vartheta, xi = (x.subs(values) for x in (alpha_p, beta_p, beta_m, vartheta, xi))
    gen = {l: _h4({l: 1}) for l in H4.labels}
    if which == "remove_beta_p":
        if alpha_p.is_zero():
            raise OscillatorGap("alpha_p = 0: beta_p cannot be absorbed")
        gen["N"] = _h4({"N": 1, "M": beta_p / alpha_p})
    elif which == "standard_II":
        plus, minus = vartheta + xi, vartheta - xi
        for name, s in (("vartheta+xi", plus), ("vartheta-xi", minus)):
            if not s.is_constant():
                raise ContractionError(f"{name} must be numeric; pass vartheta and xi in values")
            if s.is_zero():
                lost = "beta_p" if name == "vartheta+xi" else "beta_m"
                raise OscillatorGap(f"{name} = 0: isolated oscillator bialgebra, {lost} cannot be introduced")
        cp, cm = beta_p / plus.constant_value(), beta_m / minus.constant_value()
        gen["N"] = _h4({"N": 1, "A+": -cp, "A-": -cm})
        gen["A+"] = _h4({"A+": 1, "M": -cm})
        gen["A-"] = _h4({"A-": 1, "M": -cp})
    else:
        raise ValueError(f"unknown normalization {which!r}")
    return basis_change(b, gen)
