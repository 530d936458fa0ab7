"""Structure-constant Lie algebras and tensor elements over them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .symbolics import MultiPoly

Index = Tuple[int, ...]


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@dataclass(frozen=True)
class LieAlgebraSpec:
    """A Lie algebra given by a basis and its structure constants.

    ``structure[(i, j)]`` maps output index -> coefficient of [X_i, X_j];
    antisymmetry is filled in automatically and Jacobi is checked.
    """

    name: str
    labels: Tuple[str, ...]
    structure: Dict[Tuple[int, int], Dict[int, Fraction]] = field(repr=False)

    def __post_init__(self):
        full: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), out in self.structure.items():
            out = {k: Fraction(c) for k, c in out.items() if c}
            if i == j and out:
                raise ValueError("[X, X] must vanish")
            full[(i, j)] = out
            back = {k: -c for k, c in out.items()}
            if (j, i) in self.structure and {k: Fraction(c) for k, c in self.structure[(j, i)].items() if c} != back:
                raise ValueError(f"structure constants not antisymmetric at {(i, j)}")
            full[(j, i)] = back
        object.__setattr__(self, "structure", full)
        bad = jacobi_violations(self)
        if bad:
            raise ValueError(f"{self.name}: Jacobi identity fails for {bad}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.dim:
                raise KeyError(f"basis index {label} out of range for {self.name}")
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r} for {self.name}") from None

    def bracket_indices(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.structure.get((i, j), {})

    def basis(self, label) -> "TensorElement":
        return TensorElement(self, 1, {(self.index(label),): MultiPoly.const(1)})

    def to_json(self) -> dict:
        consts = []
        for (i, j), out in sorted(self.structure.items()):
            if i < j and out:
                consts.append({
                    "bracket": [self.labels[i], self.labels[j]],
                    "result": {self.labels[k]: str(c) for k, c in sorted(out.items())},
                })
        return {"name": self.name, "basis": list(self.labels), "structure_constants": consts}


def jacobi_violations(alg: LieAlgebraSpec) -> List[Tuple[str, str, str]]:
    """Basis triples where [x,[y,z]] + cyclic is nonzero."""
    bad = []
    n = len(alg.labels)

    def br(i, vec):
        out: Dict[int, Fraction] = {}
        for j, c in vec.items():
            for k, d in alg.structure.get((i, j), {}).items():
                out[k] = out.get(k, 0) + c * d
        return out

    for i, j, k in itertools.combinations(range(n), 3):
        total: Dict[int, Fraction] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, v in br(a, alg.structure.get((b, c), {})).items():
                total[m] = total.get(m, 0) + v
        if any(total.values()):
            bad.append((alg.labels[i], alg.labels[j], alg.labels[k]))
    return bad


GL2 = LieAlgebraSpec(
    "gl2",
    ("J3", "J+", "J-", "I"),
    {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}},
)

H4 = LieAlgebraSpec(
    "h4",
    ("N", "A+", "A-", "M"),
    {(0, 1): {1: 1}, (0, 2): {2: -1}, (2, 1): {3: 1}},
)

ALGEBRAS = {"gl2": GL2, "h4": H4}


class TensorElement:
    """Element of g^{(x)k} with MultiPoly coefficients."""

    __slots__ = ("alg", "degree", "_coeffs")

    def __init__(self, alg: LieAlgebraSpec, degree: int, coeffs: Mapping[Index, object] | None = None):
        if degree < 1:
            raise ValueError("tensor degree must be >= 1")
        self.alg = alg
        self.degree = degree
        clean: Dict[Index, MultiPoly] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            c = MultiPoly.coerce(c)
            if not c.is_zero():
                clean[idx] = clean.get(idx, MultiPoly()) + c
        self._coeffs = {k: v for k, v in clean.items() if not v.is_zero()}

    @classmethod
    def zero(cls, alg: LieAlgebraSpec, degree: int) -> "TensorElement":
        return cls(alg, degree)

    @classmethod
    def from_labels(cls, alg: LieAlgebraSpec, terms: Mapping[Tuple[str, ...], object]) -> "TensorElement":
        terms = dict(terms)
        if not terms:
            raise ValueError("use TensorElement.zero for an empty element")
        degree = len(next(iter(terms)))
        return cls(alg, degree, {tuple(alg.index(l) for l in k): c for k, c in terms.items()})

    # access -------------------------------------------------------------
    def items(self):
        return self._coeffs.items()

    @property
    def coeffs(self) -> Dict[Index, MultiPoly]:
        return dict(self._coeffs)

    def coefficient(self, *labels) -> MultiPoly:
        idx = tuple(self.alg.index(l) for l in labels)
        return self._coeffs.get(idx, MultiPoly())

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check(self, other: "TensorElement"):
        if other.alg.name != self.alg.name:
            raise ValueError("tensor elements over different algebras")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")

    # linear structure -----------------------------------------------------
    def __add__(self, other: "TensorElement"):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        coeffs = dict(self._coeffs)
        for k, c in other._coeffs.items():
            coeffs[k] = coeffs.get(k, MultiPoly()) + c
        return TensorElement(self.alg, self.degree, coeffs)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return TensorElement(self.alg, self.degree, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other: "TensorElement"):
        return self + (-other)

    def __mul__(self, scalar):
        s = MultiPoly.coerce(scalar)
        return TensorElement(self.alg, self.degree, {k: c * s for k, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TensorElement(self.alg, self.degree, {k: c / scalar for k, c in self._coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.alg.name == other.alg.name and self.degree == other.degree and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.alg.name, self.degree, frozenset(self._coeffs.items())))

    # multilinear operations ---------------------------------------------
    def otimes(self, other: "TensorElement") -> "TensorElement":
        coeffs: Dict[Index, MultiPoly] = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                coeffs[k1 + k2] = coeffs.get(k1 + k2, MultiPoly()) + c1 * c2
        return TensorElement(self.alg, self.degree + other.degree, coeffs)

    def permute(self, perm: Sequence[int]) -> "TensorElement":
        """Move slot ``perm[s]`` of self into slot ``s`` of the result."""
        return TensorElement(self.alg, self.degree,
                             {tuple(k[p] for p in perm): c for k, c in self._coeffs.items()})

    def flip(self) -> "TensorElement":
        if self.degree != 2:
            raise ValueError("flip is defined for degree-2 tensors")
        return self.permute((1, 0))

    def antisymmetrize(self) -> "TensorElement":
        """Sum over slot permutations with sign (no 1/k! factor)."""
        out = TensorElement.zero(self.alg, self.degree)
        for p in itertools.permutations(range(self.degree)):
            out = out + self.permute(p) * _perm_sign(p)
        return out

    def is_antisymmetric(self) -> bool:
        for p in itertools.permutations(range(self.degree)):
            if self.permute(p) != self * _perm_sign(p):
                return False
        return True

    def map_coefficients(self, fn) -> "TensorElement":
        return TensorElement(self.alg, self.degree, {k: fn(c) for k, c in self._coeffs.items()})

    def subs(self, mapping) -> "TensorElement":
        return self.map_coefficients(lambda c: c.subs(mapping))

    def map_basis(self, images: Mapping[int, "TensorElement"], target: LieAlgebraSpec) -> "TensorElement":
        """Apply a linear map on generators slot-wise (images are degree 1)."""
        out = TensorElement.zero(target, self.degree)
        for idx, c in self._coeffs.items():
            term = None
            for i in idx:
                img = images[i]
                term = img if term is None else term.otimes(img)
            out = out + term * c
        return out

    # presentation -----------------------------------------------------------
    def wedge_components(self) -> Dict[Index, MultiPoly]:
        """Coefficients on X_{i1}^...^X_{ik} (i1<...<ik); requires antisymmetry."""
        if not self.is_antisymmetric():
            raise ValueError("tensor is not antisymmetric")
        return {k: c for k, c in self._coeffs.items() if list(k) == sorted(set(k)) and len(set(k)) == len(k)}

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        if self.degree > 1 and self.is_antisymmetric():
            comps, sep = self.wedge_components(), "^"
        else:
            comps, sep = self._coeffs, "(x)"
        parts = []
        for k in sorted(comps):
            name = sep.join(self.alg.labels[i] for i in k)
            parts.append(f"({comps[k]}) {name}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        if self.degree > 1 and self.is_antisymmetric():
            return {"algebra": self.alg.name, "degree": self.degree, "form": "wedge",
                    "terms": [{"basis": [self.alg.labels[i] for i in k], "coeff": str(c)}
                              for k, c in sorted(self.wedge_components().items())]}
        return {"algebra": self.alg.name, "degree": self.degree, "form": "tensor",
                "terms": [{"basis": [self.alg.labels[i] for i in k], "coeff": str(c)}
                          for k, c in sorted(self._coeffs.items())]}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"TensorElement[{self.alg.name}, {self.degree}]({self.to_text()})"


def tensor_from_json(data: Mapping, alg: LieAlgebraSpec | None = None) -> TensorElement:
    from .symbolics import parse_poly

    alg = alg or ALGEBRAS[data["algebra"]]
    degree = int(data["degree"])
    out = TensorElement.zero(alg, degree)
    for term in data["terms"]:
        coeff = parse_poly(str(term["coeff"]))
        base = TensorElement.from_labels(alg, {tuple(term["basis"]): 1})
        if data.get("form") == "wedge":
            base = base.antisymmetrize()
        out = out + base * coeff
    return out


def wedge(*xs: TensorElement) -> TensorElement:
    """x1 ^ x2 ^ ... = sum over permutations with sign (x^y = x(x)y - y(x)x)."""
    t = xs[0]
    for x in xs[1:]:
        t = t.otimes(x)
    return t.antisymmetrize()


def wedge_labels(alg: LieAlgebraSpec, *labels: str) -> TensorElement:
    return wedge(*(alg.basis(l) for l in labels))


def bracket(x, y, alg: LieAlgebraSpec = GL2) -> TensorElement:
    """[x, y] for basis labels (or indices) of ``alg``."""
    i, j = alg.index(x), alg.index(y)
    return TensorElement(alg, 1, {(k,): c for k, c in alg.bracket_indices(i, j).items()})


def bracket_elements(x: TensorElement, y: TensorElement) -> TensorElement:
    """Bracket of two degree-1 elements."""
    out: Dict[Index, MultiPoly] = {}
    for (i,), c1 in x.items():
        for (j,), c2 in y.items():
            for k, s in x.alg.bracket_indices(i, j).items():
                out[(k,)] = out.get((k,), MultiPoly()) + c1 * c2 * s
    return TensorElement(x.alg, 1, out)


def ad_action(x, t: TensorElement) -> TensorElement:
    """sum_i 1(x)...(x)[x, .](x)...(x)1 applied to t; x a basis label or degree-1 element."""
    alg = t.alg
    if isinstance(x, TensorElement):
        out = TensorElement.zero(alg, t.degree)
        for (i,), c in x.items():
            out = out + ad_action(i, t) * c
        return out
    i = alg.index(x)
    out: Dict[Index, MultiPoly] = {}
    for idx, c in t.items():
        for slot, j in enumerate(idx):
            for k, s in alg.bracket_indices(i, j).items():
                new = idx[:slot] + (k,) + idx[slot + 1:]
                out[new] = out.get(new, MultiPoly()) + c * s
    return TensorElement(alg, t.degree, out)


@dataclass(frozen=True)
class CasimirSpec:
    """Quadratic element stored as ordered (coefficient, word) monomials."""

    alg: LieAlgebraSpec
    monomials: Tuple[Tuple[Fraction, Tuple[str, ...]], ...]

    def evaluate(self, matrices: Mapping[str, object]):
        """Evaluate in a representation given as label -> matrix."""
        total = None
        for coef, word in self.monomials:
            prod = None
            for g in word:
                prod = matrices[g] if prod is None else prod @ matrices[g]
            term = float(coef) * prod
            total = term if total is None else total + term
        return total


GL2_CASIMIR = CasimirSpec(GL2, (
    (Fraction(1), ("J3", "J3")),
    (Fraction(2), ("J+", "J-")),
    (Fraction(2), ("J-", "J+")),
))


def eta_element(tau1, tau2, minus_plus=2, plus_minus=2) -> TensorElement:
    """tau1 (J3(x)J3 + 2 J-(x)J+ + 2 J+(x)J-) + tau2 I(x)I; the 2's are overridable."""
    t1, t2 = MultiPoly.coerce(tau1), MultiPoly.coerce(tau2)
    return TensorElement.from_labels(GL2, {
        ("J3", "J3"): t1,
        ("J-", "J+"): t1 * minus_plus,
        ("J+", "J-"): t1 * plus_minus,
        ("I", "I"): t2,
    })


def eta_invariance_check(tau1, tau2, minus_plus=2, plus_minus=2) -> bool:
    """True iff ad_X(eta) = 0 for every basis X of gl(2)."""
    eta = eta_element(tau1, tau2, minus_plus, plus_minus)
    return all(ad_action(x, eta).is_zero() for x in GL2.labels)
