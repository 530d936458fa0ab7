"""Lie bialgebra structures on gl(2).

Cocommutators, the cocycle and co-Jacobi conditions, coboundaries generated
by classical r-matrices, the Schouten bracket, the I+/I-/II classification
and the J+ <-> J- automorphism.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from .liealg import GL2, LieAlgebraSpec, TensorElement, ad_action, bracket, wedge, wedge_labels
from .symbolics import MultiPoly, parse_rational, sym

PARAM_NAMES = ("a_p", "a_m", "b_p", "b_m", "a", "b")
#: CLI spellings of the six parameters
PARAM_ALIASES = {"a+": "a_p", "a-": "a_m", "b+": "b_p", "b-": "b_m", "a": "a", "b": "b",
                 "a_p": "a_p", "a_m": "a_m", "b_p": "b_p", "b_m": "b_m"}


class NotABialgebra(ValueError):
    """Raised when a parameter point violates the co-Jacobi constraints."""

    def __init__(self, violated: Dict[str, Fraction]):
        self.violated = violated
        detail = ", ".join(f"{k} = {v}" for k, v in violated.items())
        super().__init__(f"not a Lie bialgebra: {detail}")


@dataclass(frozen=True)
class ParamPoint:
    a_p: Fraction = Fraction(0)
    a_m: Fraction = Fraction(0)
    b_p: Fraction = Fraction(0)
    b_m: Fraction = Fraction(0)
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, parse_rational(getattr(self, f.name)))

    @classmethod
    def from_assignments(cls, items) -> "ParamPoint":
        """Build from ``["a+=1", "b-=-2/3", ...]`` or a mapping."""
        if isinstance(items, Mapping):
            pairs = items.items()
        else:
            pairs = []
            for item in items:
                if "=" not in item:
                    raise ValueError(f"expected name=value, got {item!r}")
                k, v = item.split("=", 1)
                pairs.append((k.strip(), v.strip()))
        values = {}
        for k, v in pairs:
            if k not in PARAM_ALIASES:
                raise ValueError(f"unknown parameter {k!r}; expected one of a+ a- b+ b- a b")
            values[PARAM_ALIASES[k]] = parse_rational(v)
        return cls(**values)

    def as_dict(self) -> Dict[str, Fraction]:
        return {n: getattr(self, n) for n in PARAM_NAMES}

    def to_json(self) -> Dict[str, str]:
        return {n: str(v) for n, v in self.as_dict().items()}


# ---------------------------------------------------------------------------
# cocommutators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cocommutator:
    alg: LieAlgebraSpec
    images: Tuple[TensorElement, ...]

    def __post_init__(self):
        if len(self.images) != self.alg.dim:
            raise ValueError("need one image per basis element")
        for img in self.images:
            if img.degree != 2:
                raise ValueError("cocommutator images must be degree-2 tensors")

    @classmethod
    def from_map(cls, alg: LieAlgebraSpec, images: Mapping[str, TensorElement]) -> "Cocommutator":
        return cls(alg, tuple(images.get(l, TensorElement.zero(alg, 2)) for l in alg.labels))

    def __getitem__(self, label) -> TensorElement:
        return self.images[self.alg.index(label)]

    def apply(self, x: TensorElement) -> TensorElement:
        out = TensorElement.zero(self.alg, 2)
        for (i,), c in x.items():
            out = out + self.images[i] * c
        return out

    def subs(self, mapping) -> "Cocommutator":
        return Cocommutator(self.alg, tuple(t.subs(mapping) for t in self.images))

    def is_antisymmetric(self) -> bool:
        return all(t.is_antisymmetric() for t in self.images)

    def __eq__(self, other):
        if not isinstance(other, Cocommutator):
            return NotImplemented
        return self.alg.name == other.alg.name and self.images == other.images

    def __hash__(self):
        return hash((self.alg.name, self.images))

    def to_json(self) -> dict:
        return {l: t.to_text() for l, t in zip(self.alg.labels, self.images)}


def _w(*labels):
    return wedge_labels(GL2, *labels)


def generic_cocommutator(params: Mapping[str, object] | None = None) -> Cocommutator:
    """The six-parameter cocycle solution; symbolic unless ``params`` given."""
    a_p, a_m, b_p, b_m, a, b = sym(*PARAM_NAMES)
    half = Fraction(1, 2)
    delta = Cocommutator.from_map(GL2, {
        "J3": _w("J3", "J+") * a_p + _w("J3", "J-") * a_m + _w("J+", "I") * b_p + _w("J-", "I") * b_m,
        "J+": _w("J3", "J+") * a - _w("J3", "I") * (b_m * half) + _w("J+", "J-") * a_m + _w("J+", "I") * b,
        "J-": _w("J3", "J-") * a - _w("J3", "I") * (b_p * half) - _w("J+", "J-") * a_p - _w("J-", "I") * b,
    })
    if params is not None:
        delta = delta.subs(_as_mapping(params))
    return delta


def _as_mapping(params) -> Dict[str, object]:
    if isinstance(params, ParamPoint):
        return params.as_dict()
    return dict(params)


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    residuals: Dict[Tuple[str, str], TensorElement]

    def __bool__(self):
        return self.ok


def cocycle_check(delta: Cocommutator, alg: LieAlgebraSpec | None = None) -> CocycleReport:
    """delta([X,Y]) = [delta(X), 1(x)Y + Y(x)1] + [1(x)X + X(x)1, delta(Y)] on basis pairs."""
    alg = alg or delta.alg
    residuals = {}
    for i, j in itertools.combinations(range(alg.dim), 2):
        lhs = delta.apply(bracket(i, j, alg))
        rhs = ad_action(i, delta.images[j]) - ad_action(j, delta.images[i])
        res = lhs - rhs
        if not res.is_zero():
            residuals[(alg.labels[i], alg.labels[j])] = res
    return CocycleReport(not residuals, residuals)


def dual_jacobi_obstructions(delta: Cocommutator) -> List[MultiPoly]:
    """Coefficients of the Jacobi identity for the bracket dual to delta.

    With delta(X_i) = f_i^{jk} X_j (x) X_k the dual bracket is
    [xi^j, xi^k] = f_i^{jk} xi^i.
    """
    alg = delta.alg
    n = alg.dim
    f: Dict[Tuple[int, int, int], MultiPoly] = {}
    for i, img in enumerate(delta.images):
        for (j, k), c in img.items():
            f[(i, j, k)] = c
    zero = MultiPoly()
    out = []
    for a, b, c in itertools.combinations(range(n), 3):
        for l in range(n):
            total = MultiPoly()
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for i in range(n):
                    fi = f.get((i, x, y), zero)
                    if fi.is_zero():
                        continue
                    total = total + fi * f.get((l, i, z), zero)
            if not total.is_zero():
                out.append(total)
    return out


def distinct_up_to_scalar(polys) -> List[MultiPoly]:
    seen = []
    for p in polys:
        if p.is_zero():
            continue
        q = p.normalized()
        if q not in seen:
            seen.append(q)
    return seen


def cojacobi_constraints(delta: Cocommutator | None = None) -> List[MultiPoly]:
    """Distinct (up to scalar) polynomial conditions for delta^* to be a Lie bracket."""
    if delta is None:
        delta = generic_cocommutator()
    return distinct_up_to_scalar(dual_jacobi_obstructions(delta))


def jacobi_constraint_polys() -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """a_p b - b_p a, a_p b_m + a_m b_p, a_m b + b_m a."""
    a_p, a_m, b_p, b_m, a, b = sym(*PARAM_NAMES)
    return (a_p * b - b_p * a, a_p * b_m + a_m * b_p, a_m * b + b_m * a)


def same_up_to_scalar(ps, qs) -> bool:
    """Set equality of two polynomial lists, each member matched up to a rational factor."""
    ps, qs = distinct_up_to_scalar(ps), distinct_up_to_scalar(qs)
    return len(ps) == len(qs) and all(p in qs for p in ps)


def constraint_values(pt: ParamPoint) -> Dict[str, Fraction]:
    names = ("a_p*b - b_p*a", "a_p*b_m + a_m*b_p", "a_m*b + b_m*a")
    return {n: p.evaluate(pt.as_dict()) for n, p in zip(names, jacobi_constraint_polys())}


# ---------------------------------------------------------------------------
# r-matrices
# ---------------------------------------------------------------------------

C_NAMES = ("c1", "c2", "c3", "c4", "c5", "c6")
_C_BASIS = (("J3", "J+"), ("J3", "J-"), ("J3", "I"), ("J+", "I"), ("J-", "I"), ("J+", "J-"))


@dataclass(frozen=True)
class ClassicalRMatrix:
    tensor: TensorElement

    def __post_init__(self):
        if self.tensor.degree != 2 or not self.tensor.is_antisymmetric():
            raise ValueError("a classical r-matrix must be an antisymmetric degree-2 tensor")

    @classmethod
    def from_c(cls, c: Mapping[str, object] | None = None) -> "ClassicalRMatrix":
        """r = c1 J3^J+ + c2 J3^J- + c3 J3^I + c4 J+^I + c5 J-^I + c6 J+^J-."""
        c = dict(c) if c is not None else {n: MultiPoly.var(n) for n in C_NAMES}
        t = TensorElement.zero(GL2, 2)
        for name, pair in zip(C_NAMES, _C_BASIS):
            if name in c:
                t = t + _w(*pair) * c[name]
        return cls(t)

    @classmethod
    def from_params(cls, params=None) -> "ClassicalRMatrix":
        """The general r-matrix in terms of (a_p, a_m, b_p, b_m, a, b)."""
        if params is None:
            values = {n: MultiPoly.var(n) for n in PARAM_NAMES}
        else:
            values = {k: MultiPoly.coerce(v) for k, v in _as_mapping(params).items()}
        return cls.from_c(params_to_c(values))

    @property
    def alg(self):
        return self.tensor.alg

    def c_coordinates(self) -> Dict[str, MultiPoly]:
        if self.alg.name != "gl2":
            raise ValueError("c-coordinates are defined on gl(2)")
        return {n: self.tensor.coefficient(*pair) for n, pair in zip(C_NAMES, _C_BASIS)}

    def to_params(self) -> Dict[str, MultiPoly]:
        return c_to_params(self.c_coordinates())

    def subs(self, mapping) -> "ClassicalRMatrix":
        return ClassicalRMatrix(self.tensor.subs(mapping))

    def to_json(self) -> dict:
        return self.tensor.to_json()


def params_to_c(p: Mapping[str, object]) -> Dict[str, MultiPoly]:
    g = {k: MultiPoly.coerce(p.get(k, 0)) for k in PARAM_NAMES}
    half = Fraction(1, 2)
    return {
        "c1": g["a_p"] * half, "c2": -g["a_m"] * half, "c3": -g["b"] * half,
        "c4": g["b_p"] * half, "c5": -g["b_m"] * half, "c6": -g["a"],
    }


def c_to_params(c: Mapping[str, object]) -> Dict[str, MultiPoly]:
    g = {k: MultiPoly.coerce(c.get(k, 0)) for k in C_NAMES}
    return {
        "a_p": g["c1"] * 2, "a_m": -g["c2"] * 2, "b_p": g["c4"] * 2,
        "b_m": -g["c5"] * 2, "a": -g["c6"], "b": -g["c3"] * 2,
    }


def coboundary_delta(r: ClassicalRMatrix | TensorElement, alg: LieAlgebraSpec | None = None) -> Cocommutator:
    """delta(X) = [1(x)X + X(x)1, r] for every basis X."""
    t = r.tensor if isinstance(r, ClassicalRMatrix) else r
    alg = alg or t.alg
    return Cocommutator(alg, tuple(ad_action(i, t) for i in range(alg.dim)))


def schouten(r: ClassicalRMatrix | TensorElement) -> TensorElement:
    """[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23]."""
    t = r.tensor if isinstance(r, ClassicalRMatrix) else r
    alg = t.alg
    out: Dict[Tuple[int, int, int], MultiPoly] = {}

    def put(idx, c):
        out[idx] = out.get(idx, MultiPoly()) + c

    terms = list(t.items())
    for (i, j), c1 in terms:
        for (k, l), c2 in terms:
            c = c1 * c2
            for m, s in alg.bracket_indices(i, k).items():
                put((m, j, l), c * s)
            for m, s in alg.bracket_indices(j, k).items():
                put((i, m, l), c * s)
            for m, s in alg.bracket_indices(j, l).items():
                put((i, k, m), c * s)
    return TensorElement(alg, 3, out)


def schouten_closed_form(c: Mapping[str, object] | None = None) -> TensorElement:
    """The four-term expression for [[r,r]] in c-coordinates."""
    c = dict(c) if c is not None else {n: MultiPoly.var(n) for n in C_NAMES}
    g = {k: MultiPoly.coerce(c.get(k, 0)) for k in C_NAMES}
    c1, c2, c3, c4, c5, c6 = (g[k] for k in C_NAMES)
    return (_w("J3", "J+", "J-") * (c6 * c6 - c1 * c2 * 4)
            + _w("J3", "J+", "I") * (c4 * c6 - c1 * c3 * 2)
            + _w("J3", "J-", "I") * (c3 * c2 * 2 + c6 * c5)
            + _w("J+", "J-", "I") * ((c2 * c4 + c1 * c5) * 2))


def mcybe_conditions() -> List[MultiPoly]:
    """Coefficients of the non-invariant part of [[r,r]], in c-coordinates."""
    s = schouten(ClassicalRMatrix.from_c())
    return [s.coefficient(*w) for w in (("J3", "J+", "I"), ("J3", "J-", "I"), ("J+", "J-", "I"))]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyTag:
    family: str          # "I+", "I-" or "II"
    type: str            # "standard" or "non-standard"
    discriminant: Fraction
    equivalent_to: str | None = None

    @property
    def key(self) -> str:
        return f"{self.family}-{'std' if self.type == 'standard' else 'nonstd'}"

    def to_json(self) -> dict:
        out = {"family": self.family, "type": self.type, "discriminant": str(self.discriminant)}
        if self.equivalent_to:
            out["equivalent_to"] = self.equivalent_to
        return out


def discriminant(pt: ParamPoint) -> Fraction:
    return pt.a * pt.a + pt.a_p * pt.a_m


def classify(pt: ParamPoint) -> FamilyTag:
    violated = {k: v for k, v in constraint_values(pt).items() if v}
    if violated:
        raise NotABialgebra(violated)
    disc = discriminant(pt)
    kind = "standard" if disc else "non-standard"
    if pt.a_p:
        return FamilyTag("I+", kind, disc)
    if pt.a_m:
        return FamilyTag("I-", kind, disc, equivalent_to="I+")
    # a_p = a_m = 0: standard needs a != 0 (then b_p = b_m = 0 by the constraints)
    return FamilyTag("II", kind, disc)


# ---------------------------------------------------------------------------
# the automorphism J+ <-> J-, J3 -> -J3, I -> I
# ---------------------------------------------------------------------------

_AUTO_IMAGES = {
    0: TensorElement(GL2, 1, {(0,): -1}),
    1: TensorElement(GL2, 1, {(2,): 1}),
    2: TensorElement(GL2, 1, {(1,): 1}),
    3: TensorElement(GL2, 1, {(3,): 1}),
}


def apply_automorphism(x):
    """Image of a ParamPoint, r-matrix, cocommutator or gl(2) tensor."""
    if isinstance(x, ParamPoint):
        return ParamPoint(a_p=x.a_m, a_m=x.a_p, b_p=-x.b_m, b_m=-x.b_p, a=-x.a, b=-x.b)
    if isinstance(x, TensorElement):
        return x.map_basis(_AUTO_IMAGES, GL2)
    if isinstance(x, ClassicalRMatrix):
        return ClassicalRMatrix(apply_automorphism(x.tensor))
    if isinstance(x, Cocommutator):
        # delta' = (O(x)O) delta O^{-1}; O is an involution
        images = []
        for i in range(GL2.dim):
            images.append(apply_automorphism(x.apply(_AUTO_IMAGES[i])))
        return Cocommutator(GL2, tuple(images))
    raise TypeError(f"automorphism not defined on {type(x).__name__}")


# ---------------------------------------------------------------------------
# reference table of gl(2) bialgebras and family samplers
# ---------------------------------------------------------------------------

FAMILY_KEYS = ("I+-std", "I+-nonstd", "II-std", "II-nonstd")
FAMILY_FREE = {
    "I+-std": ("a_p", "a_m", "b_p", "a"),
    "I+-nonstd": ("a_p", "b_p", "a"),
    "II-std": ("a", "b"),
    "II-nonstd": ("b_p", "b_m", "b"),
}


def family_point(key: str, **free) -> Dict[str, MultiPoly]:
    """All six parameters of a family member from its free parameters."""
    v = {n: MultiPoly.coerce(free[n]) if n in free else MultiPoly.var(n) for n in FAMILY_FREE[key]}
    z = MultiPoly()
    if key == "I+-std":
        a_p, a_m, b_p, a = v["a_p"], v["a_m"], v["b_p"], v["a"]
        return {"a_p": a_p, "a_m": a_m, "b_p": b_p, "b_m": -a_m * b_p / a_p, "a": a, "b": b_p * a / a_p}
    if key == "I+-nonstd":
        a_p, b_p, a = v["a_p"], v["b_p"], v["a"]
        return {"a_p": a_p, "a_m": -a * a / a_p, "b_p": b_p, "b_m": b_p * a * a / (a_p * a_p),
                "a": a, "b": b_p * a / a_p}
    if key == "II-std":
        return {"a_p": z, "a_m": z, "b_p": z, "b_m": z, "a": v["a"], "b": v["b"]}
    if key == "II-nonstd":
        return {"a_p": z, "a_m": z, "b_p": v["b_p"], "b_m": v["b_m"], "a": z, "b": v["b"]}
    raise KeyError(key)


def table1(key: str, **free) -> Tuple[TensorElement, Cocommutator]:
    """Reference (r, delta) of each gl(2) family, in closed form."""
    v = {n: MultiPoly.coerce(free[n]) if n in free else MultiPoly.var(n) for n in FAMILY_FREE[key]}
    h = Fraction(1, 2)
    J3, Jp, Jm, I = (GL2.basis(l) for l in GL2.labels)

    if key == "I+-std":
        a_p, a_m, b_p, a = v["a_p"], v["a_m"], v["b_p"], v["a"]
        r = (wedge(J3, Jp) * a_p - wedge(J3, Jm) * a_m - wedge(J3, I) * (b_p * a / a_p)
             + wedge(Jp, I) * b_p + wedge(Jm, I) * (a_m * b_p / a_p) - wedge(Jp, Jm) * (a * 2)) * h
        d3 = -wedge(Jp * a_p + Jm * a_m, J3) + wedge(Jp - Jm * (a_m / a_p), I) * b_p
        dp = wedge(J3 * a - Jm * a_m, Jp) + wedge(Jp * a + J3 * (a_m * h), I) * (b_p / a_p)
        dm = wedge(J3 * a - Jp * a_p, Jm) - wedge(J3 + Jm * (a * 2 / a_p), I) * (b_p * h)
    elif key == "I+-nonstd":
        a_p, b_p, a = v["a_p"], v["b_p"], v["a"]
        r = (wedge(J3, Jp) * a_p + wedge(J3, Jm) * (a * a / a_p) - wedge(J3, I) * (b_p * a / a_p)
             + wedge(Jp, I) * b_p - wedge(Jm, I) * (b_p * a * a / (a_p * a_p)) - wedge(Jp, Jm) * (a * 2)) * h
        d3 = -wedge(Jp - Jm * (a * a / (a_p * a_p)), J3) * a_p + wedge(Jp + Jm * (a * a / (a_p * a_p)), I) * b_p
        dp = wedge(J3 + Jm * (a / a_p), Jp) * a + wedge(Jp - J3 * (a / (a_p * 2)), I) * (b_p * a / a_p)
        dm = wedge(J3 * a - Jp * a_p, Jm) - wedge(J3 + Jm * (a * 2 / a_p), I) * (b_p * h)
    elif key == "II-std":
        a, b = v["a"], v["b"]
        r = -wedge(J3, I) * (b * h) - wedge(Jp, Jm) * a
        d3 = TensorElement.zero(GL2, 2)
        dp = -wedge(Jp, J3) * a + wedge(Jp, I) * b
        dm = -wedge(Jm, J3) * a - wedge(Jm, I) * b
    elif key == "II-nonstd":
        b_p, b_m, b = v["b_p"], v["b_m"], v["b"]
        r = -wedge(J3 * b - Jp * b_p + Jm * b_m, I) * h
        d3 = wedge(Jp * b_p + Jm * b_m, I)
        dp = -wedge(J3 * (b_m * h) - Jp * b, I)
        dm = -wedge(J3 * (b_p * h) + Jm * b, I)
    else:
        raise KeyError(key)
    return r, Cocommutator(GL2, (d3, dp, dm, TensorElement.zero(GL2, 2)))


def random_rational(rng: random.Random, nonzero: bool = False, span: int = 5) -> Fraction:
    while True:
        q = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if q or not nonzero:
            return q


def sample_point(rng: random.Random, key: str) -> ParamPoint:
    """Random exact point of a family (genericity conditions enforced)."""
    while True:
        free = {}
        for n in FAMILY_FREE[key]:
            must = (key.startswith("I+") and n == "a_p") or (key == "II-std" and n == "a")
            free[n] = random_rational(rng, nonzero=must)
        vals = family_point(key, **free)
        pt = ParamPoint(**{k: v.constant_value() for k, v in vals.items()})
        if key == "I+-std" and not discriminant(pt):
            continue
        return pt
