"""Quantum gl(2) algebras checked numerically in representations.

Elements of the (deformed) enveloping algebra are small expression trees
(:class:`Expr`).  A coproduct is a :class:`CoproductRule`: for each generator,
a list of ``coeff * (left (x) right)`` terms.  Trees are evaluated either
on matrices (a representation, or generator images under a coproduct) or on
"slot forms", used by the primitive-scalar coassociativity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp

TOL_EXACT = 1e-12
TOL_CHAINED = 1e-10


class MethodInapplicable(ValueError):
    """The requested verification method cannot handle this coproduct."""


class NonScalarCentral(ValueError):
    """A central-element function was applied to a non-scalar matrix."""


# ---------------------------------------------------------------------------
# expression trees
# ---------------------------------------------------------------------------

class Expr:
    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Scale(-1.0, as_expr(other))))

    def __rsub__(self, other):
        return Add((as_expr(other), Scale(-1.0, self)))

    def __neg__(self):
        return Scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, Expr):
            return Mul((self, other))
        return Scale(other, self)

    def __rmul__(self, other):
        return Scale(other, self)

    def __truediv__(self, c):
        return Scale(1.0 / c, self)


@dataclass(frozen=True, eq=False)
class Gen(Expr):
    label: str


@dataclass(frozen=True, eq=False)
class One(Expr):
    pass


@dataclass(frozen=True, eq=False)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True, eq=False)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True, eq=False)
class Scale(Expr):
    c: complex
    arg: Expr


@dataclass(frozen=True, eq=False)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True, eq=False)
class Phi1(Expr):
    """(e^X - 1)/X, entire in X."""

    arg: Expr


@dataclass(frozen=True, eq=False)
class CentralFunc(Expr):
    """f(x) applied to an argument acting as a scalar (a central element)."""

    fn: Callable[[complex], complex]
    arg: Expr
    name: str = "f"


ONE = One()


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Scale(x, ONE)


def gens(*labels: str) -> Tuple[Gen, ...]:
    return tuple(Gen(l) for l in labels)


def commutator(x: Expr, y: Expr) -> Expr:
    return x * y - y * x


def sinh_e(x: Expr) -> Expr:
    return (Exp(x) - Exp(-x)) * 0.5


def cosh_e(x: Expr) -> Expr:
    return (Exp(x) + Exp(-x)) * 0.5


class Backend:
    """Algebra operations used while evaluating a tree."""

    def one(self): ...
    def add(self, x, y): ...
    def scale(self, c, x): ...
    def mul(self, x, y): ...
    def exp(self, x): ...
    def phi1(self, x): ...
    def central(self, fn, x): ...


def evaluate(expr: Expr, images: Mapping[str, object], backend: "Backend"):
    """Evaluate ``expr`` with generators sent to ``images``."""
    if isinstance(expr, Gen):
        try:
            return images[expr.label]
        except KeyError:
            raise KeyError(f"no image for generator {expr.label!r}") from None
    if isinstance(expr, One):
        return backend.one()
    if isinstance(expr, Scale):
        return backend.scale(expr.c, evaluate(expr.arg, images, backend))
    if isinstance(expr, Add):
        vals = [evaluate(t, images, backend) for t in expr.terms]
        out = vals[0]
        for v in vals[1:]:
            out = backend.add(out, v)
        return out
    if isinstance(expr, Mul):
        vals = [evaluate(t, images, backend) for t in expr.factors]
        out = vals[0]
        for v in vals[1:]:
            out = backend.mul(out, v)
        return out
    if isinstance(expr, Exp):
        return backend.exp(evaluate(expr.arg, images, backend))
    if isinstance(expr, Phi1):
        return backend.phi1(evaluate(expr.arg, images, backend))
    if isinstance(expr, CentralFunc):
        return backend.central(expr.fn, evaluate(expr.arg, images, backend))
    raise TypeError(f"cannot evaluate node {type(expr).__name__}")


# matrices --------------------------------------------------------------------

def _is_diagonal(m) -> bool:
    if sp.issparse(m):
        m = m.tocoo()
        return bool(np.all(m.row == m.col) or np.all(m.data[m.row != m.col] == 0))
    return not np.any(m - np.diag(np.diagonal(m)))


def _diag_values(m):
    return m.diagonal() if sp.issparse(m) else np.diagonal(m)


def _phi1_scalar(z):
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    big = np.abs(z) > 1e-8
    out[big] = np.expm1(z[big]) / z[big]
    out[~big] = 1 + z[~big] / 2 + z[~big] ** 2 / 6
    return out


class MatrixBackend(Backend):
    """Dense numpy or scipy.sparse matrices of a fixed dimension."""

    def __init__(self, dim: int, sparse: bool = False):
        self.dim = dim
        self.sparse = sparse

    def one(self):
        return sp.identity(self.dim, dtype=complex, format="csr") if self.sparse else np.eye(self.dim, dtype=complex)

    def add(self, x, y):
        return x + y

    def scale(self, c, x):
        return c * x

    def mul(self, x, y):
        return x @ y

    def _diag(self, vals):
        return sp.diags(vals, format="csr") if self.sparse else np.diag(vals)

    def exp(self, x):
        if _is_diagonal(x):
            return self._diag(np.exp(_diag_values(x)))
        dense = x.toarray() if sp.issparse(x) else x
        out = scipy.linalg.expm(dense)
        return sp.csr_matrix(out) if self.sparse else out

    def phi1(self, x):
        if _is_diagonal(x):
            return self._diag(_phi1_scalar(_diag_values(x)))
        dense = x.toarray() if sp.issparse(x) else x
        n = dense.shape[0]
        block = np.zeros((2 * n, 2 * n), dtype=complex)
        block[:n, :n] = dense
        block[:n, n:] = np.eye(n)
        out = scipy.linalg.expm(block)[:n, n:]
        return sp.csr_matrix(out) if self.sparse else out

    def central(self, fn, x):
        lam = scalar_value(x)
        return fn(lam) * self.one()


def scalar_value(m, tol: float = 1e-12) -> complex:
    """lambda with m = lambda * 1, else NonScalarCentral."""
    diag = _diag_values(m)
    lam = complex(diag[0])
    off = m - lam * (sp.identity(m.shape[0], format="csr") if sp.issparse(m) else np.eye(m.shape[0]))
    if _max_abs(off) > tol * max(1.0, abs(lam)):
        raise NonScalarCentral("argument does not act as a scalar")
    return lam


def _max_abs(m) -> float:
    if sp.issparse(m):
        return float(abs(m).max()) if m.nnz else 0.0
    return float(np.max(np.abs(m))) if m.size else 0.0


def residual(a, b=None) -> float:
    """max |a - b| entrywise."""
    return _max_abs(a if b is None else a - b)


# slot forms ------------------------------------------------------------------

@dataclass
class SlotForm:
    """sum over keys of (X_1 (x) ... (x) X_n) * f(primitives), f sampled.

    A key holds, per slot, either None (the unit) or a non-primitive
    generator label; the value is the product of the primitive-function
    samples.  Only forms linear in non-primitive generators per slot exist.
    """

    n: int
    terms: Dict[Tuple, complex] = field(default_factory=dict)

    def copy(self):
        return SlotForm(self.n, dict(self.terms))


class SlotBackend(Backend):
    def __init__(self, n: int):
        self.n = n

    def one(self):
        return SlotForm(self.n, {(None,) * self.n: 1.0})

    def add(self, x, y):
        out = x.copy()
        for k, v in y.terms.items():
            out.terms[k] = out.terms.get(k, 0) + v
        return out

    def scale(self, c, x):
        return SlotForm(self.n, {k: c * v for k, v in x.terms.items()})

    def mul(self, x, y):
        out = SlotForm(self.n)
        for k1, v1 in x.terms.items():
            for k2, v2 in y.terms.items():
                if v1 == 0 or v2 == 0:
                    continue
                key = []
                for s1, s2 in zip(k1, k2):
                    if s2 is None:
                        key.append(s1)
                    else:
                        # functions of primitives sit to the right of linear parts
                        raise MethodInapplicable("product leaves a non-primitive generator right of a function")
                k = tuple(key)
                out.terms[k] = out.terms.get(k, 0) + v1 * v2
        return out

    def _pure(self, x) -> complex:
        val = 0.0
        for k, v in x.terms.items():
            if any(s is not None for s in k):
                if v != 0:
                    raise MethodInapplicable("function of a non-primitive generator")
                continue
            val += v
        return val

    def exp(self, x):
        return SlotForm(self.n, {(None,) * self.n: complex(np.exp(self._pure(x)))})

    def phi1(self, x):
        return SlotForm(self.n, {(None,) * self.n: complex(_phi1_scalar(self._pure(x)))})

    def central(self, fn, x):
        return SlotForm(self.n, {(None,) * self.n: fn(self._pure(x))})


# ---------------------------------------------------------------------------
# coproduct rules
# ---------------------------------------------------------------------------

Term = Tuple[complex, Expr, Expr]


@dataclass(frozen=True)
class CoproductRule:
    name: str
    labels: Tuple[str, ...]
    images: Dict[str, Tuple[Term, ...]]
    primitives: Tuple[str, ...] = ()

    def __getitem__(self, label) -> Tuple[Term, ...]:
        return self.images[label]


def primitive_terms(x: Expr) -> Tuple[Term, ...]:
    return ((1.0, ONE, x), (1.0, x, ONE))


@dataclass(frozen=True)
class Representation:
    name: str
    dim: int
    matrices: Dict[str, np.ndarray]
    params: Dict[str, float] = field(default_factory=dict)

    def __getitem__(self, label) -> np.ndarray:
        return self.matrices[label]

    def evaluate(self, expr: Expr) -> np.ndarray:
        return evaluate(expr, self.matrices, MatrixBackend(self.dim))

    def to_json(self) -> dict:
        return {"name": self.name, "dim": self.dim, "params": self.params,
                "matrices": {k: matrix_to_json(v) for k, v in self.matrices.items()}}


def matrix_to_json(m) -> List[List[List[float]]]:
    m = m.toarray() if sp.issparse(m) else np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m.astype(complex)]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def _kron(x, y, sparse: bool):
    return sp.kron(x, y, format="csr") if sparse else np.kron(x, y)


def apply_rule(rule: CoproductRule, label: str, left_images: Mapping[str, object], left_dim: int,
               right_images: Mapping[str, object], right_dim: int, sparse: bool = False):
    """sum_terms c * L(left) (x) R(right), generator images given per side."""
    lb, rb = MatrixBackend(left_dim, sparse), MatrixBackend(right_dim, sparse)
    out = None
    for c, left, right in rule[label]:
        term = c * _kron(evaluate(left, left_images, lb), evaluate(right, right_images, rb), sparse)
        out = term if out is None else out + term
    return out


def coproduct_eval(rule: CoproductRule, rep: Representation) -> Dict[str, np.ndarray]:
    """Delta(X) in rep (x) rep for every generator."""
    return {l: apply_rule(rule, l, rep.matrices, rep.dim, rep.matrices, rep.dim) for l in rule.labels}


def iterated_coproduct(rule: CoproductRule, rep: Representation, copies: int, sparse: bool = False,
                       side: str = "right") -> Dict[str, object]:
    """Delta^(copies) on rep^(x copies); ``right``: (id (x) Delta^(k-1)) Delta."""
    cur = {l: (sp.csr_matrix(m) if sparse else m) for l, m in rep.matrices.items()}
    dim = rep.dim
    base = {l: (sp.csr_matrix(m) if sparse else m) for l, m in rep.matrices.items()}
    for _ in range(copies - 1):
        if side == "right":
            cur = {l: apply_rule(rule, l, base, rep.dim, cur, dim, sparse) for l in rule.labels}
        elif side == "left":
            cur = {l: apply_rule(rule, l, cur, dim, base, rep.dim, sparse) for l in rule.labels}
        else:
            raise ValueError(side)
        dim *= rep.dim
    return cur


def flip_operator(d: int) -> np.ndarray:
    """sigma on C^d (x) C^d."""
    P = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            P[i * d + j, j * d + i] = 1
    return P


# ---------------------------------------------------------------------------
# quantizations
# ---------------------------------------------------------------------------

Relation = Tuple[str, Expr, Expr]


@dataclass(frozen=True)
class Quantization:
    name: str
    rule: CoproductRule
    relations: Tuple[Relation, ...] | None
    casimir: Expr | None
    params: Dict[str, float]

    @property
    def labels(self):
        return self.rule.labels


def undeformed_relations(labels=("J3", "J+", "J-", "I")) -> Tuple[Relation, ...]:
    J3, Jp, Jm, I = gens(*labels)
    rels = [
        ("[J3,J+]", commutator(J3, Jp), 2 * Jp),
        ("[J3,J-]", commutator(J3, Jm), -2 * Jm),
        ("[J+,J-]", commutator(Jp, Jm), J3 * 1.0),
    ]
    return tuple(rels) + _central_relations(I, (J3, Jp, Jm))


def _central_relations(I: Expr, others: Sequence[Gen]) -> Tuple[Relation, ...]:
    return tuple((f"[I,{g.label}]", commutator(I, g), 0.0 * ONE) for g in others)


def undeformed_casimir() -> Expr:
    J3, Jp, Jm, _ = gens("J3", "J+", "J-", "I")
    return J3 * J3 + 2 * (Jp * Jm + Jm * Jp)


def undeformed_rule() -> CoproductRule:
    labels = ("J3", "J+", "J-", "I")
    return CoproductRule("undeformed", labels, {l: primitive_terms(Gen(l)) for l in labels}, labels)


def quantization_Ia(a_p: float, a: float) -> Quantization:
    """Standard I+ subfamily (a- = b+ = 0) in the basis J3' = J3 - (a+/a) J+."""
    if a == 0:
        raise ValueError("a = 0 is not a Hopf-algebra limit of this quantization")
    labels = ("J3'", "J+", "J-", "I")
    X, Jp, Jm, I = gens(*labels)
    up, dn = Exp(a * X / 2), Exp(-a * X / 2)
    rule = CoproductRule("Ia", labels, {
        "J3'": primitive_terms(X),
        "J+": ((1.0, up, Jp), (1.0, Jp, dn)),
        "J-": ((1.0, up, Jm), (1.0, Jm, dn)),
        "I": primitive_terms(I),
    }, ("J3'", "I"))
    S = sinh_e(a * X / 2) / (a / 2)
    k = a_p / a
    rels = (
        ("[J3',J+]", commutator(X, Jp), 2 * Jp),
        ("[J3',J-]", commutator(X, Jm), -2 * Jm - k * S - k * k * Jp),
        ("[J+,J-]", commutator(Jp, Jm),
         sinh_e(a * X) / a + k * (math.expm1(a) / (2 * a)) * (dn * Jp + Jp * up)),
    ) + _central_relations(I, (X, Jp, Jm))
    cas = ((2 / (a * math.tanh(a))) * (cosh_e(a * X) - 1.0) + k * (S * Jp + Jp * S)
           + (k * k) * (Jp * Jp) + 2 * (Jp * Jm + Jm * Jp))
    return Quantization("Ia", rule, rels, cas, {"a_p": a_p, "a": a})


def quantization_Ib(a_p: float, b_p: float) -> Quantization:
    """Non-standard I+ subfamily (a = 0) with primitive J+ and I."""
    if a_p == 0:
        raise ValueError("a+ must be nonzero")
    labels = ("J3", "J+", "J-", "I")
    J3, Jp, Jm, I = gens(*labels)
    E = Exp(a_p * Jp)
    K = J3 - (b_p / a_p) * I
    rule = CoproductRule("Ib", labels, {
        "J+": primitive_terms(Jp),
        "I": primitive_terms(I),
        "J3": ((1.0, ONE, J3), (1.0, J3, E), (-b_p, I, Jp * Phi1(a_p * Jp))),
        "J-": ((1.0, ONE, Jm), (1.0, Jm, E), (-b_p / 2, K, I * E)),
    }, ("J+", "I"))
    rels = (
        ("[J3,J+]", commutator(J3, Jp), 2 * (Jp * Phi1(a_p * Jp))),
        ("[J3,J-]", commutator(J3, Jm), -2 * Jm + (a_p / 2) * (K * K)),
        ("[J+,J-]", commutator(Jp, Jm), J3 + b_p * (I * Jp * Phi1(a_p * Jp))),
    ) + _central_relations(I, (J3, Jp, Jm))
    Em = Exp(-a_p * Jp)
    F = Jp * Phi1(-a_p * Jp)           # (1 - e^{-a+ J+}) / a+
    cas = K * Em * K + 2 * (b_p / a_p) * (J3 * I) + 2 * (F * Jm) + 2 * (Jm * F) + 2 * (Em - 1.0)
    return Quantization("Ib", rule, rels, cas, {"a_p": a_p, "b_p": b_p})


def quantization_xxz(a: float, b: float) -> Quantization:
    """Standard family II: twisted XXZ quantum algebra."""
    if a == 0:
        raise ValueError("a must be nonzero (use the undeformed algebra)")
    labels = ("J3", "J+", "J-", "I")
    J3, Jp, Jm, I = gens(*labels)
    rule = CoproductRule("xxz", labels, {
        "J3": primitive_terms(J3),
        "I": primitive_terms(I),
        "J+": ((1.0, Exp((a * J3 - b * I) / 2), Jp), (1.0, Jp, Exp(-(a * J3 - b * I) / 2))),
        "J-": ((1.0, Exp((a * J3 + b * I) / 2), Jm), (1.0, Jm, Exp(-(a * J3 + b * I) / 2))),
    }, ("J3", "I"))
    rels = (
        ("[J3,J+]", commutator(J3, Jp), 2 * Jp),
        ("[J3,J-]", commutator(J3, Jm), -2 * Jm),
        ("[J+,J-]", commutator(Jp, Jm), sinh_e(a * J3) / a),
    ) + _central_relations(I, (J3, Jp, Jm))
    S = sinh_e(a * J3 / 2) / (a / 2)
    cas = math.cosh(a) * (S * S) + 2 * (math.sinh(a) / a) * (Jp * Jm + Jm * Jp)
    return Quantization("xxz", rule, rels, cas, {"a": a, "b": b})


def quantization_II(b_p: float, b: float) -> Quantization:
    """Non-standard family II at b- = 0 (closed-form coproduct, undeformed relations)."""
    labels = ("J3", "J+", "J-", "I")
    J3, Jp, Jm, I = gens(*labels)
    bI = b * I
    ph = I * Phi1(bI)                                 # (e^{bI}-1)/b
    ph_m = I * Phi1(-bI)                              # (1-e^{-bI})/b
    sh_half = I * Exp(-bI / 2) * Phi1(bI)             # sinh(bI/2)/(b/2)
    rule = CoproductRule("II", labels, {
        "I": primitive_terms(I),
        "J+": ((1.0, ONE, Jp), (1.0, Jp, Exp(bI))),
        "J3": ((1.0, ONE, J3), (1.0, J3, ONE), (b_p, Jp, ph)),
        "J-": ((1.0, ONE, Jm), (1.0, Jm, Exp(-bI)), (-b_p / 2, J3, ph_m),
               (-b_p ** 2 / 4, Jp, sh_half * sh_half)),
    }, ("I",))
    return Quantization("II", rule, undeformed_relations(labels), undeformed_casimir(), {"b_p": b_p, "b": b})


def lm_matrix(b_p: float, b_m: float, b: float) -> np.ndarray:
    """Lie bialgebra matrix of family II at I = 1, basis order (J3, J+, J-)."""
    return np.array([[0, b_p, b_m], [-b_m / 2, b, 0], [-b_p / 2, 0, -b]], dtype=complex)


def lm_rule(b_p: float, b_m: float, b: float) -> CoproductRule:
    """Delta(X_i) = 1 (x) X_i + sum_j X_j (x) E_ij(I), E(I) = exp(I * lm_matrix)."""
    labels = ("J3", "J+", "J-", "I")
    J3, Jp, Jm, I = gens(*labels)
    M = lm_matrix(b_p, b_m, b)
    X = (J3, Jp, Jm)
    images = {"I": primitive_terms(I)}
    for i, lab in enumerate(labels[:3]):
        terms = [(1.0, ONE, X[i])]
        for j in range(3):
            fn = (lambda lam, i=i, j=j: complex(scipy.linalg.expm(lam * M)[i, j]))
            terms.append((1.0, X[j], CentralFunc(fn, I, f"E{i + 1}{j + 1}")))
        images[lab] = tuple(terms)
    return CoproductRule("II-LM", labels, images, ("I",))


def lm_coproduct(b_p: float, b_m: float, b: float, rep: Representation) -> Dict[str, np.ndarray]:
    """Family II non-standard coproduct in rep (x) rep via the matrix exponential."""
    scalar_value(rep["I"])
    return coproduct_eval(lm_rule(b_p, b_m, b), rep)


def quantization_LM(b_p: float, b_m: float, b: float) -> Quantization:
    # the deformed relations at b- != 0 are not available in closed form
    rels = undeformed_relations() if b_m == 0 else None
    cas = undeformed_casimir() if b_m == 0 else None
    return Quantization("II-LM", lm_rule(b_p, b_m, b), rels, cas, {"b_p": b_p, "b_m": b_m, "b": b})


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

E11 = np.array([[1, 0], [0, 0]], dtype=complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)
E21 = np.array([[0, 0], [1, 0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
SIGMA3 = np.diag([1.0, -1.0]).astype(complex)


def fundamental_rep() -> Representation:
    return Representation("fundamental", 2, {"J3": SIGMA3.copy(), "J+": E12.copy(), "J-": E21.copy(), "I": ID2.copy()})


def deformed_rep_Ia(a_p: float, a: float) -> Representation:
    if a == 0:
        raise ValueError("a = 0 rejected: no Hopf-algebra limit")
    sh = 2 / a * math.sinh(a / 2)
    ch = math.cosh(a / 2)
    return Representation("Ia", 2, {
        "J3'": np.array([[1, -a_p / a], [0, -1]], dtype=complex),
        "J+": ch * E12,
        "J-": np.array([[0, a_p ** 2 / (4 * a ** 2) * (sh - ch)], [sh, 0]], dtype=complex),
        "I": ID2.copy(),
    }, {"a_p": a_p, "a": a})


def deformed_rep_Ib(a_p: float, b_p: float, lam: float = 1.0) -> Representation:
    """Two-dimensional representation of the non-standard I+ relations, I = lam."""
    if a_p == 0:
        raise ValueError("a+ must be nonzero")
    p = a_p / 4 * (1 + (b_p * lam / a_p) ** 2)
    return Representation("Ib", 2, {
        "J3": np.array([[1, -b_p * lam], [0, -1]], dtype=complex),
        "J+": E12.copy(),
        "J-": np.array([[p, b_p ** 2 * lam ** 2 / 4], [1, p]], dtype=complex),
        "I": lam * ID2,
    }, {"a_p": a_p, "b_p": b_p, "lambda": lam})


def deformed_rep_xxz(a: float, b: float = 0.0) -> Representation:
    if a == 0:
        raise ValueError("a = 0: use fundamental_rep")
    s = math.sqrt(math.sinh(a) / a)
    return Representation("xxz", 2, {"J3": SIGMA3.copy(), "J+": s * E12, "J-": s * E21, "I": ID2.copy()},
                          {"a": a, "b": b})


def default_rep(q: Quantization) -> Representation:
    p = q.params
    if q.name == "Ia":
        return deformed_rep_Ia(p["a_p"], p["a"])
    if q.name == "Ib":
        return deformed_rep_Ib(p["a_p"], p["b_p"])
    if q.name == "xxz":
        return deformed_rep_xxz(p["a"], p["b"])
    if q.name in ("II", "II-LM", "undeformed"):
        return fundamental_rep()
    raise KeyError(q.name)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def relations_residual(q: Quantization, images: Mapping[str, np.ndarray], dim: int) -> Dict[str, float]:
    if q.relations is None:
        raise MethodInapplicable(f"{q.name}: relations not available in closed form")
    be = MatrixBackend(dim)
    out = {}
    for name, lhs, rhs in q.relations:
        out[name] = residual(evaluate(lhs, images, be), evaluate(rhs, images, be))
    return out


def homomorphism_check(q: Quantization, rep: Representation | None = None) -> Dict[str, float]:
    """max residual of each relation on Delta(generators) in rep (x) rep."""
    rep = rep or default_rep(q)
    return relations_residual(q, coproduct_eval(q.rule, rep), rep.dim ** 2)


def coassociativity_check(rule: CoproductRule, method: str = "rep3", rep: Representation | None = None,
                          samples: int = 20, seed: int = 0) -> float:
    """max ||(Delta (x) id)Delta(X) - (id (x) Delta)Delta(X)||."""
    if method == "rep3":
        if rep is None:
            raise ValueError("rep3 needs a representation")
        left = iterated_coproduct(rule, rep, 3, side="left")
        right = iterated_coproduct(rule, rep, 3, side="right")
        return max(residual(left[l], right[l]) for l in rule.labels)
    if method == "primitive-scalar":
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(samples):
            vals = [{p: rng.uniform(-1, 1) for p in rule.primitives} for _ in range(3)]
            worst = max(worst, _slot_coassoc(rule, vals))
        return worst
    raise ValueError(f"unknown method {method!r}")


def _slot_images(rule: CoproductRule, slots: Sequence[Mapping[str, float]]) -> Dict[str, SlotForm]:
    """Generator images as 1-slot forms (len(slots) == 1) or Delta images over two slots."""
    n = len(slots)
    if n == 1:
        out = {}
        for l in rule.labels:
            if l in rule.primitives:
                out[l] = SlotForm(1, {(None,): slots[0][l]})
            else:
                out[l] = SlotForm(1, {(l,): 1.0})
        return out
    if n == 2:
        left, right = _slot_images(rule, slots[:1]), _slot_images(rule, slots[1:])
        return {l: _apply_slot(rule, l, left, right) for l in rule.labels}
    raise ValueError(n)


def _tensor_forms(x: SlotForm, y: SlotForm) -> SlotForm:
    out = SlotForm(x.n + y.n)
    for k1, v1 in x.terms.items():
        for k2, v2 in y.terms.items():
            k = k1 + k2
            out.terms[k] = out.terms.get(k, 0) + v1 * v2
    return out


def _apply_slot(rule, label, left_images, right_images) -> SlotForm:
    nl = next(iter(left_images.values())).n
    nr = next(iter(right_images.values())).n
    lb, rb = SlotBackend(nl), SlotBackend(nr)
    out = SlotForm(nl + nr)
    for c, le, re in rule[label]:
        t = _tensor_forms(evaluate(le, left_images, lb), evaluate(re, right_images, rb))
        for k, v in t.terms.items():
            out.terms[k] = out.terms.get(k, 0) + c * v
    return out


def _slot_coassoc(rule: CoproductRule, vals: Sequence[Mapping[str, float]]) -> float:
    s1, s2, s3 = vals
    left_img = _slot_images(rule, [s1, s2])
    right_img = _slot_images(rule, [s2, s3])
    one1, one3 = _slot_images(rule, [s1]), _slot_images(rule, [s3])
    worst = 0.0
    for l in rule.labels:
        lhs = _apply_slot(rule, l, left_img, one3)
        rhs = _apply_slot(rule, l, one1, right_img)
        keys = set(lhs.terms) | set(rhs.terms)
        for k in keys:
            worst = max(worst, abs(lhs.terms.get(k, 0) - rhs.terms.get(k, 0)))
    return worst


# ---------------------------------------------------------------------------
# R-matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantumRMatrix:
    which: str
    matrix: np.ndarray
    params: Dict[str, float]
    constants: Dict[str, float]

    @property
    def dim(self) -> int:
        return int(round(math.sqrt(self.matrix.shape[0])))

    def to_json(self) -> dict:
        return {"which": self.which, "params": self.params, "constants": self.constants,
                "matrix": matrix_to_json(self.matrix)}


def p_constant(b_p: float, b: float) -> float:
    """(b+/2)(e^b - 1)/b, continued to b+/2 at b = 0."""
    return b_p / 2 * float(_phi1_scalar(b).real)


def build_R(which: str, **params) -> QuantumRMatrix:
    if which == "Ia":
        a_p, a = params.get("a_p", 0.0), params["a"]
        if a == 0:
            raise ValueError("R(Ia) needs a != 0")
        q, h = math.exp(a), a_p / 2 * math.expm1(a) / a
        R = np.array([[1, h, -q * h, h * h], [0, q, 1 - q * q, q * h], [0, 0, q, -h], [0, 0, 0, 1]], dtype=complex)
        return QuantumRMatrix("Ia", R, {"a_p": a_p, "a": a}, {"q": q, "h": h})
    b_p, b = params.get("b_p", 0.0), params.get("b", 0.0)
    p = p_constant(b_p, b)
    if which == "II-matrix":
        em, ep = math.exp(-b), math.exp(b)
        R = np.array([[1, -em * p, p, -em * p * p], [0, em, 0, em * p], [0, 0, ep, -p], [0, 0, 0, 1]],
                     dtype=complex)
        return QuantumRMatrix("II-matrix", R, {"b_p": b_p, "b": b}, {"p": p})
    if which == "II-exp":
        rep = fundamental_rep()
        A = (b * rep["J3"] - b_p * rep["J+"]) / 2
        I = rep["I"]
        R = scipy.linalg.expm(np.kron(I, A)) @ scipy.linalg.expm(-np.kron(A, I))
        return QuantumRMatrix("II-exp", R, {"b_p": b_p, "b": b}, {"p": p})
    raise ValueError(f"unknown R-matrix {which!r}; choose Ia, II-exp or II-matrix")


def _legs(R: np.ndarray, d: int):
    Id = np.eye(d)
    P23 = np.kron(Id, flip_operator(d))
    R12 = np.kron(R, Id)
    R23 = np.kron(Id, R)
    R13 = P23 @ R12 @ P23
    return R12, R13, R23


def qybe_check(R) -> float:
    M = R.matrix if isinstance(R, QuantumRMatrix) else np.asarray(R)
    d = int(round(math.sqrt(M.shape[0])))
    R12, R13, R23 = _legs(M, d)
    return residual(R12 @ R13 @ R23, R23 @ R13 @ R12)


def triangularity_check(R, tol: float = TOL_EXACT) -> Tuple[str, float]:
    M = R.matrix if isinstance(R, QuantumRMatrix) else np.asarray(R)
    d = int(round(math.sqrt(M.shape[0])))
    P = flip_operator(d)
    norm = residual(M @ P @ M @ P, np.eye(M.shape[0]))
    return ("triangular" if norm < tol else "quasitriangular-proper"), norm


def intertwine_check(R, delta: Mapping[str, np.ndarray], labels: Sequence[str] | None = None) -> Dict[str, float]:
    """||R Delta(X) R^-1 - sigma Delta(X) sigma|| per generator."""
    M = R.matrix if isinstance(R, QuantumRMatrix) else np.asarray(R)
    if abs(np.linalg.det(M)) < 1e-14:
        raise np.linalg.LinAlgError("R-matrix is singular")
    Minv = np.linalg.inv(M)
    d = int(round(math.sqrt(M.shape[0])))
    P = flip_operator(d)
    labels = labels or list(delta)
    return {l: residual(M @ delta[l] @ Minv, P @ delta[l] @ P) for l in labels}


# ---------------------------------------------------------------------------
# Casimirs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CasimirReport:
    value: complex
    centrality: float
    scalar_residual: float


def casimir_check(q: Quantization, rep: Representation | None = None) -> CasimirReport:
    if q.casimir is None:
        raise MethodInapplicable(f"{q.name}: no Casimir available")
    rep = rep or default_rep(q)
    C = rep.evaluate(q.casimir)
    lam = complex(np.trace(C) / rep.dim)
    central = max(residual(C @ rep[l], rep[l] @ C) for l in q.labels)
    return CasimirReport(lam, central, residual(C, lam * np.eye(rep.dim)))


QUANTIZATIONS = {
    "Ia": quantization_Ia,
    "Ib": quantization_Ib,
    "xxz": quantization_xxz,
    "II": quantization_II,
    "II-LM": quantization_LM,
}
