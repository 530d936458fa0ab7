"""Exact arithmetic kernels.

Rationals are :class:`fractions.Fraction`.  :class:`MultiPoly` is a sparse
polynomial over the deformation parameters with rational coefficients; it
allows negative exponents so that division by a monomial (needed for the
``a_p`` denominators of family I+) stays exact.  :class:`LaurentPoly`
groups a polynomial by powers of the contraction parameter ``eps`` and
:class:`ExpCoordExpr` is the ring of functions on GL(2) used by the
Poisson-Lie layer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Mapping, Sequence, Tuple, Union

Rational = Fraction

#: canonical ordering of the global symbols
VARIABLES = (
    "a_p", "a_m", "b_p", "b_m", "a", "b",
    "beta_p", "beta_m", "alpha_p", "vartheta", "xi",
    "tau1", "tau2",
    "c1", "c2", "c3", "c4", "c5", "c6",
    "eps",
)
_RANK = {name: i for i, name in enumerate(VARIABLES)}

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]


def _var_key(name: str):
    return (_RANK.get(name, len(VARIABLES)), name)


def parse_rational(text) -> Fraction:
    """Parse ``"3/2"``, ``"-4"``, ``"0.25"`` (exactly) or an int/Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not exact; pass a string such as '1/3'")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda t: _var_key(t[0])))


class MultiPoly:
    """Sparse Laurent polynomial in named symbols with Fraction coefficients.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[mono] = c
        self._terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        if power == 0:
            return cls.const(1)
        return cls({((name, power),): 1})

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, (int, Fraction, _RationalABC)):
            return cls.const(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiPoly")

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._terms), default=0)

    def collect(self, name: str) -> Dict[int, "MultiPoly"]:
        """Group terms by the exponent of ``name``."""
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            e = dict(m).get(name, 0)
            rest = tuple((v, k) for v, k in m if v != name)
            out.setdefault(e, {})[rest] = c
        return {e: MultiPoly(t) for e, t in out.items()}

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return MultiPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiPoly({m: c * other for m, c in self._terms.items()})
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultiPoly(terms)

    __rmul__ = __mul__

    def inverse(self) -> "MultiPoly":
        """Exact inverse; only single-term polynomials are invertible."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not an invertible monomial")
        (m, c), = self._terms.items()
        return MultiPoly({tuple((v, -e) for v, e in m): 1 / c})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * MultiPoly.coerce(other).inverse()

    def __rtruediv__(self, other):
        return MultiPoly.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # substitution -------------------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Substitute symbols by polynomials or rationals."""
        values = {k: MultiPoly.coerce(v) for k, v in mapping.items()}
        cache: Dict[Tuple[str, int], MultiPoly] = {}
        acc: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            term = MultiPoly.const(c)
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = values[v] ** e
                    term = term * cache[key]
                else:
                    term = term * MultiPoly.var(v, e)
            for tm, tc in term._terms.items():
                acc[tm] = acc.get(tm, 0) + tc
        return MultiPoly(acc)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Evaluate at a point that assigns every occurring symbol."""
        missing = self.variables() - set(point)
        if missing:
            raise KeyError(f"no value for {sorted(missing)}")
        return self.subs(point).constant_value()

    def normalized(self) -> "MultiPoly":
        """Scale so the leading term (canonical order) has coefficient 1."""
        if self.is_zero():
            return self
        lead = self._terms[self._sorted_monomials()[0]]
        return self * (1 / lead)

    def proportional_to(self, other: "MultiPoly") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized() == other.normalized()

    # text ---------------------------------------------------------------
    def _sorted_monomials(self):
        def key(m):
            return (-sum(e for _, e in m), [(_var_key(v), -e) for v, e in m])
        return sorted(self._terms, key=key)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in self._sorted_monomials():
            c = self._terms[m]
            factors = [v if e == 1 else f"{v}^{e}" for v, e in m]
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{format_rational(mag)}*{body}"
            else:
                body = format_rational(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


def sym(*names: str):
    """Return ``MultiPoly`` variables; a single name gives a single poly."""
    polys = tuple(MultiPoly.var(n) for n in names)
    return polys[0] if len(polys) == 1 else polys


_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def parse_poly(text: str) -> MultiPoly:
    """Parse the canonical text form produced by ``str(MultiPoly)``.

    Accepts sums of terms ``coef*x^k*y`` with rational coefficients; negative
    exponents must be written ``x^-2``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return MultiPoly()
    # split on +/- that are not part of an exponent "^-"
    tokens = re.split(r"(?<!\^)\s*([+-])\s*", s)
    out = MultiPoly()
    sign = 1
    for tok in tokens:
        if tok == "":
            continue
        if tok in "+-":
            sign = sign * (-1 if tok == "-" else 1)
            continue
        term = MultiPoly.const(sign)
        for factor in tok.split("*"):
            factor = factor.strip()
            m = _FACTOR_RE.match(factor)
            if m:
                term = term * MultiPoly.var(m.group(1), int(m.group(2) or 1))
            else:
                term = term * parse_rational(factor)
        out = out + term
        sign = 1
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials in eps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivergenceReport:
    """Negative-degree part of a Laurent expansion that blocks the limit."""

    terms: Dict[int, MultiPoly]

    @property
    def degrees(self):
        return sorted(self.terms)

    @property
    def min_degree(self) -> int:
        return min(self.terms)

    def __str__(self):
        return "diverges: " + ", ".join(f"eps^{d}: {self.terms[d]}" for d in self.degrees)


class LaurentPoly:
    """Polynomial in ``eps`` and ``1/eps`` with MultiPoly coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, MultiPoly] | None = None):
        self._coeffs = {int(d): MultiPoly.coerce(c) for d, c in (coeffs or {}).items()
                        if not MultiPoly.coerce(c).is_zero()}

    @classmethod
    def from_multipoly(cls, p: MultiPoly, var: str = "eps") -> "LaurentPoly":
        return cls(MultiPoly.coerce(p).collect(var))

    def to_multipoly(self, var: str = "eps") -> MultiPoly:
        out = MultiPoly()
        for d, c in self._coeffs.items():
            out = out + c * MultiPoly.var(var, d)
        return out

    @property
    def coeffs(self) -> Dict[int, MultiPoly]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def min_degree(self):
        return min(self._coeffs) if self._coeffs else None

    def coefficient(self, d: int) -> MultiPoly:
        return self._coeffs.get(d, MultiPoly())

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({d + k: c for d, c in self._coeffs.items()})

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: MultiPoly.coerce(other)})
        coeffs = dict(self._coeffs)
        for d, c in other._coeffs.items():
            coeffs[d] = coeffs.get(d, MultiPoly()) + c
        return LaurentPoly(coeffs)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({d: -c for d, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: MultiPoly.coerce(other)})
        coeffs: Dict[int, MultiPoly] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                coeffs[d1 + d2] = coeffs.get(d1 + d2, MultiPoly()) + c1 * c2
        return LaurentPoly(coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def limit(self):
        return laurent_limit(self)

    def __repr__(self):
        body = " + ".join(f"({c})*eps^{d}" for d, c in sorted(self._coeffs.items()))
        return f"LaurentPoly({body or '0'})"


def laurent_limit(x: LaurentPoly):
    """eps -> 0 limit: the degree-0 coefficient, or a DivergenceReport."""
    neg = {d: c for d, c in x.coeffs.items() if d < 0}
    if neg:
        return DivergenceReport(neg)
    return x.coefficient(0)


# ---------------------------------------------------------------------------
# Exponential-coordinate ring on GL(2)
# ---------------------------------------------------------------------------

#: v = exp(theta + theta3), w = exp(theta - theta3)
COORDS = ("theta3", "theta_p", "theta_m", "theta")

ExpKey = Tuple[int, int, int, int]  # (v, w, theta_p, theta_m) exponents


class ExpCoordExpr:
    """Polynomial in v^{+-1}, w^{+-1}, theta_p, theta_m with MultiPoly coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ExpKey, object] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = MultiPoly.coerce(c)
            if not c.is_zero():
                if k[2] < 0 or k[3] < 0:
                    raise ValueError("theta_p/theta_m exponents must be non-negative")
                clean[tuple(k)] = c
        self._terms: Dict[ExpKey, MultiPoly] = clean

    @classmethod
    def const(cls, c) -> "ExpCoordExpr":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def monomial(cls, v=0, w=0, tp=0, tm=0, coeff=1) -> "ExpCoordExpr":
        return cls({(v, w, tp, tm): coeff})

    @classmethod
    def coerce(cls, x) -> "ExpCoordExpr":
        if isinstance(x, ExpCoordExpr):
            return x
        return cls.const(x)

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> Dict[ExpKey, MultiPoly]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        other = ExpCoordExpr.coerce(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, MultiPoly()) + c
        return ExpCoordExpr(terms)

    __radd__ = __add__

    def __neg__(self):
        return ExpCoordExpr({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-ExpCoordExpr.coerce(other))

    def __rsub__(self, other):
        return ExpCoordExpr.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExpCoordExpr):
            c = MultiPoly.coerce(other)
            return ExpCoordExpr({k: v * c for k, v in self._terms.items()})
        terms: Dict[ExpKey, MultiPoly] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                terms[k] = terms.get(k, MultiPoly()) + c1 * c2
        return ExpCoordExpr(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ExpCoordExpr.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = ExpCoordExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def derive(self, var: str) -> "ExpCoordExpr":
        return expcoord_derive(self, var)

    def map_coefficients(self, fn) -> "ExpCoordExpr":
        return ExpCoordExpr({k: fn(c) for k, c in self._terms.items()})

    def subs(self, mapping) -> "ExpCoordExpr":
        return self.map_coefficients(lambda c: c.subs(mapping))

    def evaluate(self, coords: Mapping[str, float], params: Mapping[str, object] | None = None) -> float:
        """Numerical value at (theta3, theta_p, theta_m, theta)."""
        import math

        v = math.exp(coords["theta"] + coords["theta3"])
        w = math.exp(coords["theta"] - coords["theta3"])
        total = 0.0
        for (i, j, k, l), c in self._terms.items():
            cval = float(c.evaluate(params or {}))
            total += cval * v ** i * w ** j * coords["theta_p"] ** k * coords["theta_m"] ** l
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        names = ("v", "w", "th_p", "th_m")
        parts = []
        for k in sorted(self._terms, key=lambda k: (-sum(k), k)):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e]
            coeff = str(self._terms[k])
            if factors:
                parts.append(f"({coeff})*" + "*".join(factors))
            else:
                parts.append(f"({coeff})")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExpCoordExpr({self})"


def expcoord_derive(f: ExpCoordExpr, var: str) -> ExpCoordExpr:
    """Partial derivative with respect to a group coordinate.

    d/dtheta3: v -> v, w -> -w;  d/dtheta: v -> v, w -> w;
    d/dtheta_p, d/dtheta_m act on the polynomial part.
    """
    out: Dict[ExpKey, MultiPoly] = {}

    def put(k, c):
        out[k] = out.get(k, MultiPoly()) + c

    for (i, j, k, l), c in f.items():
        if var == "theta3":
            if i - j:
                put((i, j, k, l), c * (i - j))
        elif var == "theta":
            if i + j:
                put((i, j, k, l), c * (i + j))
        elif var == "theta_p":
            if k:
                put((i, j, k - 1, l), c * k)
        elif var == "theta_m":
            if l:
                put((i, j, k, l - 1), c * l)
        else:
            raise ValueError(f"unknown coordinate {var!r}; expected one of {COORDS}")
    return ExpCoordExpr(out)


# handy generators of the exponential-coordinate ring
V = ExpCoordExpr.monomial(v=1)
W = ExpCoordExpr.monomial(w=1)
TH_P = ExpCoordExpr.monomial(tp=1)
TH_M = ExpCoordExpr.monomial(tm=1)
#: exp(-2 theta3) = w / v
EXP_M2TH3 = ExpCoordExpr.monomial(v=-1, w=1)


def solve_rational(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Exact solution of rows @ x = rhs (free variables set to 0), or None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [v / p for v in aug[row]]
        for i in range(len(aug)):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(all(v == 0 for v in r[:-1]) and r[-1] != 0 for r in aug):
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return x


def linear_combination(target: MultiPoly, basis: Sequence[MultiPoly]):
    """Rational coefficients x with target = sum x_k basis[k], or None."""
    target = MultiPoly.coerce(target)
    monos = sorted({m for p in list(basis) + [target] for m, _ in p.items()}, key=str)
    rows = [[p.terms.get(m, Fraction(0)) for p in basis] for m in monos]
    rhs = [target.terms.get(m, Fraction(0)) for m in monos]
    if not monos:
        return [Fraction(0)] * len(basis)
    return solve_rational(rows, rhs)
