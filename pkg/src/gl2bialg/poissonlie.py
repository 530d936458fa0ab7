"""Poisson-Lie structures on GL(2) through the Sklyanin bracket.

Functions on the group live in :class:`~gl2bialg.symbolics.ExpCoordExpr`
(local coordinates theta3, theta_p, theta_m, theta with v = e^(theta+theta3),
w = e^(theta-theta3)).  The group element is
T = exp(theta_m J-) exp(theta I) exp(theta3 J3) exp(theta_p J+).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from .bialgebra import PARAM_NAMES, ClassicalRMatrix, ParamPoint, jacobi_constraint_polys
from .liealg import GL2
from .symbolics import (COORDS, EXP_M2TH3, TH_M, TH_P, V, W, ExpCoordExpr, MultiPoly,
                        expcoord_derive, linear_combination, sym)


class NotEmbeddable(ValueError):
    """The bialgebra has no counterpart among Kupershmidt's GL(2) structures."""


@dataclass(frozen=True)
class VectorField:
    """sum_c comp[c] d/d(c) over the coordinates (theta3, theta_p, theta_m, theta)."""

    components: Tuple[ExpCoordExpr, ExpCoordExpr, ExpCoordExpr, ExpCoordExpr]

    @classmethod
    def from_map(cls, comps: Mapping[str, object]) -> "VectorField":
        return cls(tuple(ExpCoordExpr.coerce(comps.get(c, 0)) for c in COORDS))

    def __getitem__(self, coord: str) -> ExpCoordExpr:
        return self.components[COORDS.index(coord)]

    def __call__(self, f: ExpCoordExpr) -> ExpCoordExpr:
        out = ExpCoordExpr()
        for c, comp in zip(COORDS, self.components):
            if not comp.is_zero():
                out = out + comp * expcoord_derive(f, c)
        return out

    def commutator(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(self(o) - other(s) for s, o in zip(self.components, other.components)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


def invariant_fields() -> Tuple[Dict[str, VectorField], Dict[str, VectorField]]:
    """Left- and right-invariant vector fields of the four gl(2) generators."""
    vf = VectorField.from_map
    left = {
        "J3": vf({"theta3": 1, "theta_p": TH_P * -2}),
        "J+": vf({"theta_p": 1}),
        "J-": vf({"theta3": TH_P, "theta_p": -(TH_P * TH_P), "theta_m": EXP_M2TH3}),
        "I": vf({"theta": 1}),
    }
    right = {
        "J3": vf({"theta3": 1, "theta_m": TH_M * -2}),
        "J+": vf({"theta3": TH_M, "theta_m": -(TH_M * TH_M), "theta_p": EXP_M2TH3}),
        "J-": vf({"theta_m": 1}),
        "I": vf({"theta": 1}),
    }
    return left, right


# ---------------------------------------------------------------------------
# Poisson tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoissonTable:
    """Antisymmetric table of brackets between named functions."""

    names: Tuple[str, ...]
    brackets: Dict[Tuple[str, str], ExpCoordExpr]

    def __post_init__(self):
        full = {}
        for (x, y), val in self.brackets.items():
            full[(x, y)] = val
            full[(y, x)] = -val
        for x in self.names:
            full[(x, x)] = ExpCoordExpr()
        object.__setattr__(self, "brackets", full)

    def __getitem__(self, pair: Tuple[str, str]) -> ExpCoordExpr:
        return self.brackets[pair]

    def subs(self, mapping) -> "PoissonTable":
        return PoissonTable(self.names, {k: v.subs(mapping) for k, v in self.brackets.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.brackets.values())

    def pairs(self):
        return list(itertools.combinations(self.names, 2))

    def to_json(self) -> dict:
        return {f"{{{x},{y}}}": str(self.brackets[(x, y)]) for x, y in self.pairs()}


def _r_components(r) -> Dict[Tuple[int, int], MultiPoly]:
    t = r.tensor if isinstance(r, ClassicalRMatrix) else r
    if t.alg.name != "gl2":
        raise ValueError("the Sklyanin bracket here is built on GL(2)")
    return dict(t.items())


def sklyanin_table(r) -> PoissonTable:
    """Coordinate brackets of Lambda = sum r^{ij} (X^L_i (x) X^L_j - X^R_i (x) X^R_j)."""
    left, right = invariant_fields()
    L = [left[l] for l in GL2.labels]
    R = [right[l] for l in GL2.labels]
    comps = _r_components(r)
    out = {}
    for x, y in itertools.combinations(COORDS, 2):
        val = ExpCoordExpr()
        for (i, j), c in comps.items():
            val = val + (L[i][x] * L[j][y] - R[i][x] * R[j][y]) * c
        out[(x, y)] = val
    return PoissonTable(COORDS, out)


def poisson_bracket(table: PoissonTable, f: ExpCoordExpr, g: ExpCoordExpr) -> ExpCoordExpr:
    """{f, g} = sum_{a,b} d_a f d_b g {theta_a, theta_b} (table over coordinates)."""
    if tuple(table.names) != COORDS:
        raise ValueError("poisson_bracket needs a table over the group coordinates")
    df = {c: expcoord_derive(f, c) for c in COORDS}
    dg = {c: expcoord_derive(g, c) for c in COORDS}
    out = ExpCoordExpr()
    for x in COORDS:
        if df[x].is_zero():
            continue
        for y in COORDS:
            if x == y or dg[y].is_zero():
                continue
            out = out + df[x] * dg[y] * table[(x, y)]
    return out


def _bracket_coord(table: PoissonTable, coord: str, f: ExpCoordExpr) -> ExpCoordExpr:
    out = ExpCoordExpr()
    for m in COORDS:
        if m == coord:
            continue
        dm = expcoord_derive(f, m)
        if not dm.is_zero():
            out = out + dm * table[(coord, m)]
    return out


def jacobi_sums(table: PoissonTable) -> Dict[Tuple[str, str, str], ExpCoordExpr]:
    """Cyclic sums {x,{y,z}} + {y,{z,x}} + {z,{x,y}} for coordinate triples."""
    out = {}
    for x, y, z in itertools.combinations(COORDS, 3):
        s = (_bracket_coord(table, x, table[(y, z)])
             + _bracket_coord(table, y, table[(z, x)])
             + _bracket_coord(table, z, table[(x, y)]))
        out[(x, y, z)] = s
    return out


def poisson_jacobi(table: PoissonTable) -> List[MultiPoly]:
    """Coefficient polynomials of all Jacobi cyclic sums (empty iff Jacobi holds)."""
    obstructions = []
    for s in jacobi_sums(table).values():
        for _, c in sorted(s.items()):
            obstructions.append(c)
    return obstructions


# ---------------------------------------------------------------------------
# entries of T
# ---------------------------------------------------------------------------

#: A = v, B = v theta_p, C = v theta_m, D = v theta_p theta_m + w
ENTRIES = {"A": V, "B": V * TH_P, "C": V * TH_M, "D": V * TH_P * TH_M + W}


def entry_brackets(table: PoissonTable) -> PoissonTable:
    names = ("A", "B", "C", "D")
    out = {(x, y): poisson_bracket(table, ENTRIES[x], ENTRIES[y]) for x, y in itertools.combinations(names, 2)}
    return PoissonTable(names, out)


def reference_coordinate_brackets(params: Mapping[str, object] | None = None) -> PoissonTable:
    """Closed-form coordinate brackets for the generic six-parameter r-matrix."""
    g = _param_polys(params)
    a_p, a_m, b_p, b_m, a, b = (g[n] for n in PARAM_NAMES)
    h = Fraction(1, 2)
    one_minus = ExpCoordExpr.const(1) - EXP_M2TH3
    table = {
        ("theta_p", "theta3"): TH_P * (-a) + TH_P * TH_P * (a_m * h) - one_minus * (a_p * h),
        ("theta_m", "theta3"): TH_M * (-a) + TH_M * TH_M * (a_p * h) - one_minus * (a_m * h),
        ("theta_p", "theta_m"): (TH_P * a_m - TH_M * a_p) * EXP_M2TH3,
        ("theta_p", "theta"): TH_P * b + TH_P * TH_P * (b_m * h) + one_minus * (b_p * h),
        ("theta_m", "theta"): TH_M * (-b) + TH_M * TH_M * (b_p * h) + one_minus * (b_m * h),
        ("theta3", "theta"): (TH_M * b_p + TH_P * b_m) * (-h),
    }
    full = PoissonTable(COORDS, table)
    return PoissonTable(COORDS, {p: full[p] for p in full.pairs()})


def reference_entry_brackets(params: Mapping[str, object] | None = None) -> PoissonTable:
    """Closed-form quadratic brackets among the entries {A, B, C, D}."""
    g = _param_polys(params)
    a_p, a_m, b_p, b_m, a, b = (g[n] for n in PARAM_NAMES)
    h = Fraction(1, 2)
    A, B, C, D = (ENTRIES[k] for k in "ABCD")
    q = A * A + B * C - A * D          # A^2 + BC - AD
    s = D * D + B * C - A * D          # D^2 + BC - AD
    pp, pm = (a_p + b_p) * h, (a_p - b_p) * h
    mp, mm = (a_m + b_m) * h, (a_m - b_m) * h
    table = {
        ("A", "C"): A * C * (a + b) - C * C * pp + q * mm,
        ("A", "B"): A * B * (a - b) - B * B * mp + q * pm,
        ("B", "D"): B * D * (a + b) - s * pp + B * B * mm,
        ("C", "D"): C * D * (a - b) + C * C * pm - s * mp,
        ("A", "D"): B * C * (a * 2) - C * D * pp + A * C * pm - B * D * mp + A * B * mm,
        ("B", "C"): B * C * (b * 2) - C * D * pp - A * C * pm + B * D * mp + A * B * mm,
    }
    return PoissonTable(("A", "B", "C", "D"), table)


def _param_polys(params) -> Dict[str, MultiPoly]:
    if params is None:
        return dict(zip(PARAM_NAMES, sym(*PARAM_NAMES)))
    if isinstance(params, ParamPoint):
        params = params.as_dict()
    return {n: MultiPoly.coerce(params.get(n, 0)) for n in PARAM_NAMES}


def table_difference(t1: PoissonTable, t2: PoissonTable) -> Dict[Tuple[str, str], ExpCoordExpr]:
    """Nonzero entries of t1 - t2 on a common set of names."""
    if set(t1.names) != set(t2.names):
        raise ValueError("tables over different functions")
    diff = {}
    for p in t1.pairs():
        d = t1[p] - t2[p]
        if not d.is_zero():
            diff[p] = d
    return diff


def kupershmidt_map(pt: ParamPoint) -> Dict[str, Fraction]:
    """Parameters (r, s, u, v, w) of the matching Kupershmidt structure."""
    if pt.a_m != pt.b_m:
        raise NotEmbeddable(f"a- = {pt.a_m} differs from b- = {pt.b_m}")
    return {
        "r": pt.a + pt.b,
        "s": -(pt.a_p + pt.b_p) / 2,
        "u": pt.b_p - pt.a_p,
        "v": pt.b - pt.a,
        "w": 2 * pt.a_m,
    }


def constraint_combination(poly: MultiPoly):
    """Rational (x1, x2, x3) with poly = sum x_k g_k over the three constraints, or None."""
    return linear_combination(poly, jacobi_constraint_polys())
