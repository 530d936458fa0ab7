"""Acceptance criteria 1-10, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even under
output capture) or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import random
import time

import numpy as np
import pytest

from gl2bialg.bialgebra import (FAMILY_FREE, FAMILY_KEYS, PARAM_NAMES, ClassicalRMatrix, ParamPoint,
                                coboundary_delta, cocycle_check, cojacobi_constraints, constraint_values,
                                generic_cocommutator, jacobi_constraint_polys, mcybe_conditions, params_to_c,
                                random_rational, same_up_to_scalar, sample_point, schouten, table1)
from gl2bialg.contraction import REFERENCE_EXPONENTS, contract, minimal_exponents, table2
from gl2bialg.liealg import GL2, wedge_labels
from gl2bialg.poissonlie import (NotEmbeddable, constraint_combination, entry_brackets, kupershmidt_map,
                                 poisson_jacobi, reference_coordinate_brackets, reference_entry_brackets,
                                 sklyanin_table, table_difference)
from gl2bialg.quantumalg import (build_R, casimir_check, coassociativity_check, coproduct_eval, default_rep,
                                 homomorphism_check, intertwine_check, qybe_check, quantization_Ia,
                                 quantization_Ib, quantization_II, quantization_xxz, triangularity_check)
from gl2bialg.spinchain import ChainSpec, chain_hamiltonian, invariance_check, spectrum, two_site_block
from gl2bialg.symbolics import sym

SEED = 20261016


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail, elapsed, budget):
        line = (f"ACCEPTANCE {n:>2} {'PASS' if ok and elapsed < budget else 'FAIL'}  {title}: {detail}"
                f"  [{elapsed:.2f}s / {budget:g}s]")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert elapsed < budget, line
    return emit


def _draw_pairs(rng, n, lo=0.1, hi=2.0):
    """n draws of (x+, x) with x+ in [-2, 2] and |x| in [lo, hi]."""
    return [(float(rng.uniform(-2, 2)), float(rng.choice([-1, 1]) * rng.uniform(lo, hi))) for _ in range(n)]


def test_criterion_01_constraint_recovery(report):
    t0 = time.perf_counter()
    found = cojacobi_constraints(generic_cocommutator())
    ok = same_up_to_scalar(found, jacobi_constraint_polys())
    report(1, "co-Jacobi constraints", ok, ", ".join(map(str, found)), time.perf_counter() - t0, 1)


def test_criterion_02_mcybe_matches_jacobi(report):
    t0 = time.perf_counter()
    generic = params_to_c(dict(zip(PARAM_NAMES, sym(*PARAM_NAMES))))
    conds = [c.subs(generic) for c in mcybe_conditions()]
    ok = same_up_to_scalar(conds, jacobi_constraint_polys())
    report(2, "mCYBE conditions = constraints", ok, ", ".join(map(str, conds)), time.perf_counter() - t0, 1)


def test_criterion_03_table_regression(report):
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    bad = []
    J3JpJm = wedge_labels(GL2, "J3", "J+", "J-")
    for key in FAMILY_KEYS:
        for _ in range(20):
            pt = sample_point(rng, key)
            r_tab, d_tab = table1(key, **{n: getattr(pt, n) for n in FAMILY_FREE[key]})
            r = ClassicalRMatrix.from_params(pt.as_dict())
            if not (r.tensor == r_tab and coboundary_delta(r) == d_tab
                    and schouten(r) == J3JpJm * (pt.a * pt.a + pt.a_p * pt.a_m)):
                bad.append((key, pt))
    report(3, "bialgebra table regression", not bad, f"{4 * 20} exact points, {len(bad)} mismatches",
           time.perf_counter() - t0, 5)


def _random_point(rng):
    return ParamPoint(**{n: random_rational(rng) for n in PARAM_NAMES})


def test_criterion_04_poisson_layer(report):
    t0 = time.perf_counter()
    generic = sklyanin_table(ClassicalRMatrix.from_params())
    coords_ok = not table_difference(generic, reference_coordinate_brackets())
    entries_ok = not table_difference(entry_brackets(generic), reference_entry_brackets())
    span_ok = all(constraint_combination(p) is not None for p in poisson_jacobi(generic))

    rng = random.Random(SEED)
    points = [sample_point(rng, key) for key in FAMILY_KEYS for _ in range(5)]
    points += [_random_point(rng) for _ in range(20)]
    iff_ok = True
    for pt in points:
        t = sklyanin_table(ClassicalRMatrix.from_params(pt.as_dict()))
        jac = all(p.is_zero() for p in poisson_jacobi(t))
        iff_ok &= jac == (not any(constraint_values(pt).values()))

    kup_points = points + [ParamPoint(a_m=q, b_m=q, a=1) for q in (0, 1, -3)]
    kup_ok = True
    for pt in kup_points:
        try:
            kupershmidt_map(pt)
            kup_ok &= pt.a_m == pt.b_m
        except NotEmbeddable:
            kup_ok &= pt.a_m != pt.b_m
    ok = coords_ok and entries_ok and span_ok and iff_ok and kup_ok
    detail = (f"coordinates {coords_ok}, entries identically {entries_ok}, Jacobi iff constraints {iff_ok} "
              f"({len(points)} points, obstructions in constraint span {span_ok}), Kupershmidt {kup_ok}")
    report(4, "Poisson-Lie layer", ok, detail, time.perf_counter() - t0, 10)


def test_criterion_05_contraction(report):
    t0 = time.perf_counter()
    results = {}
    for family, ref in REFERENCE_EXPONENTS.items():
        b = contract(family)
        r, delta = table2(family)
        results[family] = (minimal_exponents("r", family) == ref == minimal_exponents("delta", family)
                           and b.r == r and b.delta == delta and all(b.checks().values()))
    nonstd = minimal_exponents("r", "II-nonstd")
    ok = all(results.values()) and (nonstd["n"], nonstd["n_p"], nonstd["n_m"]) == (2, 3, 3)
    detail = ", ".join(f"{k} {'ok' if v else 'MISMATCH'}" for k, v in results.items())
    report(5, "Lie bialgebra contractions", ok, f"(n, n+, n-) = {tuple(nonstd.values())}; {detail}",
           time.perf_counter() - t0, 5)


def test_criterion_06_quantum_ybe(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    ybe_Ia = max(qybe_check(build_R("Ia", a_p=ap, a=a)) for ap, a in _draw_pairs(rng, 10))
    II = [build_R("II-matrix", b_p=bp, b=b) for bp, b in _draw_pairs(rng, 10, lo=0.0)]
    ybe_II = max(qybe_check(R) for R in II)
    tri_II = max(triangularity_check(R)[1] for R in II)
    tri_Ia = triangularity_check(build_R("Ia", a_p=1.0, a=math.log(2)))[1]
    ok = ybe_Ia < 1e-12 and ybe_II < 1e-12 and tri_Ia > 1e-3 and tri_II < 1e-12
    detail = (f"QYBE Ia {ybe_Ia:.1e}, II {ybe_II:.1e}; ||R12R21-1|| Ia(1, ln 2) {tri_Ia:.3g}, "
              f"II max {tri_II:.1e}")
    report(6, "quantum Yang-Baxter", ok, detail, time.perf_counter() - t0, 5)


def test_criterion_07_intertwining(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 1)
    worst = {"Ia": 0.0, "II": 0.0}
    for ap, a in _draw_pairs(rng, 10):
        q = quantization_Ia(ap, a)
        res = intertwine_check(build_R("Ia", a_p=ap, a=a), coproduct_eval(q.rule, default_rep(q)))
        assert len(res) == 4
        worst["Ia"] = max(worst["Ia"], *res.values())
    for bp, b in _draw_pairs(rng, 10, lo=0.0):
        q = quantization_II(bp, b)
        res = intertwine_check(build_R("II-matrix", b_p=bp, b=b), coproduct_eval(q.rule, default_rep(q)))
        assert len(res) == 4
        worst["II"] = max(worst["II"], *res.values())
    ok = max(worst.values()) < 1e-12
    report(7, "intertwining", ok, f"max residual Ia {worst['Ia']:.1e}, II {worst['II']:.1e}",
           time.perf_counter() - t0, 5)


def test_criterion_08_hopf_consistency(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 2)
    worst = {}
    for x, y in _draw_pairs(rng, 5):
        for q, methods in ((quantization_Ia(x, y), ("rep3",)),
                           (quantization_Ib(y, x), ("rep3", "primitive-scalar")),
                           (quantization_xxz(y, x), ("rep3",)),
                           (quantization_II(x, y), ("rep3",))):
            rep = default_rep(q)
            vals = [max(homomorphism_check(q, rep).values())]
            vals += [coassociativity_check(q.rule, m, rep, seed=SEED) for m in methods]
            worst[q.name] = max(worst.get(q.name, 0.0), *vals)
    ok = max(worst.values()) < 1e-10
    report(8, "Hopf consistency", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()),
           time.perf_counter() - t0, 10)


def test_criterion_09_casimir(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for x, y in _draw_pairs(rng, 5):
        for q in (quantization_xxz(y, x), quantization_Ia(x, y)):
            c = casimir_check(q)
            worst = max(worst, c.centrality, c.scalar_residual)
    report(9, "Casimir centrality", worst < 1e-12, f"max residual {worst:.1e}", time.perf_counter() - t0, 2)


def test_criterion_10_spin_chains(report):
    t0 = time.perf_counter()
    block = spectrum(two_site_block(0.0, 0.0)).eigenvalues
    block_ok = np.allclose(block, [0, 8, 8, 8], atol=1e-12)
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for bonds in range(1, 6):
        for b, bp in rng.uniform(-1.5, 1.5, size=(10, 2)):
            res = invariance_check(chain_hamiltonian(ChainSpec(bonds, float(b), float(bp), "open")))
            assert len(res) == 4
            worst = max(worst, *res.values())
    periodic = max(invariance_check(chain_hamiltonian(ChainSpec(3, 1.0, 0.0, "periodic"))).values())
    ok = block_ok and worst < 1e-10 and periodic > 1e-3
    detail = (f"block spectrum {np.round(block.real, 12).tolist()}, open invariance max {worst:.1e} "
              f"(N <= 5, 10 draws), periodic b=1 N=3 {periodic:.3g}")
    report(10, "spin chains", ok, detail, time.perf_counter() - t0, 60)


@pytest.mark.slow
def test_criterion_10_twelve_site_smoke(report):
    t0 = time.perf_counter()
    H = chain_hamiltonian(ChainSpec(11, 0.5, 0.2, "open"))
    s = spectrum(H)
    ok = H.spec.sites == 12 and len(s.eigenvalues) == 4096 and s.is_real
    report(10, "spin chains, 12-site smoke run", ok, f"dim {H.spec.dim}, real spectrum {s.is_real}, "
           f"range [{s.eigenvalues[0].real:.4g}, {s.eigenvalues[-1].real:.4g}]", time.perf_counter() - t0, 300)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
