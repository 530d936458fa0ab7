"""Command-line front end: every check runs as one invocation and emits JSON.

Exit status: 0 when all verdicts pass, 2 when a verification fails, 1 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .bialgebra import (FAMILY_FREE, FAMILY_KEYS, PARAM_NAMES, ClassicalRMatrix, NotABialgebra, ParamPoint,
                        classify, coboundary_delta, cocycle_check, cojacobi_constraints, constraint_values,
                        discriminant, generic_cocommutator, jacobi_constraint_polys, mcybe_conditions,
                        params_to_c, same_up_to_scalar, sample_point, schouten, schouten_closed_form, table1)
from .contraction import (FAMILY_ALIASES, REFERENCE_EXPONENTS, ContractionError, contract, oscillator_normalize,
                          table2)
from .liealg import ALGEBRAS, GL2, ad_action, jacobi_violations, tensor_from_json, wedge_labels
from .poissonlie import (NotEmbeddable, constraint_combination, entry_brackets, kupershmidt_map, poisson_jacobi,
                         reference_coordinate_brackets, reference_entry_brackets, sklyanin_table,
                         table_difference)
from .quantumalg import (TOL_CHAINED, TOL_EXACT, MethodInapplicable, build_R, casimir_check,
                         coassociativity_check, coproduct_eval, default_rep,
                         homomorphism_check, intertwine_check, qybe_check,
                         quantization_Ia, quantization_Ib, quantization_II, quantization_LM,
                         quantization_xxz, relations_residual, triangularity_check)
from .spinchain import (ChainHamiltonian, ChainSpec, chain_hamiltonian, invariance_check, spectrum)
from .symbolics import parse_rational, sym


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: List[str], inputs: dict):
        self.data = {"command": command, "version": __version__, "inputs": inputs,
                     "outputs": {}, "residuals": {}, "verdicts": {}}

    def output(self, **kw):
        self.data["outputs"].update(kw)

    def check(self, name: str, value: float, tol: float, above: bool = False):
        """Record a residual; ``above`` asks for value > tol instead of value < tol."""
        self.data["residuals"][name] = float(value)
        ok = value > tol if above else value < tol
        self.data["verdicts"][name] = "pass" if ok else "fail"

    def verdict(self, name: str, ok: bool):
        self.data["verdicts"][name] = "pass" if ok else "fail"

    @property
    def passed(self) -> bool:
        return all(v == "pass" for v in self.data["verdicts"].values())

    def finish(self) -> dict:
        self.data["verdict"] = "pass" if self.passed else "fail"
        return self.data


def _point(items: List[str]) -> ParamPoint:
    try:
        return ParamPoint.from_assignments(items)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from None


def _values(items: Optional[List[str]]) -> Dict[str, object]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = parse_rational(v.strip())
    return out


# ---------------------------------------------------------------------------
# classical layer
# ---------------------------------------------------------------------------

def cmd_algebra(args, rep: Report):
    alg = ALGEBRAS[args.name]
    rep.output(algebra=alg.to_json())
    rep.verdict("jacobi", not jacobi_violations(alg))


def cmd_classify(args, rep: Report):
    pt = _point(args.assign)
    rep.output(point=pt.to_json(), constraints={k: str(v) for k, v in constraint_values(pt).items()})
    try:
        tag = classify(pt)
    except NotABialgebra as e:
        rep.output(error=str(e))
        rep.verdict("bialgebra", False)
        return
    rep.output(family=tag.to_json())
    rep.verdict("bialgebra", True)


def _family_regression(key: str, samples: int, seed: int, rep: Report):
    """Sampled exact points of a family against the reference table and the Schouten closed form."""
    rng = random.Random(seed)
    J3_Jp_Jm = wedge_labels(GL2, "J3", "J+", "J-")
    bad = []
    for _ in range(samples):
        pt = sample_point(rng, key)
        r_tab, d_tab = table1(key, **{n: getattr(pt, n) for n in FAMILY_FREE[key]})
        r = ClassicalRMatrix.from_params(pt.as_dict())
        ok = (r.tensor == r_tab and coboundary_delta(r) == d_tab
              and schouten(r) == J3_Jp_Jm * discriminant(pt))
        if not ok:
            bad.append(pt.to_json())
    rep.data["outputs"].setdefault("regression", {})[key] = {"samples": samples, "mismatches": bad}
    rep.verdict(f"table[{key}]", not bad)


def cmd_schouten(args, rep: Report):
    if args.family:
        keys = FAMILY_KEYS if args.family == "all" else (FAMILY_ALIASES.get(args.family, args.family),)
        if not set(keys) <= set(FAMILY_KEYS):
            raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILY_KEYS)} or all")
        for key in keys:
            _family_regression(key, args.samples, args.seed, rep)
        return
    if args.r_json:
        t = tensor_from_json(json.loads(Path(args.r_json).read_text()), GL2)
        r = ClassicalRMatrix(t)
    elif args.assign:
        pt = _point(args.assign)
        r = ClassicalRMatrix.from_params(pt.as_dict())
        rep.output(point=pt.to_json())
    else:
        # symbolic: the mCYBE conditions rewritten in bialgebra parameters
        r = ClassicalRMatrix.from_params()
        conds = [c.subs(params_to_c(dict(zip(PARAM_NAMES, sym(*PARAM_NAMES))))) for c in mcybe_conditions()]
        rep.output(mcybe_in_params=[str(c) for c in conds])
        rep.verdict("mcybe_vs_cojacobi", same_up_to_scalar(conds, jacobi_constraint_polys()))
    s = schouten(r)
    closed = schouten_closed_form(r.c_coordinates())
    invariant = all(ad_action(i, s).is_zero() for i in range(GL2.dim))
    rep.output(r=r.tensor.to_text(), schouten=s.to_text(),
               equation="CYBE" if s.is_zero() else ("mCYBE" if invariant else "none"),
               mcybe_conditions=[str(p) for p in mcybe_conditions()])
    rep.verdict("closed_form", s == closed)


def cmd_cocycle(args, rep: Report):
    delta = generic_cocommutator()
    if args.assign:
        pt = _point(args.assign)
        delta = generic_cocommutator(pt.as_dict())
        vals = constraint_values(pt)
        rep.output(point=pt.to_json(), constraints={k: str(v) for k, v in vals.items()})
        rep.verdict("cojacobi", not any(vals.values()))
    else:
        found = cojacobi_constraints(delta)
        rep.output(cojacobi_constraints=[str(p) for p in found])
        rep.verdict("constraints", same_up_to_scalar(found, jacobi_constraint_polys()))
    rep.output(delta=delta.to_json())
    rep.verdict("cocycle", bool(cocycle_check(delta)))


def cmd_poisson(args, rep: Report):
    pt = _point(args.assign) if args.assign else None      # no point: generic symbolic parameters
    if pt is not None:
        rep.output(point=pt.to_json())
    if args.action == "kupershmidt":
        if pt is None:
            raise UsageError("kupershmidt needs a parameter point")
        try:
            rep.output(kupershmidt={k: str(v) for k, v in kupershmidt_map(pt).items()})
            rep.verdict("embeddable", True)
        except NotEmbeddable as e:
            rep.output(error=str(e))
            rep.verdict("embeddable", False)
        return
    table = sklyanin_table(ClassicalRMatrix.from_params(pt.as_dict() if pt else None))
    if args.action == "table":
        rep.output(table=table.to_json())
        rep.verdict("reference", not table_difference(table, reference_coordinate_brackets(pt)))
    elif args.action == "jacobi":
        obs = [o for o in poisson_jacobi(table) if not o.is_zero()]
        rep.output(obstructions=[str(o) for o in obs])
        if pt is None:
            combos = [constraint_combination(o) for o in obs]
            rep.output(constraint_combinations=[[str(x) for x in c] if c else None for c in combos])
            rep.verdict("in_constraint_span", all(c is not None for c in combos))
        else:
            rep.verdict("jacobi", not obs)
    elif args.action == "entries":
        entries = entry_brackets(table)
        rep.output(entries=entries.to_json())
        rep.verdict("reference", not table_difference(entries, reference_entry_brackets(pt)))


def _contract_one(family: str, args, rep: Report, prefix: str = ""):
    try:
        b = contract(family)
    except (KeyError, ContractionError) as e:
        raise UsageError(str(e).strip("'\"")) from None
    if b.family in REFERENCE_EXPONENTS:
        r_ref, d_ref = table2(b.family)
        rep.verdict(f"{prefix}reference_r", b.r == r_ref)
        rep.verdict(f"{prefix}reference_delta", b.delta == d_ref)
        rep.verdict(f"{prefix}reference_exponents",
                    b.ledger["r"] == REFERENCE_EXPONENTS[b.family] == b.ledger["delta"])
    if args.normalize:
        b = oscillator_normalize(b, args.normalize, _values(args.values) or None)
    for name, ok in b.checks().items():
        rep.verdict(f"{prefix}{name}", ok)
    return b.to_json()


def cmd_contract(args, rep: Report):
    if args.family == "all":
        if args.normalize:
            raise UsageError("--normalize needs a single family")
        rep.output(contracted={f: _contract_one(f, args, rep, f"{f}:") for f in sorted(REFERENCE_EXPONENTS)})
    else:
        rep.output(contracted=_contract_one(args.family, args, rep))


# ---------------------------------------------------------------------------
# quantum layer
# ---------------------------------------------------------------------------

def _quantization(args):
    w = args.which
    if w == "Ia":
        return quantization_Ia(args.aplus, args.a)
    if w == "Ib":
        return quantization_Ib(args.aplus, args.bplus)
    if w == "xxz":
        return quantization_xxz(args.a, args.b)
    if w == "II":
        return quantization_II(args.bplus, args.b)
    if w == "II-LM":
        return quantization_LM(args.bplus, args.bminus, args.b)
    raise UsageError(f"unknown quantization {w!r}")


def _draws(args) -> List[Dict[str, float]]:
    """Parameter sets: the flags themselves, or --draws random ones from --seed."""
    base = {"a_p": args.aplus, "a": args.a, "b_p": args.bplus, "b": args.b}
    if not args.draws:
        return [base]
    rng = np.random.default_rng(args.seed)
    out = []
    for _ in range(args.draws):
        s = rng.choice([-1.0, 1.0], size=2)
        out.append({"a_p": float(rng.uniform(-2, 2)), "a": float(s[0] * rng.uniform(0.1, 2)),
                    "b_p": float(rng.uniform(-2, 2)), "b": float(s[1] * rng.uniform(0.1, 2))})
    return out


def _ybe(which: str, p: Dict[str, float], rep: Report, tol: float):
    R = build_R(which, **p)
    kind, norm = triangularity_check(R)
    res = {"qybe": qybe_check(R), "R12R21-1": norm}
    if which.startswith("II"):
        other = build_R("II-exp" if which == "II-matrix" else "II-matrix", b_p=p["b_p"], b=p["b"])
        res["exp_vs_matrix"] = float(np.max(np.abs(R.matrix - other.matrix)))
    return R, kind, res


def cmd_quantum(args, rep: Report):
    tol = args.tol
    act = args.action
    if act in ("ybe", "intertwine"):
        which = {"II": "II-matrix"}.get(args.which, args.which)
        if which not in ("Ia", "II-matrix", "II-exp"):
            raise UsageError(f"{act} supports --which Ia, II, II-matrix or II-exp")
        worst: Dict[str, float] = {}
        kinds = set()
        points = _draws(args)
        for p in points:
            R, kind, res = _ybe(which, p, rep, tol)
            kinds.add(kind)
            if act == "intertwine":
                q = quantization_Ia(p["a_p"], p["a"]) if which == "Ia" else quantization_II(p["b_p"], p["b"])
                res = {f"intertwine[{l}]": v
                       for l, v in intertwine_check(R, coproduct_eval(q.rule, default_rep(q))).items()}
            for k, v in res.items():
                worst[k] = max(worst.get(k, 0.0), v)
        rep.output(points=points, triangularity=sorted(kinds))
        if len(points) == 1:
            rep.output(R=R.to_json())
        for k, v in worst.items():
            if k == "R12R21-1":
                rep.data["residuals"][k] = v
            else:
                rep.check(k, v, tol or TOL_EXACT)
        if act == "ybe":
            rep.verdict("triangularity", kinds == ({"quasitriangular-proper"} if which == "Ia" else {"triangular"}))
        return
    q = _quantization(args)
    rep_ = default_rep(q)
    if act == "rep":
        rep.output(representation=rep_.to_json())
        if q.relations is not None:
            rep.check("relations", max(relations_residual(q, rep_.matrices, rep_.dim).values()), tol or TOL_EXACT)
            rep.check("homomorphism", max(homomorphism_check(q, rep_).values()), tol or TOL_CHAINED)
    elif act == "coassoc":
        try:
            r = coassociativity_check(q.rule, args.method, rep_, samples=args.samples, seed=args.seed)
        except MethodInapplicable as e:
            raise UsageError(str(e)) from None
        rep.output(method=args.method)
        rep.check("coassociativity", r, tol or TOL_CHAINED)
    elif act == "casimir":
        try:
            c = casimir_check(q, rep_)
        except MethodInapplicable as e:
            raise UsageError(str(e)) from None
        rep.output(value=[c.value.real, c.value.imag])
        rep.check("centrality", c.centrality, tol or TOL_EXACT)
        rep.check("scalar", c.scalar_residual, tol or TOL_EXACT)


# ---------------------------------------------------------------------------
# spin chains
# ---------------------------------------------------------------------------

def _load_chain(path: str) -> ChainHamiltonian:
    data = json.loads(Path(path).read_text())
    if "outputs" in data:      # a report written by 'chain build --out'
        data = data["outputs"]["hamiltonian"]
    return ChainHamiltonian.from_json(data)


def cmd_chain(args, rep: Report):
    if args.action == "invariance" and args.draws:
        if args.file:
            raise UsageError("--draws builds its own chains; drop the file argument")
        rng = np.random.default_rng(args.seed)
        worst: Dict[str, float] = {}
        for bonds in range(1, args.bonds + 1):
            for _ in range(args.draws):
                b, b_p = (float(x) for x in rng.uniform(-1.5, 1.5, size=2))
                H = chain_hamiltonian(ChainSpec(bonds, b, b_p, args.boundary))
                for l, v in invariance_check(H).items():
                    worst[l] = max(worst.get(l, 0.0), v)
        rep.output(bonds=list(range(1, args.bonds + 1)), draws=args.draws, boundary=args.boundary)
        for l, v in worst.items():
            rep.check(f"invariance[{l}]", v, args.tol or TOL_CHAINED)
        return
    H = _load_chain(args.file) if args.file else chain_hamiltonian(
        ChainSpec(args.bonds, args.b, args.bplus, args.boundary))
    rep.output(spec=H.spec.to_json(), hermitian=H.is_hermitian)
    if args.action == "build":
        rep.output(hamiltonian=H.to_json())
    elif args.action == "spectrum":
        rep.output(spectrum=spectrum(H).to_json())
    elif args.action == "invariance":
        for l, v in invariance_check(H).items():
            rep.check(f"invariance[{l}]", v, args.tol or TOL_CHAINED)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # Shared options are accepted before or after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="override the default tolerance")

    p = argparse.ArgumentParser(prog="gl2bialg", parents=[common],
                                description="gl(2) Lie bialgebras, contractions and quantizations")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kw):
        s = sub.add_parser(name, parents=[common], **kw)
        s.set_defaults(fn=fn)
        return s

    s = add("algebra", cmd_algebra, help="structure constants")
    s.add_argument("action", choices=["show"])
    s.add_argument("--name", choices=sorted(ALGEBRAS), default="gl2")

    s = add("classify", cmd_classify, help="family and type of a parameter point")
    s.add_argument("assign", nargs="+", metavar="NAME=VALUE")

    s = add("schouten", cmd_schouten, help="Schouten bracket of an r-matrix")
    s.add_argument("assign", nargs="*", metavar="NAME=VALUE")
    s.add_argument("--r-json", help="r-matrix as a tensor JSON file")
    s.add_argument("--family", help="regress sampled points of a family (or all) against the bialgebra table")
    s.add_argument("--samples", type=int, default=20)

    s = add("cocycle-check", cmd_cocycle, help="cocycle and co-Jacobi checks")
    s.add_argument("assign", nargs="*", metavar="NAME=VALUE")

    s = add("poisson", cmd_poisson, help="Sklyanin brackets on GL(2)")
    s.add_argument("action", choices=["table", "jacobi", "entries", "kupershmidt"])
    s.add_argument("assign", nargs="*", metavar="NAME=VALUE")

    s = add("contract", cmd_contract, help="contraction gl(2) -> h4")
    s.add_argument("--family", required=True, help="family key, or all")
    s.add_argument("--normalize", choices=["remove_beta_p", "standard_II"])
    s.add_argument("--values", nargs="*", metavar="NAME=VALUE")

    s = add("quantum", cmd_quantum, help="representations, R-matrices and Hopf checks")
    s.add_argument("action", choices=["rep", "ybe", "intertwine", "coassoc", "casimir"])
    s.add_argument("--which", required=True, help="Ia, Ib, xxz, II, II-LM (ybe/intertwine: Ia, II, II-exp)")
    for flag in ("a", "aplus", "b", "bplus", "bminus"):
        s.add_argument(f"--{flag}", type=float, default=0.0)
    s.add_argument("--method", choices=["rep3", "primitive-scalar"], default="rep3")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--draws", type=int, default=0, help="ybe/intertwine: random parameter draws")

    s = add("chain", cmd_chain, help="deformed spin chains")
    s.add_argument("action", choices=["build", "spectrum", "invariance"])
    s.add_argument("file", nargs="?", help="report or Hamiltonian JSON from 'chain build --out'")
    s.add_argument("--bonds", type=int, default=1)
    s.add_argument("--b", type=float, default=0.0)
    s.add_argument("--bplus", type=float, default=0.0)
    s.add_argument("--boundary", choices=["open", "periodic"], default="open")
    s.add_argument("--draws", type=int, default=0,
                   help="invariance: random (b, b+) draws for every chain of 1..--bonds bonds")
    return p


def run(argv: List[str]) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (0 if e.code == 0 else 1), None
    for k, v in (("out", None), ("seed", 0), ("tol", None)):
        if not hasattr(args, k):
            setattr(args, k, v)
    report = Report(list(argv), {k: v for k, v in vars(args).items() if k != "fn"})
    try:
        args.fn(args, report)
    except (UsageError, ValueError, KeyError, FileNotFoundError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"gl2bialg: error: {msg}", file=sys.stderr)
        return 1, None
    data = report.finish()
    return (0 if report.passed else 2), data


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, data = run(argv)
    if data is not None:
        text = json.dumps(data, indent=2, sort_keys=True, default=str)
        out = data["inputs"].get("out")
        if out:
            Path(out).write_text(text + "\n")
        else:
            print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
