"""Command-line entry point: symbolic suites, series checks, functionals and the equivalence checks."""
from __future__ import annotations

import argparse
import json
import secrets
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64

MEASURE_FOR = {"Eq2": "radial", "Cq": "radial", "SUq11": "radial", "disc": "disc_negative",
               "disc_plus": "disc_positive", "disc_hI": "disc_hI"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    q: float = 0.5
    radius: int = 12
    tol: float = 1e-9
    measure: str | None = None
    json: bool = False
    out: str | None = None

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise UsageError(f"q must lie strictly inside (0,1), got {self.q}")
        if self.tol <= 0:
            raise UsageError("tolerance must be positive")
        if self.radius < 1:
            raise UsageError("radius must be at least 1")


def _emit(cfg: RunConfig, report: dict, lines: list):
    if cfg.out:
        Path(cfg.out).write_text(json.dumps(report, indent=2, default=str) + "\n")
    if cfg.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        for line in lines:
            print(line)


def _row_line(r: dict):
    mark = "ok  " if r["passed"] else "FAIL"
    res = r["residual"]
    res = f"{res:.2e}" if isinstance(res, float) else res
    return f"  {mark} {res:>10}  {r['relation']}  [{r.get('anchor', '')}]"


# -- verify-symbolic ---------------------------------------------------------------------

def cmd_verify_symbolic(cfg: RunConfig, suites, suite_table=None):
    from .catalog import SUITES
    table = suite_table or SUITES
    names = []
    for s in suites:
        names.extend(x for x in s.split(",") if x)
    if "all" in names:
        names = list(table)
    unknown = [n for n in names if n not in table]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(table)} or 'all'")
    report = {"command": "verify-symbolic", "suites": {}}
    lines, ok = [], True
    for n in names:
        checks = table[n]()
        rows = [c.as_dict() for c in checks]
        passed = all(c.passed for c in checks)
        ok &= passed
        report["suites"][n] = {"passed": passed, "checks": rows}
        lines.append(f"{n}: {'PASS' if passed else 'FAIL'} ({len(rows)} identities)")
        lines.extend(_row_line(r) for r in rows if not r["passed"])
    report["passed"] = ok
    _emit(cfg, report, lines)
    return EXIT_PASS if ok else EXIT_FAIL


# -- check-series ------------------------------------------------------------------------

def _values(text):
    if text is None:
        return None
    vals = []
    for part in text.split(","):
        part = part.strip()
        try:
            vals.append(complex(part.replace("i", "j")) if ("j" in part or "i" in part) else float(part))
        except ValueError:
            raise UsageError(f"not a number: {part!r}") from None
    return vals[0] if len(vals) == 1 else vals


def cmd_check_series(cfg: RunConfig, label, params: dict, export=None):
    from . import represent as rp
    if label not in rp.SERIES:
        raise UsageError(f"unknown series label {label!r}; choose from {rp.series_labels()}")
    try:
        p = rp.ParamSet(q=cfg.q, **{k: v for k, v in params.items() if v is not None})
    except ValueError as e:
        return _invalid(cfg, label, [str(e)])
    val = rp.validate_params(label, p)
    if not val.ok:
        return _invalid(cfg, label, val.violations)
    rep = rp.build_series(label, p, radius=cfg.radius)
    rel = rp.relation_residuals(rep, tol=cfg.tol)
    adj = rp.adjoint_residuals(rep, tol=cfg.tol)
    vacuous = rel.vacuous or adj.vacuous
    report = {"command": "check-series", "label": label, "q": cfg.q, "radius": cfg.radius,
              "relations": rel.as_dict(), "adjoint": adj.as_dict(), "vacuous": vacuous,
              "passed": rel.passed and adj.passed}
    lines = [f"{label} radius {cfg.radius}: relations max {rel.max_residual:.2e}, "
             f"adjoint max {adj.max_residual:.2e}"]
    for r in rel.rows + adj.rows:
        lines.append(_row_line(r.as_dict()))
    if vacuous:
        lines.append("warning: no interior vectors; the check is vacuous")
    if export:
        Path(export).mkdir(parents=True, exist_ok=True)
        for g in rep.matrices():
            rep.export_coo(g, Path(export) / f"{label}_{g}.coo")
        lines.append(f"matrices written to {export}")
    _emit(cfg, report, lines)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def _invalid(cfg, label, violations):
    report = {"command": "check-series", "label": label, "passed": False, "violations": list(violations)}
    _emit(cfg, report, [f"{label}: invalid parameters"] + [f"  {v}" for v in violations])
    return EXIT_INVALID


# -- functional ----------------------------------------------------------------------------

def load_measure(path, family, q):
    from .functionals import parse_measure_file
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read measure file: {e}") from None
    try:
        return parse_measure_file(text, MEASURE_FOR[family], q)
    except ValueError as e:
        raise UsageError(f"measure file {path}: {e}") from None


def cmd_functional(cfg: RunConfig, family, task, seed, n=100):
    from . import functionals as fu
    if family not in MEASURE_FOR:
        raise UsageError(f"unknown family {family!r}; choose from {sorted(MEASURE_FOR)}")
    if cfg.measure is None:
        raise UsageError("--measure is required")
    meas = load_measure(cfg.measure, family, cfg.q)
    alg = "disc" if family == "disc_hI" else family
    h = fu.FunctionalSpec(alg, meas)
    rng = np.random.default_rng(seed)
    report = {"command": "functional", "family": family, "functional": h.name, "task": task, "seed": seed}
    lines = [f"{h.name} on {alg}, seed {seed}"]
    if task == "eval":
        x = fu.element(alg, meas, {fu.identity_monomial(alg): {p: 1 for p in meas.lattice()}})
        v = fu.evaluate_h(h, x)
        report.update(value=str(v), passed=True)
        lines.append(f"h(1 on the k-range) = {float(v):.15g}")
        _emit(cfg, report, lines)
        return EXIT_PASS
    if task == "invariance":
        worst, rows = 0.0, []
        for Z in ("E", "F", "K", "Ki"):
            res = max((fu.invariance_residual(h, fu.random_element(alg, meas, rng), Z) for _ in range(n)),
                      default=0.0)
            worst = max(worst, res)
            rows.append({"relation": f"h(x <| {Z}) = eps({Z}) h(x)", "residual": res,
                         "passed": res <= cfg.tol, "anchor": "invariance"})
        report.update(rows=rows, max_residual=worst, passed=worst <= cfg.tol)
        lines.extend(_row_line(r) for r in rows)
        _emit(cfg, report, lines)
        return EXIT_PASS if report["passed"] else EXIT_FAIL
    if task == "gram":
        xs = [fu.random_element(alg, meas, rng) for _ in range(n)]
        if not xs:
            report.update(size=0, passed=True)
            _emit(cfg, report, [])
            return EXIT_PASS
        g = fu.positivity_gram(h, xs)
        ok = g.min_eigenvalue >= -1e-10
        report.update(size=len(xs), min_eigenvalue=g.min_eigenvalue, hermitian_defect=g.hermitian_defect,
                      passed=ok)
        lines.append(f"Gram {len(xs)}x{len(xs)}: min eigenvalue {g.min_eigenvalue:.3e}, "
                     f"hermitian defect {g.hermitian_defect:.1e}")
        _emit(cfg, report, lines)
        return EXIT_PASS if ok else EXIT_FAIL
    raise UsageError(f"unknown task {task!r}")


# -- proposition ------------------------------------------------------------------------------

def cmd_proposition(cfg: RunConfig, case, radius=None):
    from . import heisenberg as he
    if case not in he.PROPOSITION_CASES:
        raise UsageError(f"unknown case {case!r}; choose from {list(he.PROPOSITION_CASES)}")
    atoms, krange = None, (-40, 40)
    if cfg.measure:
        fam = {"eq2": "Eq2", "cq": "Cq", "suq11": "SUq11", "disc": "disc"}[case]
        meas = load_measure(cfg.measure, fam, cfg.q)
        atoms = [(float(a), float(w)) for a, w in meas.atoms]
        krange = meas.krange
    results = he.run_proposition(case, atoms, cfg.q, radius, cfg.tol, krange)
    ok = all(r.passed for r in results)
    report = {"command": "proposition", "case": case, "passed": ok, "summands": [r.as_dict() for r in results]}
    lines = []
    for r in results:
        head = f"{r.case}: GNS (dim {r.gns_dim}) vs {r.target} {'PASS' if r.passed else 'FAIL'}"
        if r.beta is not None:
            head += f"; beta = {r.beta}, B = {r.params['B'][0]:.12g}"
        lines.append(head)
        for rep in (r.report, r.formulas, r.adjoint):
            lines.extend(_row_line(x.as_dict()) for x in rep.rows)
    _emit(cfg, report, lines)
    return EXIT_PASS if ok else EXIT_FAIL


# -- entry point ---------------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="qcross", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--q", type=float, default=0.5)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--json", action="store_true", help="print the structured report")
    common.add_argument("--out", help="write the structured report to this path")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("verify-symbolic", parents=[common], help="exact identity suites")
    s.add_argument("--suite", action="append", default=[], help="suite name, comma list or 'all'")
    s = sub.add_parser("check-series", parents=[common], help="relations and adjoints of a series")
    s.add_argument("--label", required=True)
    s.add_argument("--radius", type=int, default=12)
    for name in ("A", "B", "H", "A1", "A2", "H1", "H2", "v", "w", "u"):
        s.add_argument(f"--{name}", help="scalar or comma-separated eigenvalues")
    s.add_argument("--epsilon", type=int, default=1)
    s.add_argument("--export", help="directory for coordinate-list matrices")
    s = sub.add_parser("functional", parents=[common], help="invariant functionals on q-grid measures")
    s.add_argument("--family", required=True, choices=sorted(MEASURE_FOR))
    s.add_argument("--measure", required=True)
    s.add_argument("--task", required=True, choices=("eval", "invariance", "gram"))
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s = sub.add_parser("proposition", parents=[common], help="GNS representation vs classified series")
    s.add_argument("--case", required=True)
    s.add_argument("--measure")
    s.add_argument("--radius", type=int, default=None)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        tol = args.tol
        if args.command == "verify-symbolic":
            cfg = RunConfig(args.command, args.q, 12, tol or 1e-9, None, args.json, args.out)
            return cmd_verify_symbolic(cfg, args.suite)
        if args.command == "check-series":
            cfg = RunConfig(args.command, args.q, args.radius, tol or 1e-9, None, args.json, args.out)
            params = {k: _values(getattr(args, k)) for k in ("A", "B", "H", "A1", "A2", "H1", "H2", "v", "w", "u")}
            params["epsilon"] = args.epsilon
            return cmd_check_series(cfg, args.label, params, args.export)
        if args.command == "functional":
            seed = args.seed if args.seed is not None else secrets.randbits(32)
            cfg = RunConfig(args.command, args.q, 12, tol or 1e-12, args.measure, args.json, args.out)
            n = args.n if args.n is not None else (100 if args.task == "invariance" else 20)
            if n < 0:
                raise UsageError("--n must be non-negative")
            print(f"seed {seed}", file=sys.stderr)
            return cmd_functional(cfg, args.family, args.task, seed, n)
        if args.command == "proposition":
            cfg = RunConfig(args.command, args.q, args.radius or 1, tol or 1e-9, args.measure, args.json, args.out)
            return cmd_proposition(cfg, args.case, args.radius)
    except UsageError as e:
        print(f"qcross: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"qcross: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
