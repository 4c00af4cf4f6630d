"""Batch command line: expansions, evaluations and verification reports.

Every command prints one JSON document (or a plain table with --pretty)
that echoes the effective configuration. Exit codes: 0 pass, 1 failed
verification, 2 usage error, 3 numeric or resource failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from .cbh import cbh_word
from .freealg import DomainError, Series, exp, is_grouplike, log, mul
from .freelie import is_primitive, lie_coordinates
from .holonomy import (
    SimplexIntegrator,
    chen_series,
    constant_path,
    kz_associator_extrapolated,
    log_holonomy_cbh,
    log_holonomy_cbh_direct,
    ode_transport,
    piecewise_constant_path,
)
from .lemurakami import lie_evaluate, log_phi_symbolic, phi_numeric, phi_symbolic, symbolic_lie_document
from .mzv import ResourceError, mzv_quadrature, mzv_series, word_to_composition
from .verify import SUITES, SuiteConfig, _random_polynomial_path, run_suites

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
MAX_DEGREE = 8
CASES = ("constant", "piecewise", "polynomial", "kz")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    degree: int | None = None
    alphabet: int | None = None
    tol: float | None = None
    eps: float | None = None
    steps: int = 20000
    seed: int = 0
    mode: str = "symbolic"
    word: str | None = None
    case: str | None = None
    suite: str | None = None
    out: str | None = None
    pretty: bool = False

    def validate(self):
        if self.degree is not None and not 0 <= self.degree <= MAX_DEGREE:
            raise UsageError(f"--degree must be in 0..{MAX_DEGREE}, got {self.degree}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.eps is not None and not 0 < self.eps < 0.5:
            raise UsageError(f"--eps must lie in (0, 1/2), got {self.eps}")
        if self.steps < 1:
            raise UsageError(f"--steps must be >= 1, got {self.steps}")
        if self.alphabet is not None and self.alphabet < 1:
            raise UsageError(f"--alphabet must be >= 1, got {self.alphabet}")

    def echo(self):
        return {k: v for k, v in asdict(self).items() if k not in ("out", "pretty")}


def _parse_letters(text, what):
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t != "")
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _mzv_evaluator(tol):
    return lambda a: mzv_quadrature(a, tol).value


# --- commands ---


def cmd_phi_expand(cfg: RunConfig):
    if cfg.degree is None:
        cfg.degree = 3
    if cfg.mode == "symbolic":
        return {"phi": phi_symbolic(cfg.degree).to_document()}, EXIT_PASS
    if cfg.tol is None:
        cfg.tol = 1e-10
    return {"phi": phi_numeric(cfg.degree, _mzv_evaluator(cfg.tol)).to_document()}, EXIT_PASS


def cmd_phi_log(cfg: RunConfig):
    if cfg.degree is None:
        cfg.degree = 3
    ell = log_phi_symbolic(cfg.degree)
    if cfg.mode == "symbolic":
        return {"log_phi": symbolic_lie_document(ell)}, EXIT_PASS
    if cfg.tol is None:
        cfg.tol = 1e-10
    numeric = lie_evaluate(ell, _mzv_evaluator(cfg.tol))
    primitive = is_primitive(numeric.expand(), tol=1e-8)
    return {"log_phi": numeric.to_document(), "primitive": primitive}, EXIT_PASS


def cmd_cbh(cfg: RunConfig):
    if cfg.word is None:
        raise UsageError("cbh needs --word, e.g. --word 0,1,1")
    w = _parse_letters(cfg.word, "--word")
    if not w:
        raise UsageError("--word must be nonempty")
    if min(w) < 0:
        raise UsageError("letters must be nonnegative")
    if cfg.alphabet is None:
        cfg.alphabet = max(w) + 1
    if max(w) >= cfg.alphabet:
        raise UsageError(f"letter {max(w)} outside alphabet of size {cfg.alphabet}")
    if cfg.degree is None:
        cfg.degree = len(w)
    if len(w) > cfg.degree:
        raise UsageError(f"word of length {len(w)} exceeds --degree {cfg.degree}")
    return {"cbh": cbh_word(w, cfg.alphabet, cfg.degree).to_document()}, EXIT_PASS


def cmd_mzv(cfg: RunConfig):
    if cfg.word is None:
        raise UsageError("mzv needs --word, e.g. --word 1,0")
    bits = _parse_letters(cfg.word, "--word")
    if cfg.tol is None:
        cfg.tol = 1e-10
    try:
        comp, sign = word_to_composition(bits)
    except DomainError as exc:
        raise UsageError(f"not admissible: {exc}") from None
    q = mzv_quadrature(bits, cfg.tol)
    s = mzv_series(comp, cfg.tol)
    doc = {
        "word": list(bits),
        "composition": list(comp.exponents),
        "sign": sign,
        "value": q.value,
        "quadrature": q.to_document(),
        "series": {**s.to_document(), "signed_value": sign * s.value},
        "difference": abs(q.value - sign * s.value),
    }
    return doc, EXIT_PASS


def _compare(name, residual, threshold):
    residual = float(residual)
    ok = residual <= threshold
    return {"name": name, "status": "pass" if ok else "fail", "residual": residual, "threshold": threshold}


def cmd_holonomy_compare(cfg: RunConfig):
    import random

    case = cfg.case
    if case not in CASES:
        raise UsageError(f"--case must be one of {', '.join(CASES)}")
    N = cfg.degree if cfg.degree is not None else (3 if case == "kz" else 4)
    cfg.degree = N
    checks, doc = [], {}
    integ = SimplexIntegrator()
    if case == "kz":
        if N < 2:
            raise UsageError("the kz case needs --degree >= 2")
        e1 = cfg.eps or 1e-3
        if cfg.tol is None:
            cfg.tol = 1e-10
        ode = kz_associator_extrapolated(N, (e1, e1 / 2), cfg.steps)
        lm = phi_numeric(N, _mzv_evaluator(cfg.tol))
        checks.append(_compare("ode-vs-series", lm.distance(ode), 1e-4))
        doc["ode"] = ode.to_document()
    else:
        if case == "constant":
            path = constant_path([1.0, 0.0])
            oracle = lie_coordinates(Series.generator(0, 2, N))
        elif case == "piecewise":
            path = piecewise_constant_path([(0.5, [1.0, 0.0]), (1.0, [0.0, 1.0])], 2)
            half = Fraction(1, 2)
            oracle = lie_coordinates(
                log(mul(exp(Series.generator(1, 2, N) * half), exp(Series.generator(0, 2, N) * half)))
            )
        else:
            path = _random_polynomial_path(random.Random(cfg.seed))
            oracle = None
        T = ode_transport(path, 0.0, 1.0, min(cfg.steps, 4000), N)
        chen = chen_series(path, 0.0, 1.0, integ, N)
        cbh_log = log_holonomy_cbh(path, 0.0, 1.0, integ, N)
        ode_log = lie_coordinates(log(T), tol=1e-9)
        checks.append(_compare("cbh-vs-ode", cbh_log.distance(ode_log), 1e-6))
        checks.append(_compare("chen-vs-ode", chen.distance(T), 1e-6))
        checks.append(_compare("chen-grouplike", 0.0 if is_grouplike(chen, tol=1e-8) else 1.0, 0.0))
        if oracle is not None:
            checks.append(_compare("cbh-vs-exact", cbh_log.distance(oracle), 1e-8 if case == "piecewise" else 1e-10))
        if N >= 1 and case != "piecewise":
            M = min(N, 3)
            direct = log_holonomy_cbh_direct(path, 0.0, 1.0, M)
            checks.append(_compare(f"direct-vs-cbh-N{M}", direct.distance(log_holonomy_cbh(path, 0.0, 1.0, integ, M)), 1e-9))
        doc["log_holonomy"] = cbh_log.to_document()
    checks.sort(key=lambda c: c["name"])
    failed = sum(c["status"] != "pass" for c in checks)
    doc.update({"checks": checks, "status": "pass" if not failed else "fail"})
    return doc, EXIT_FAIL if failed else EXIT_PASS


def cmd_verify(cfg: RunConfig):
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    scfg = SuiteConfig(cfg.degree, cfg.alphabet, cfg.tol, cfg.eps, cfg.steps, cfg.seed)
    report = run_suites(names, scfg)
    return report, EXIT_PASS if report["status"] == "pass" else EXIT_FAIL


# --- plumbing ---


def _common(parser):
    parser.add_argument("--degree", type=int)
    parser.add_argument("--alphabet", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--eps", type=float)
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--mode", choices=("symbolic", "numeric"), default="symbolic")
    parser.add_argument("--out", help="write the document here instead of stdout")
    parser.add_argument("--pretty", action="store_true", help="human-readable table")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kzlog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    phi = sub.add_parser("phi", help="expand Φ or log Φ")
    phi_sub = phi.add_subparsers(dest="action", required=True)
    for action in ("expand", "log"):
        _common(phi_sub.add_parser(action))

    cbh = sub.add_parser("cbh", help="cbh of one word in Lyndon coordinates")
    _common(cbh)
    cbh.add_argument("--word", required=True)

    mz = sub.add_parser("mzv", help="evaluate ω_a both ways")
    _common(mz)
    mz.add_argument("--word", required=True)

    hol = sub.add_parser("holonomy", help="cross-check holonomy pipelines")
    hol_sub = hol.add_subparsers(dest="action", required=True)
    cmp_ = hol_sub.add_parser("compare")
    _common(cmp_)
    cmp_.add_argument("--case", required=True, choices=CASES)

    ver = sub.add_parser("verify", help="run acceptance suites")
    _common(ver)
    ver.add_argument("suite", choices=sorted(SUITES) + ["all"])
    return p


COMMANDS = {
    "phi expand": cmd_phi_expand,
    "phi log": cmd_phi_log,
    "cbh": cmd_cbh,
    "mzv": cmd_mzv,
    "holonomy compare": cmd_holonomy_compare,
    "verify": cmd_verify,
}


def render_pretty(doc) -> str:
    lines = []
    config = doc.get("config", {})
    lines.append("  ".join(f"{k}={v}" for k, v in config.items() if v is not None))
    result = doc.get("result", {})
    for c in result.get("checks", []):
        lines.append(f"{c['status'].upper():4}  {c['name']:<40} {c['residual']:.3e}  <= {c['threshold']:.1e}")
    for key, value in result.items():
        if key == "checks":
            continue
        if isinstance(value, dict) and "terms" in value:
            lines.append(f"{key}:")
            if "constant" in value:
                lines.append(f"  {'1':<10} {value['constant']}")
            for t in value["terms"]:
                word = "".join(map(str, t["word"])) or "1"
                if "symbols" in t:
                    coeff = " + ".join(f"{s['num']}/{s['den']}·ω[{s['seq']}]" for s in t["symbols"])
                elif "value" in t:
                    coeff = t["value"]
                else:
                    coeff = f"{t['num']}/{t['den']}"
                lines.append(f"  {word:<10} {coeff}")
        elif isinstance(value, dict) and "error_bound" in value:
            lines.append(f"{key}: {value['value']!r} ± {value['error_bound']:.2e}")
        elif not isinstance(value, (dict, list)):
            lines.append(f"{key}: {value}")
    if "error" in doc:
        lines.append(f"error: {doc['error']}")
    return "\n".join(lines) + "\n"


def _emit(doc, cfg):
    text = render_pretty(doc) if cfg.pretty else json.dumps(doc, sort_keys=True, indent=2, allow_nan=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    name = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    cfg = RunConfig(
        command=name,
        degree=args.degree,
        alphabet=args.alphabet,
        tol=args.tol,
        eps=args.eps,
        steps=args.steps,
        seed=args.seed,
        mode=args.mode,
        word=getattr(args, "word", None),
        case=getattr(args, "case", None),
        suite=getattr(args, "suite", None),
        out=args.out,
        pretty=args.pretty,
    )
    code = EXIT_PASS
    try:
        cfg.validate()
        result, code = COMMANDS[name](cfg)
        doc = {"command": name, "config": cfg.echo(), "result": result}
    except UsageError as exc:
        print(f"kzlog: error: {exc}", file=sys.stderr)
        doc, code = {"command": name, "config": cfg.echo(), "error": str(exc)}, EXIT_USAGE
    except (ResourceError, ArithmeticError, DomainError) as exc:
        print(f"kzlog: numeric failure: {exc}", file=sys.stderr)
        doc, code = {"command": name, "config": cfg.echo(), "error": str(exc)}, EXIT_NUMERIC
    _emit(doc, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
