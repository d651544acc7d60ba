"""Command-line front end: ``freefield <command> [flags] [--format json|text]``.

Reports are deterministic: identical inputs give identical bytes. Timings are
left out unless ``--timing`` is passed.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Sequence

from . import __version__
from ._parse import ParseError
from .coeffring import RingError, u_mn
from .fock import FockError, Weight, parse_aelement
from .identities import (CHECKS, CheckResult, IdentityError, _compare, _flag, _ratio, check_eq_motion,
                         check_c2_refl11, check_h2, check_resonance, check_symmetry, check_vanishing,
                         conserved_currents, run_check)
from .macdonald import (MacdonaldError, MacdonaldParams, eigenvalue, integral_rep_poly, macdonald_apply,
                        macdonald_poly, verify_singular_macdonald)
from .screenings import (ScreeningError, c_coeff, c_coeff_direct, kappa_closed, kappa_sm, singular_vector,
                         structure_probe)
from .symalg import Partition, SymAlgError, basis_convert

__all__ = ["SCHEMA", "main", "run", "build_parser", "render"]

SCHEMA = "report.v1"

# input errors map to exit code 2
_INPUT_ERRORS = (ParseError, IdentityError, ScreeningError, MacdonaldError, FockError, SymAlgError,
                 RingError, ValueError, KeyError)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# ---------------------------------------------------------------------------
# commands: each returns (inputs, results, checks)


def _cmd_me(a) -> tuple[dict, dict, list[CheckResult]]:
    if (a.m is None) != (a.n is None):
        raise IdentityError("--m and --n go together")
    from .currents import wick_matrix_element
    h, hb = parse_aelement(a.h), parse_aelement(a.hbar)
    inputs = {"h": str(h), "hbar": str(hb), "nt": a.nt, "ns": a.ns}
    J = wick_matrix_element(h, hb, Weight.generic(), a.nt, a.ns)
    results: dict = {"generic": J.to_json()}
    checks: list[CheckResult] = []
    if a.m is not None:
        inputs.update(m=a.m, n=a.n)
        Jmn = wick_matrix_element(h, hb, Weight.special(a.m, a.n), a.nt, a.ns)
        results["at_mn"] = Jmn.to_json()
        c, p = u_mn(a.m, a.n)
        try:
            spec = J.subs_u(c, p, 0)
        except RingError as exc:
            results["specialized"] = None
            checks.append(_flag("me.specialize", {"m": a.m, "n": a.n}, True,
                                note=f"generic form singular at a_mn: {exc}"))
        else:
            results["specialized"] = spec.to_json()
            checks.append(_compare("me.specialize", {"m": a.m, "n": a.n}, spec, Jmn,
                                   note="generic form at u = u_mn vs direct evaluation"))
    return inputs, results, checks


def _cmd_singvec(a):
    sv = singular_vector(a.m, a.n, a.s)
    C = verify_singular_macdonald(a.m, a.n, a.s)
    inputs = {"m": a.m, "n": a.n, "s": a.s}
    results = {"level": sv.level, "a_element": sv.a_element.to_json(), "macdonald_constant": C.to_json(),
               "rectangle": [a.m - a.n + a.s] * a.s}
    return inputs, results, []


def _cmd_macdonald(a):
    lam = Partition.sorted(a.lam)
    P = macdonald_poly(lam)
    eig = eigenvalue(lam, lam.weight)
    check = _compare("macdonald.eigen", {"lambda": list(lam)},
                     macdonald_apply(P, MacdonaldParams(lam.weight)), P * eig)
    results = {"monomial": P.to_json(), "powersum": basis_convert(P, "powersum").to_json(),
               "eigenvalue": eig.to_json()}
    return {"lambda": list(lam)}, results, [check]


def _cmd_intrep(a):
    R = integral_rep_poly(a.s, a.sp)
    P = macdonald_poly((a.sp,) * a.s)
    ratio = _ratio(R, P)
    check = _flag("intrep", {"s": a.s, "sp": a.sp}, ratio is not None, "not proportional")
    results = {"integral": R.to_json(), "ratio": None if ratio is None else ratio.to_json()}
    return {"s": a.s, "sp": a.sp}, results, [check]


def _cmd_kappa(a):
    val = kappa_sm(a.s, a.m)
    closed = kappa_closed(a.s, a.m)
    check = _compare("kappa", {"s": a.s, "m": a.m}, val, closed, note="constant term vs product form")
    return {"s": a.s, "m": a.m}, {"kappa": val.to_json()}, [check]


def _cmd_ccoeff(a):
    kv = tuple(a.k)
    val = c_coeff(a.nu, kv)
    check = _compare("ccoeff", {"nu": a.nu, "k": list(kv)}, val, c_coeff_direct(kv),
                     note="constant term vs permutation rule")
    return {"nu": a.nu, "k": list(kv)}, {"c": val}, [check]


# per-check single-instance runners; None means the flag was not given
_SINGLE: dict[str, tuple[tuple[str, ...], Callable]] = {
    "eqmotion": (("nt",), lambda a: [check_eq_motion(_get(a.nt, 1))]),
    "conserved": (("k", "nt"), lambda a: [conserved_currents(_get(a.k, 0), _get(a.nt, 1))]),
    "c2refl11": (("nt",), lambda a: [check_c2_refl11(_get(a.nt, 1))]),
    "h2": (("kind", "nt"), lambda a: [check_h2(_get(a.kind, "reflection"), _get(a.nt, 2))]),
    "symmetry": (("kind", "nt", "ns"),
                 lambda a: [check_symmetry(_get(a.kind, "reflection_ts"), _get(a.nt, 1), _get(a.ns, 0))]),
    "resonance.level1": (("m", "n", "nt"),
                         lambda a: [check_resonance("level1", _need(a.m, "m"), _need(a.n, "n"), 1,
                                                    _get(a.nt, 2))]),
    "resonance.even": (("m", "n", "s", "nt"),
                       lambda a: [check_resonance("even", _need(a.m, "m"), _need(a.n, "n"),
                                                  _need(a.s, "s"), _get(a.nt, 2))]),
    "vanishing": (("m", "n", "s", "nt"),
                  lambda a: [check_vanishing(_need(a.m, "m"), _need(a.n, "n"), _need(a.s, "s"),
                                             _get(a.nt, 2))]),
}


def _get(x, default):
    return default if x is None else x


def _need(x, name: str):
    if x is None:
        raise IdentityError(f"--{name} is required with these parameters")
    return x


def _cmd_verify(a):
    cid = a.check_id
    if cid != "all" and cid not in CHECKS:
        raise IdentityError(f"unknown check id {cid!r}; choose from all, {', '.join(CHECKS)}")
    given = {k: getattr(a, k) for k in ("m", "n", "s", "k", "nt", "ns", "kind") if getattr(a, k) is not None}
    inputs = {"check": cid, "quick": a.quick, **given}
    if given:
        if cid not in _SINGLE:
            raise IdentityError(f"check {cid!r} takes no parameters")
        allowed, fn = _SINGLE[cid]
        extra = sorted(set(given) - set(allowed))
        if extra:
            raise IdentityError(f"check {cid!r} does not take {', '.join('--' + e for e in extra)}")
        checks = fn(a)
    else:
        checks = run_check(cid, a.quick)
    return inputs, {"count": len(checks)}, checks


def _cmd_probe(a):
    rep = structure_probe(a.m, a.n, a.max_level, samples=a.samples, seed=a.seed)
    params = {"m": a.m, "n": a.n}
    checks = [_flag("probe.samples_agree", params, rep["samples_agree"], "rank data differ between samples")]
    inputs = {"m": a.m, "n": a.n, "max_level": a.max_level, "samples": a.samples, "seed": a.seed}
    return inputs, rep, checks


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (not deterministic)")
    p = _Parser(prog="freefield", description="Exact free-field form factor computations.")
    p.add_argument("--version", action="version", version=f"freefield {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("me", parents=[common], help="matrix element <h| t(X) s(Y) |hbar>")
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--h", default="1", help="A-element, e.g. 'c1^2*c2 + 3*c4' (cK = c_{-K})")
    s.add_argument("--hbar", default="1")
    s.add_argument("--nt", type=int, default=1)
    s.add_argument("--ns", type=int, default=0)
    s.set_defaults(func=_cmd_me)

    s = sub.add_parser("singvec", parents=[common], help="singular vector N^(s)_mn")
    for f in ("--m", "--n", "--s"):
        s.add_argument(f, type=int, required=True)
    s.set_defaults(func=_cmd_singvec)

    s = sub.add_parser("macdonald", parents=[common], help="Macdonald polynomial at t = -q")
    s.add_argument("--lambda", dest="lam", type=_ints, required=True, help="parts, e.g. 2,1")
    s.set_defaults(func=_cmd_macdonald)

    s = sub.add_parser("intrep", parents=[common], help="rectangular integral representation")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--sp", type=int, required=True)
    s.set_defaults(func=_cmd_intrep)

    s = sub.add_parser("kappa", parents=[common], help="kappa^(s)_m")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=_cmd_kappa)

    s = sub.add_parser("ccoeff", parents=[common], help="constant-term coefficient C^(nu)_k")
    s.add_argument("--nu", type=int, required=True)
    s.add_argument("--k", type=_ints, required=True, help="comma-separated k_1,...,k_nu")
    s.set_defaults(func=_cmd_ccoeff)

    s = sub.add_parser("verify", parents=[common], help="run a check by id")
    s.add_argument("check_id", help=f"all, {', '.join(CHECKS)}")
    s.add_argument("--quick", action="store_true")
    for f in ("--m", "--n", "--s", "--k", "--nt", "--ns"):
        s.add_argument(f, type=int)
    s.add_argument("--kind")
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("probe", parents=[common], help="W rank and Sigma cohomology at random rational v")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-level", type=int, default=6)
    s.add_argument("--samples", type=int, default=3)
    s.add_argument("--seed", type=int, default=2024)
    s.set_defaults(func=_cmd_probe)
    return p


# ---------------------------------------------------------------------------
# rendering


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines = [f"freefield {report['version']}: {' '.join(report['command'])}"]
    for k, v in report["inputs"].items():
        lines.append(f"  {k} = {v}")
    for k, v in report["results"].items():
        lines.append(f"{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False) if not isinstance(v, str) else v}")
    for c in report["checks"]:
        lines.append(_check_line(c))
    if report.get("error"):
        lines.append(f"error: {report['error']}")
    if "elapsed" in report:
        lines.append(f"elapsed: {report['elapsed']:.2f}s")
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


def _check_line(c: dict) -> str:
    ps = ", ".join(f"{k}={v}" for k, v in c["params"].items())
    out = f"{c['status'].upper():4s} {c['name']}({ps})"
    if c.get("note"):
        out += f"  [{c['note']}]"
    if c["status"] != "pass":
        out += f"\n     lhs: {c.get('lhs')}\n     rhs: {c.get('rhs')}"
    return out


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Parse, execute and render; returns (exit code, output text)."""
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        return 2, str(exc) + "\n"
    report: dict = {"schema": SCHEMA, "version": __version__, "command": argv, "error": None}
    t0 = time.perf_counter()
    try:
        inputs, results, checks = args.func(args)
    except _INPUT_ERRORS as exc:
        report.update(inputs={}, results={}, checks=[], status="error", error=str(exc))
        return 2, render(report, args.format)
    ok = all(c.ok for c in checks)
    report.update(inputs=inputs, results=results, checks=[c.to_json() for c in checks],
                  status="pass" if ok else "fail")
    if args.timing:
        report["elapsed"] = round(time.perf_counter() - t0, 3)
    return (0 if ok else 1), render(report, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, text = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    stream = sys.stderr if code == 2 and not text.startswith(("freefield", "{")) else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
