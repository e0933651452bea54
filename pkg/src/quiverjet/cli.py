"""Command-line front end: ``quiverjet <subcommand> ...``.

Reports are JSON on stdout (or ``--out``), sequences may be CSV.  Exit
status: 0 when every asserted invariant holds, 1 when one fails, 2 for bad
input, 3 when a budget or cap is exceeded.  Errors are printed to stderr
as ``{"error": {"code": ..., "message": ...}}``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import platform
import sys
import time
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Optional

from . import __version__
from .acceptance import _jsonable, run_suite
from .bounds import check_loop_lemma, check_totneg_lemma, geometric_dims, mustata_ledger
from .cache import CountCache
from .counting import count_multiplicative_fiber, normalized_sequence
from .graph import bridges
from .mukai import (MukaiError, MukaiVector, NSLattice, cross_check_gloop, ext_quiver_from_mukai,
                    mukai_pairing, parse_vectors)
from .predicates import (fundamental_domain_contains, has_property_P, is_totally_negative,
                         no_simple_exceptions, simple_module_exists)
from .quiver import Quiver, QuiverError, quiver_is_connected
from .ring import BudgetExceeded, RingError
from .strata import CapExceeded, SemisimpleType, aux_quiver, enumerate_semisimple_types

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code
        self.status = status


# -- parsing -----------------------------------------------------------------

def parse_quiver(path: str) -> Quiver:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError("io-error", f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("quiver-json", f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise CliError("quiver-schema", f"{path}: top level must be an object")
    if "vertices" not in obj:
        raise CliError("quiver-schema", f"{path}: missing field 'vertices'")
    for k, a in enumerate(obj.get("arrows", [])):
        if not isinstance(a, dict) or "src" not in a or "tgt" not in a:
            raise CliError("quiver-schema", f"{path}: arrows[{k}] needs fields 'src' and 'tgt'")
    try:
        return Quiver.from_json(obj)
    except QuiverError as exc:
        raise CliError("quiver-schema", f"{path}: {exc}") from exc


def parse_dim(text: str, Q: Quiver) -> tuple[int, ...]:
    """``v1=2,v2=1`` (named) or ``2,1`` (positional, file vertex order)."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        if parts and all("=" in p for p in parts):
            named = {}
            for p in parts:
                k, v = p.split("=", 1)
                k = k.strip()
                if k not in Q.vertices:
                    raise CliError("unknown-vertex", f"dimension names unknown vertex {k!r}")
                named[k] = int(v)
            return Q.vec({v: named.get(v, 0) for v in Q.vertices})
        if any("=" in p for p in parts):
            raise CliError("dim-syntax", "mix of named and positional entries in --dim")
        return Q.vec([int(p) for p in parts])
    except ValueError as exc:
        if isinstance(exc, QuiverError):
            raise CliError("dim-invalid", str(exc)) from exc
        raise CliError("dim-syntax", f"cannot parse --dim {text!r}") from exc


def parse_alpha(text: Optional[str], Q: Quiver) -> dict[str, int]:
    if not text:
        return {v: 1 for v in Q.vertices}
    out = {}
    for p in text.split(","):
        if "=" not in p:
            raise CliError("alpha-syntax", f"--alpha entries look like v=3, got {p!r}")
        k, v = p.split("=", 1)
        if k.strip() not in Q.vertices:
            raise CliError("unknown-vertex", f"--alpha names unknown vertex {k.strip()!r}")
        out[k.strip()] = int(v)
    return out


def _load_json_arg(text: str):
    p = Path(text)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("json-argument", f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# -- manifest ------------------------------------------------------------------

@dataclass
class RunManifest:
    command: str
    argv: list[str]
    inputs: dict[str, str]
    parameters: dict
    tool_version: str = __version__
    outputs: dict[str, str] = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"command": self.command, "argv": self.argv, "inputs": self.inputs,
                "parameters": self.parameters, "tool_version": self.tool_version,
                "python": platform.python_version(), "outputs": self.outputs,
                "wall_time": round(self.wall_time, 6)}


# -- subcommands -------------------------------------------------------------------
# each returns (report, ok) where report is JSON-ready or a CSV string

def _header(Q: Quiver, d=None, **params) -> dict:
    out = {"quiver_hash": Q.canonical_hash}
    if d is not None:
        out["d"] = Q.dim_json(d)
    out["parameters"] = params
    return out


def cmd_check(args) -> tuple[dict, bool]:
    Q = parse_quiver(args.quiver)
    d = parse_dim(args.dim, Q)
    tn, wit = is_totally_negative(Q)
    nonzero = any(d)
    rep = _header(Q, d)
    rep.update({
        "totally_negative": tn,
        "witness": None if wit is None else [Q.dim_json(w) for w in wit],
        "property_P": has_property_P(Q, d) if nonzero else False,
        "fundamental_domain": fundamental_domain_contains(Q, d) if nonzero else False,
        "simple_exists": simple_module_exists(Q, d) if nonzero else None,
        "bridges": [list(b) for b in bridges(Q)] if quiver_is_connected(Q) else None,
    })
    if nonzero:
        rep["dims"] = geometric_dims(Q, d)
        sup = [i for i, x in enumerate(d) if x]
        sub = Q.full_subquiver(sup)
        if quiver_is_connected(sub):
            rep["simple_exceptions"] = no_simple_exceptions(sub, tuple(d[i] for i in sup))
    return rep, True


def cmd_types(args) -> tuple[dict, bool]:
    Q = parse_quiver(args.quiver)
    d = parse_dim(args.dim, Q)
    types = enumerate_semisimple_types(Q, d, policy=args.policy, cap=args.cap)
    rep = _header(Q, d, policy=args.policy, cap=args.cap)
    rep["types"] = [t.to_json(Q) for t in types]
    rep["count"] = len(types)
    return rep, True


def cmd_aux(args) -> tuple[dict, bool]:
    Q = parse_quiver(args.quiver)
    tau = SemisimpleType.from_json(Q, _load_json_arg(args.type))
    aux, e = aux_quiver(Q, tau)
    rep = _header(Q, tau.total(), type=tau.to_json(Q))
    rep.update({"aux_quiver": aux.to_json(), "aux_hash": aux.canonical_hash, "e": list(e),
                "totally_negative": is_totally_negative(aux)[0],
                "property_P": has_property_P(aux, e)})
    return rep, True


def cmd_bounds(args) -> tuple[dict, bool]:
    if args.loop_lemma:
        g, dd = args.loop_lemma
        rep = check_loop_lemma(g, dd).to_json()
        return {"loop_lemma": rep}, rep["ok"]
    if not args.quiver or not args.dim:
        raise CliError("usage", "bounds needs QUIVER --dim, or --loop-lemma G D")
    Q = parse_quiver(args.quiver)
    d = parse_dim(args.dim, Q)
    rep = _header(Q, d, mustata_m=args.mustata)
    ok = True
    if has_property_P(Q, d) and not all(x in (0, 1) for x in d):
        br = check_totneg_lemma(Q, d, cap=args.cap)
        rep["totneg_lemma"] = br.to_json(Q)
        ok &= br.verdict and br.remainder_ok and br.decomposition_exact
    else:
        rep["totneg_lemma"] = None
        rep["note"] = "lemma needs property (P) and d != 1 on its support"
    if args.mustata:
        led = mustata_ledger(Q, d, args.mustata)
        rep["mustata"] = led
        ok &= led["ok"]
    return rep, ok


def _count_kwargs(args) -> dict:
    kw = {"threads": args.threads, "budget": args.budget}
    if args.cache:
        kw["cache"] = CountCache(args.cache)
    return kw


def cmd_count(args):
    Q = parse_quiver(args.quiver)
    d = parse_dim(args.dim, Q)
    seq = normalized_sequence(Q, d, args.q, args.n, args.method, **_count_kwargs(args))
    if args.emit == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count", "normalized_num", "normalized_den"])
        for r in seq["records"]:
            w.writerow([r.n, r.count, r.normalized.numerator, r.normalized.denominator])
        return buf.getvalue(), True
    rep = _header(Q, d, q=args.q, n_max=args.n, method=args.method)
    rep.update({"dim_X": seq["dim_X"], "records": [r.to_json() for r in seq["records"]],
                "sequence": seq["sequence"], "differences": seq["differences"]})
    return rep, all(r.count >= 1 for r in seq["records"])


def cmd_mpa_count(args) -> tuple[dict, bool]:
    Q = parse_quiver(args.quiver)
    d = parse_dim(args.dim, Q)
    alpha = parse_alpha(args.alpha, Q)
    order = [int(x) for x in args.order.split(",")] if args.order else None
    try:
        count = count_multiplicative_fiber(Q, d, args.q, alpha, args.n, order=order, budget=args.budget)
    except (QuiverError, ValueError) as exc:
        if isinstance(exc, (RingError, BudgetExceeded)):
            raise
        raise CliError("mpa-input", str(exc)) from exc
    rep = _header(Q, d, q=args.q, n=args.n, alpha=alpha, order=order)
    rep["count"] = count
    return rep, True


def cmd_extquiver(args) -> tuple[dict, bool]:
    gram = _load_json_arg(args.gram)
    try:
        L = NSLattice(tuple(tuple(r) for r in gram))
        vecs = parse_vectors(args.vectors)
        ext = ext_quiver_from_mukai(vecs, L)
    except (TypeError, MukaiError) as exc:
        raise CliError("mukai", str(exc)) from exc
    rep = {"vectors": [str(v) for v in vecs], "gram": [list(r) for r in L.gram], **ext.to_json(),
           "underlying_hash": ext.underlying.canonical_hash}
    ok = ext.totally_negative == is_totally_negative(ext.underlying)[0]
    if args.check_gloop is not None:
        m = _common_multiples(vecs)
        cc = cross_check_gloop(args.check_gloop, m, [1] * len(m))
        base = MukaiVector(vecs[0].r // m[0], tuple(c // m[0] for c in vecs[0].c), vecs[0].a // m[0])
        cc["base_square"] = mukai_pairing(base, base, L)
        cc["base_matches_g"] = cc["base_square"] == 2 * args.check_gloop - 2
        rep["gloop_cross_check"] = cc
        ok &= cc["ok"] and cc["base_matches_g"]
    return rep, ok


def _common_multiples(vecs: list[MukaiVector]) -> list[int]:
    ms, bases = [], set()
    for v in vecs:
        g = 0
        for x in (v.r, *v.c, v.a):
            g = gcd(g, x)
        if g == 0:
            raise CliError("mukai", "zero Mukai vector")
        ms.append(g)
        bases.add((v.r // g, tuple(c // g for c in v.c), v.a // g))
    if len(bases) != 1:
        raise CliError("mukai", "--check-gloop needs all vectors to be multiples of one primitive vector")
    return ms


def cmd_suite(args) -> tuple[dict, bool]:
    if args.level != "desk":
        raise CliError("usage", f"unknown suite level {args.level!r}")
    only = {int(x) for x in args.only.split(",")} if args.only else None
    echo = (lambda s: print(s, file=sys.stderr)) if not args.quiet else None
    results = run_suite(only, echo=echo)
    rep = {"level": args.level, "tool_version": __version__,
           "criteria": [r.to_json() for r in results],
           "passed": sum(r.passed for r in results), "total": len(results)}
    return rep, all(r.passed for r in results)


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiverjet", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dim=True):
        sp.add_argument("--out", help="write the report here instead of stdout")
        if dim:
            sp.add_argument("quiver", help="quiver JSON file")
            sp.add_argument("--dim", required=True, help="v1=2,v2=1 or positional 2,1")

    sp = sub.add_parser("check", help="predicates for (Q, d)")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("types", help="semisimple types of d")
    common(sp)
    sp.add_argument("--policy", choices=["strict", "permissive"], default="strict")
    sp.add_argument("--cap", type=int, default=10**5)
    sp.set_defaults(func=cmd_types)

    sp = sub.add_parser("aux", help="auxiliary quiver of a semisimple type")
    common(sp, dim=False)
    sp.add_argument("quiver")
    sp.add_argument("--type", required=True, help='JSON (or file): [{"dim": {...}, "mult": k}, ...]')
    sp.set_defaults(func=cmd_aux)

    sp = sub.add_parser("bounds", help="dimension bounds and lemma checks")
    common(sp, dim=False)
    sp.add_argument("quiver", nargs="?")
    sp.add_argument("--dim")
    sp.add_argument("--cap", type=int, default=10**6)
    sp.add_argument("--mustata", type=int, metavar="M", help="also check the jet ledger up to m = M")
    sp.add_argument("--loop-lemma", type=int, nargs=2, metavar=("G", "D"))
    sp.set_defaults(func=cmd_bounds)

    for name, func in (("count", cmd_count), ("mpa-count", cmd_mpa_count)):
        sp = sub.add_parser(name, help="point counts over F_q[t]/t^n" if name == "count"
                            else "multiplicative relation counts (brute force)")
        common(sp)
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--n", type=int, required=True,
                        help="ring length (count: sequence runs n = 1..N)")
        sp.add_argument("--budget", type=int, default=2**25)
        if name == "count":
            sp.add_argument("--method", choices=["kernel", "brute"], default="kernel")
            sp.add_argument("--threads", type=int)
            sp.add_argument("--cache", help="JSONL count cache path")
            sp.add_argument("--emit", choices=["json", "csv"], default="json")
        else:
            sp.add_argument("--alpha", help="v1=1,v2=2 (default 1 everywhere)")
            sp.add_argument("--order", help="arrow order as indices, e.g. 2,0,1")
        sp.set_defaults(func=func)

    sp = sub.add_parser("extquiver", help="Ext-quiver of Mukai vectors")
    common(sp, dim=False)
    sp.add_argument("--gram", required=True, help="JSON Gram matrix, e.g. '[[0]]'")
    sp.add_argument("--vectors", required=True, help="'(r,(c..),a);(r,(c..),a)'")
    sp.add_argument("--check-gloop", type=int, metavar="G")
    sp.set_defaults(func=cmd_extquiver)

    sp = sub.add_parser("suite", help="run the acceptance catalog")
    common(sp, dim=False)
    sp.add_argument("--level", default="desk")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.add_argument("--quiet", action="store_true")
    sp.set_defaults(func=cmd_suite)
    return p


def _input_hashes(args) -> dict[str, str]:
    out = {}
    for attr in ("quiver",):
        path = getattr(args, attr, None)
        if path and Path(path).exists():
            out[path] = _sha256(Path(path).read_bytes())
    return out


def _render(report) -> str:
    if isinstance(report, str):
        return report
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, ok = args.func(args)
    except CliError as exc:
        return _fail(exc.code, str(exc), exc.status)
    except (BudgetExceeded, CapExceeded) as exc:
        return _fail("budget-exceeded", str(exc), EXIT_BUDGET)
    except RingError as exc:
        return _fail("ring", str(exc), EXIT_INPUT)
    except (QuiverError, MukaiError) as exc:
        return _fail("invalid-input", str(exc), EXIT_INPUT)
    text = _render(report)
    if args.out:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8")
        params = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
        man = RunManifest(args.command, argv, _input_hashes(args), params,
                          outputs={str(out): _sha256(text.encode())},
                          wall_time=time.perf_counter() - t0)
        Path(str(out) + ".manifest.json").write_text(json.dumps(man.to_json(), indent=2, sort_keys=True) + "\n",
                                                     encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def _fail(code: str, message: str, status: int) -> int:
    print(json.dumps({"error": {"code": code, "message": message}}), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
