"""Command-line front end.

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 for usage or parameter errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import acceptance, chen, verifier, wilson_xiang as wx
from .cyclotomic import davenport_hasse_check, quadratic_gauss_sum, quadratic_gauss_sum_square, semiprimitive_half_check
from .errors import TypeQError
from .geometry import Bundle, PointSet, Spread
from .gfcore import build_field

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()] if text.strip() else []


def _dump(obj, path: Path | None = None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True, default=_jsonable)
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n")


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, tuple):
        return list(v)
    return str(v)


def _out_dir(arg: str | None) -> Path:
    base = arg or os.environ.get("TYPEQ_OUT", ".")
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


# -- field ----------------------------------------------------------------------

def cmd_field(args) -> int:
    f = build_field(args.p, args.s)
    _dump(f.descriptor())
    return EXIT_OK


# -- construct -----------------------------------------------------------------

def _chen_params(args, f) -> chen.ChenParams:
    q = f.p ** (f.s // 2)
    if args.random:
        rng = np.random.default_rng(args.seed)
        return chen.random_params(f, rng, variant=0, m=args.m)
    T0 = _int_list(args.T0) if args.T0 is not None else chen.t_preset(q, args.T_preset)
    T1 = _int_list(args.T1) if args.T1 is not None else chen.t_preset(q, args.T_preset)
    K = _int_list(args.K) if args.K is not None else None
    m = args.m or 1
    return chen.derive_params(f, m, K, T0, T1, omega_log=args.omega_log)


def build_bundle(args) -> Bundle:
    f = build_field(args.p, args.s)
    kind = args.construction
    if kind == "chen":
        params = _chen_params(args, f)
        b = chen.build_quadruple(params)
        if args.random:
            b.params["seed"] = args.seed
        return b
    if kind == "chen-preset-original":
        return chen.chen_original(f)
    q = f.p ** (f.s // 2)
    c = args.c
    if args.random:
        rng = np.random.default_rng(args.seed)
        c = int(2 * rng.integers(q + 1) + 1)
    if kind == "wx":
        b = wx.build_quadruple(wx.build_setting(f, c))
    else:
        b = wx.wx_original(f, c)
    if args.random:
        b.params["seed"] = args.seed
    return b


def write_bundle(b: Bundle, out: Path) -> list[Path]:
    paths = []
    for i, C in enumerate(b.sets):
        path = out / f"C{i}.json"
        _dump(C.to_dict(b.construction, {**b.params, "set": i}), path)
        paths.append(path)
    path = out / "spread.json"
    _dump({**b.spread.to_dict(b.halves), "construction": b.construction, "params": b.params}, path)
    paths.append(path)
    return paths


def cmd_construct(args) -> int:
    b = build_bundle(args)
    out = _out_dir(args.out)
    for path in write_bundle(b, out):
        print(path)
    return EXIT_OK


# -- verify --------------------------------------------------------------------

def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise TypeQError(f"cannot read {path}: {exc}") from exc


def _report(r: verifier.Report) -> int:
    _dump(r.to_dict())
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.what == "type-q":
        E = PointSet.from_dict(_load(args.path))
        return _report(verifier.is_type_q(E, method=args.method, jobs=args.jobs))
    if args.what == "spread":
        return _report(verifier.is_spread(Spread.from_dict(_load(args.path))))
    d = Path(args.path)
    sets = [PointSet.from_dict(_load(str(d / f"C{i}.json"))) for i in range(4)]
    sd = _load(str(d / "spread.json"))
    halves = sd.get("half_assignment")
    if not halves:
        raise TypeQError("spread.json has no half_assignment")
    r = verifier.bundle_check(sets, Spread.from_dict(sd), halves, jobs=args.jobs, method=args.method)
    return _report(r)


# -- suite, check --------------------------------------------------------------

def cmd_suite(args) -> int:
    results = acceptance.run_all(args.max_q, args.jobs)
    failed = [r for r in results if not r.passed]
    for r in failed:
        _dump({"criterion": r.number, "failures": r.failures})
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_check(args) -> int:
    f = build_field(args.p, args.s)
    if args.what == "gauss":
        G = quadratic_gauss_sum(f)
        out = {"G": G.to_dict(), "G^2": (G * G).to_dict(), "expected_G^2": quadratic_gauss_sum_square(f.order)}
        ok = G * G == quadratic_gauss_sum_square(f.order)
        dh = {}
        for ell in (2, 3):
            if f.n % ell == 0 and f.n > 1:
                dh[ell] = max(davenport_hasse_check(f, k, ell) for k in range(1, f.n))
        out["davenport_hasse_max_deviation"] = dh
        ok = ok and all(v < 1e-6 for v in dh.values())
        if f.s % 2 == 0:
            q = f.p ** (f.s // 2)
            semi = {}
            for m in chen.admissible_m(q):
                semi[m] = semiprimitive_half_check(f, range(m)).passed
            out["semiprimitive"] = semi
            ok = ok and all(semi.values())
        out["pass"] = bool(ok)
        _dump(out)
        return EXIT_OK if ok else EXIT_FAIL
    if args.what == "tables":
        return _report(verifier.scheme_table_check(wx.build_setting(f, args.c)))
    # lemmas: every character for both constructions
    q = f.p ** (f.s // 2)
    pairs = [(a, b) for a in range(f.order) for b in range(f.order) if a or b]
    summary = {}
    ok = True
    p0 = chen.derive_params(f, 1)
    p1 = chen.derive_params(f, 1, None, p0.T0, chen.t_preset(q, "squares", True))
    for name, params in (("chen_variant0", p0), ("chen_variant1", p1)):
        cs = chen.build_sets(params)
        E = chen.build_E(params, params.variant, cs)
        bad = [r.mismatches for r in (chen.lemma_oracle_U(params, a, b, None, cs, E) for a, b in pairs) if not r]
        summary[name] = {"pairs": len(pairs), "mismatches": len(bad)}
        ok = ok and not bad
    s = wx.build_setting(f, args.c)
    for choice in wx.corollary_AB(s):
        E = wx.build_E(s, choice)
        bad = [r.mismatches for r in (wx.lemma_oracle_VW(s, choice, a, b, E) for a, b in pairs) if not r]
        summary[f"wx_variant{choice.variant}"] = {"pairs": len(pairs), "mismatches": len(bad)}
        ok = ok and not bad
    summary["pass"] = ok
    _dump(summary)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="typeq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="print the canonical field descriptor")
    p.add_argument("p", type=int)
    p.add_argument("s", type=int)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("construct", help="build four sets and a spread, write them to a directory")
    p.add_argument("construction", choices=["chen", "wx", "chen-preset-original", "wx-preset-original"])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True, help="degree of F_{q^2} over F_p (so q = p^(s/2))")
    p.add_argument("--m", type=int)
    p.add_argument("--K", help="indices in Z_2m, comma separated")
    p.add_argument("--T0", help="F_q codes (0 = zero, k+1 = w_q^k)")
    p.add_argument("--T1")
    p.add_argument("--T-preset", dest="T_preset", default="squares", choices=chen.T_PRESETS)
    p.add_argument("--omega-log", dest="omega_log", type=int, default=1)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--random", action="store_true", help="sample parameters from --seed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (default $TYPEQ_OUT or .)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="verify exported sets")
    p.add_argument("what", choices=["type-q", "spread", "bundle"])
    p.add_argument("path")
    p.add_argument("--method", default="direct", choices=["direct", "hyperplane", "both"])
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", help="run the acceptance matrix")
    p.add_argument("which", choices=["acceptance"])
    p.add_argument("--max-q", dest="max_q", type=int, default=13)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("check", help="Gauss sums, scheme tables or lemma oracles for one field")
    p.add_argument("what", choices=["gauss", "tables", "lemmas"])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--c", type=int, default=1)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TypeQError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
