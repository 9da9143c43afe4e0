"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .curve import INFINITY, ResourceGuardError, curve_search, validate, y_zero_points
from .field import FieldSpec, make_field
from .lincode import LinearCode, sigma_profile
from .lsss import RNG_ALGORITHM, chen_cramer, make_rng, verify_security
from .pir import max_rate, plan_scheme, run_protocol, verify_scheme

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

SWEEP_HEADER = ["xt", "construction", "genus", "L", "N", "rate_num", "rate_den", "rate"]


class UsageError(ValueError):
    pass


# -- output helpers -----------------------------------------------------------


def write_manifest(path: Path, args: argparse.Namespace, cfg: RunConfig | None) -> Path:
    params = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    manifest = {
        "command": f"{args.group} {args.action}",
        "parameters": {k: str(v) if isinstance(v, Path) else v for k, v in params.items()},
        "config": cfg.raw if cfg is not None else None,
        "seed": getattr(args, "seed", None) if cfg is None else _seed(args, cfg),
        "rng": RNG_ALGORITHM,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    side = path.with_name(path.name + ".manifest.json")
    side.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return side


def emit(text: str, args: argparse.Namespace, cfg: RunConfig | None) -> None:
    """Write CSV text to --output (plus manifest) or stdout."""
    out = getattr(args, "output", None)
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    out.write_text(text)
    write_manifest(out, args, cfg)
    print(f"wrote {out}")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _seed(args, cfg: RunConfig) -> int:
    return args.seed if getattr(args, "seed", None) is not None else cfg.seed


def _fmt(field, a: int, pretty: bool) -> str:
    return field.pretty(a) if pretty and field.m > 1 else str(a)


def _fmt_point(field, P, pretty: bool) -> str:
    if P is INFINITY:
        return "P_inf"
    if isinstance(P, tuple):
        return f"({_fmt(field, P[0], pretty)}, {_fmt(field, P[1], pretty)})"
    return _fmt(field, int(P), pretty)


def _need_curve(cfg: RunConfig):
    if cfg.curve is None:
        raise UsageError("this command needs a [curve] section")
    return cfg.curve


# -- curve --------------------------------------------------------------------


def cmd_curve_search(args) -> int:
    if args.config is not None:
        cfg = load_config(args.config)
        field = cfg.field
    elif args.p is not None:
        cfg = None
        mod = [int(c) for c in args.modulus.split(",")] if args.modulus else None
        field = make_field(FieldSpec(args.p, args.m, tuple(mod) if mod else None))
    else:
        raise UsageError("give --config or --p")
    res = curve_search(field, args.genus, args.min_points, budget=args.budget, mode=args.mode, seed=args.seed)
    if args.limit is not None:
        res = res[: args.limit]
    text = "F;H;num_points;num_y_zeros\n" + "".join(r.csv_line() + "\n" for r in res)
    emit(text, args, cfg)
    return EXIT_OK


def cmd_curve_info(args) -> int:
    cfg = load_config(args.config)
    c = _need_curve(cfg)
    rep = validate(c)
    Fq, pretty = cfg.field, args.pretty
    print(repr(c))
    print(f"valid: {rep.valid}")
    for r in rep.reasons:
        print(f"  reason: {r}")
    for w in rep.warnings:
        print(f"  warning: {w}")
    if not rep.valid:
        return EXIT_FAIL
    xs = {P.x for P in c.affine_points}
    print(f"genus: {c.g}")
    print(f"rational points: {c.num_points} (Hasse-Weil bound {c.hasse_weil_bound()})")
    print(f"rational zeros of y: {', '.join(_fmt_point(Fq, P, pretty) for P in y_zero_points(c)) or 'none'}")
    print(f"x-values without rational points: {Fq.q - len(xs)}")
    if args.output is not None:
        rows = [[P.x, P.y] for P in c.affine_points]
        emit(_csv(rows, ["x", "y"]), args, cfg)
    return EXIT_OK


# -- scheme -------------------------------------------------------------------


def _plan(cfg: RunConfig):
    if cfg.kind != "pir":
        raise UsageError("scheme.kind must be 'pir' for this command")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        scheme = plan_scheme(cfg.field, cfg.curve, cfg.X, cfg.T, L=cfg.L, M=cfg.M)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return scheme


def _lsss(cfg: RunConfig):
    h = cfg.h_function()
    space = cfg.curve if cfg.curve is not None else cfg.field
    cand = cfg.curve.affine_points if cfg.curve is not None else list(range(cfg.field.q))
    # the zeros of h would be zero coordinates of every noise codeword
    points = [P for P, v in zip(cand, h.eval_many(cand)) if v != 0]
    return chen_cramer(space, cfg.T, h, points)


def cmd_scheme_plan(args) -> int:
    cfg = load_config(args.config)
    s = _plan(cfg)
    p, Fq = s.params, cfg.field
    print(f"genus: {p.genus}")
    print(f"J = {p.J}, L = {p.L}, N = {p.N}, X = {p.X}, T = {p.T}, M = {p.M}")
    print(f"rate: {p.L}/{p.N} = {float(s.rate):.6f}")
    print(f"gammas: {', '.join(_fmt(Fq, g, args.pretty) for g in p.gammas)}")
    if args.output is not None:
        rows = [[i, P[0], P[1]] if isinstance(P, tuple) else [i, P, ""] for i, P in enumerate(s.points)]
        emit(_csv(rows, ["server", "x", "y"]), args, cfg)
    return EXIT_OK


def cmd_scheme_verify(args) -> int:
    cfg = load_config(args.config)
    if cfg.kind == "chen_cramer":
        sch = _lsss(cfg)
        claim = cfg.T if args.claim is None else args.claim
        rep = verify_security(sch, claim, mode=args.mode)
        print(f"N = {sch.N}, noise dimension {sch.noise_gen.shape[0]}")
        print(f"{claim}-secure: {'ok' if rep.passed else 'FAIL'} ({rep.detail})")
        return EXIT_OK if rep.passed else EXIT_FAIL
    rep = verify_scheme(_plan(cfg), sigma=args.sigma)
    for line in rep.lines():
        print(line)
    print("PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_scheme_audit(args) -> int:
    cfg = load_config(args.config)
    g = cfg.genus
    codes: list[tuple[str, int, list[LinearCode]]] = []
    if cfg.kind == "chen_cramer":
        sch = _lsss(cfg)
        codes.append(("noise", cfg.T, [sch.noise_code]))
    else:
        s = _plan(cfg)
        rep = verify_scheme(s)
        for line in rep.lines():
            print(line)
        if cfg.X > 0:
            codes.append(("storage", cfg.X, [s.storage_noise_code(l) for l in range(s.L)]))
        if cfg.T > 0:
            codes.append(("query", cfg.T, [s.query_noise_code()]))
    rows = []
    for name, t, group in codes:
        hi = t + max(g, 1)
        if args.max_u is not None:
            hi = min(hi, args.max_u)
        for U in range(t, hi + 1):
            # worst case over the per-fragment storage codes
            v = max((sigma_profile(c, U, n_jobs=args.threads, check_interval=False) for c in group),
                    key=lambda s: s.insecure)
            rows.append([name, v.U, v.insecure, v.total, f"{float(v.sigma):.6f}"])
            print(f"sigma[{name}]({U}) = {v.insecure}/{v.total} = {float(v.sigma):.4f}")
    if args.output is not None:
        emit(_csv(rows, ["code", "U", "insecure", "total", "sigma"]), args, cfg)
    return EXIT_OK


# -- pir ----------------------------------------------------------------------


def _read_files(path: Path, field, M: int, L: int) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read files from {path}: {exc}") from None
    if data.shape != (M, L):
        raise UsageError(f"files must be a {M} x {L} CSV, got {data.shape[0]} x {data.shape[1]}")
    if np.any((data < 0) | (data >= field.q)):
        raise UsageError("file fragments must be canonical field elements")
    return data


def cmd_pir_run(args) -> int:
    cfg = load_config(args.config)
    s = _plan(cfg)
    if not 1 <= args.mu <= s.M:
        raise UsageError(f"--mu must be in 1..{s.M}, got {args.mu}")
    rng = make_rng(_seed(args, cfg))
    if args.files is not None:
        files = _read_files(args.files, cfg.field, s.M, s.L)
    else:
        files = cfg.field.random(rng, (s.M, s.L))
    tr = run_protocol(s, files, args.mu, rng, n_jobs=args.threads)
    ok = bool(np.array_equal(tr.decoded, files[args.mu - 1]))
    print(f"servers: {s.N}, files: {s.M} x {s.L} fragments")
    print(f"rate: {s.L}/{s.N} = {float(s.rate):.6f}")
    print(f"retrieved file {args.mu}: {' '.join(_fmt(cfg.field, int(v), args.pretty) for v in tr.decoded)}")
    print("decoded matches stored file" if ok else "MISMATCH between decoded and stored file")
    if args.transcript is not None:
        out = Path(args.transcript)
        out.write_text(tr.to_csv())
        write_manifest(out, args, cfg)
        print(f"wrote {out}")
    return EXIT_OK if ok else EXIT_FAIL


# -- rate ---------------------------------------------------------------------


def _sweep_curves(cfg: RunConfig) -> list[tuple]:
    curves = [(nc.name, nc.curve) for nc in cfg.curves]
    if cfg.curve is not None:
        curves.insert(0, ("curve", cfg.curve))
    return curves


def sweep_rows(cfg: RunConfig, first: int, last: int) -> list[list]:
    rows = []
    for xt in range(first, last + 1):
        for name, c in [("genus0", None)] + _sweep_curves(cfg):
            r = max_rate(cfg.field, c, xt, xt)
            genus = 0 if c is None else c.g
            if r is None:
                rows.append([xt, name, genus, 0, 0, 0, 1, "0"])
            else:
                L, N = r
                fr = Fraction(L, N)
                rows.append([xt, name, genus, L, N, fr.numerator, fr.denominator, f"{float(fr):.6f}"])
    return rows


def cmd_rate_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.xt is not None:
        first, last = args.xt
    elif cfg.xt is not None:
        first, last = cfg.xt
    else:
        first, last = 1, max(1, (cfg.field.q - 1) // 2)
    if not 0 <= first <= last:
        raise UsageError("--xt needs 0 <= FIRST <= LAST")
    for name, c in _sweep_curves(cfg):
        rep = validate(c)
        if not rep.valid:
            raise UsageError(f"curve {name} is invalid: {'; '.join(rep.reasons)}")
    emit(_csv(sweep_rows(cfg, first, last), SWEEP_HEADER), args, cfg)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="print F_2^m elements as polynomials in alpha")
    common.add_argument("--threads", type=int, default=1, help="worker count for parallel stages")

    ap = argparse.ArgumentParser(prog="agpir", description="AG-code secret sharing and private information retrieval")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = ap.add_subparsers(dest="group", required=True)

    def action(group, name, func, help_):
        p = group.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    curve = groups.add_parser("curve", help="hyperelliptic curves").add_subparsers(dest="action", required=True)
    p = action(curve, "search", cmd_curve_search, "search for curves with many rational points")
    p.add_argument("--config", type=Path)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--modulus", help="comma-separated coefficients, low degree first")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--min-points", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--budget", type=int, default=1 << 22)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int)
    p.add_argument("--output", type=Path)
    p = action(curve, "info", cmd_curve_info, "validate a curve and count its points")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--output", type=Path, help="write the affine points as CSV")

    scheme = groups.add_parser("scheme", help="plan and check schemes").add_subparsers(dest="action", required=True)
    p = action(scheme, "plan", cmd_scheme_plan, "choose L, gammas and evaluation points")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--output", type=Path, help="write the evaluation points as CSV")
    p = action(scheme, "verify", cmd_scheme_verify, "check decodability, security and privacy")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--sigma", action="store_true", help="also profile sigma(U) beyond the thresholds")
    p.add_argument("--mode", choices=["dual_distance", "exhaustive_rank"], default="dual_distance")
    p.add_argument("--claim", type=int, help="security level to check for chen_cramer configs (default T)")
    p = action(scheme, "audit", cmd_scheme_audit, "sigma(U) table beyond the design thresholds")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--max-u", type=int)
    p.add_argument("--output", type=Path)

    pir = groups.add_parser("pir", help="simulate retrieval").add_subparsers(dest="action", required=True)
    p = action(pir, "run", cmd_pir_run, "encode, query, respond and decode")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--mu", type=int, required=True, help="1-based index of the wanted file")
    p.add_argument("--files", type=Path, help="M x L CSV of file fragments (random if omitted)")
    p.add_argument("--seed", type=int)
    p.add_argument("--transcript", type=Path)

    rate = groups.add_parser("rate", help="rate comparisons").add_subparsers(dest="action", required=True)
    p = action(rate, "sweep", cmd_rate_sweep, "maximal rate per X = T for genus 0 and each curve")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--xt", type=int, nargs=2, metavar=("FIRST", "LAST"))
    p.add_argument("--output", type=Path)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"error: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ConfigError, UsageError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
