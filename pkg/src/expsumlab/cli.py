"""Reproducible experiment runner.

Every library surface is exposed as a subcommand emitting CSV (default) or
JSON rows; floats are serialized with 17 significant digits so files
round-trip exactly.  When ``--out`` is given, a JSON manifest (subcommand,
argv, master seed, version, timestamps, sha256 of the data) is written next
to the output file.  Identical argv + seed produce byte-identical data rows
regardless of ``--threads``.

Config precedence for seed/threads: flags > environment (EXPSUM_SEED,
EXPSUM_THREADS) > key=value config file passed with ``--config``.

Exit codes: 0 success, 1 usage error, 2 numeric guard or overflow,
3 verification suite failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bounds import verification_suite
from .errors import GuardError
from .expsum import FrequencySpectrum, even_norm_coeff, lp_norm_quadrature
from .lattice import (
    GreenRuzsaSpec,
    ShellQuery,
    divisor_error,
    divisor_summatory,
    greenruzsa_generate,
    representation_count,
    diophantine_count,
    shell_count_brute,
    shell_count_fast,
    shell_sup_ratio,
    sparsity_count,
)
from .majorant import genericity_experiment, majorant_ratio
from .moments import ExperimentSpec, TimeMap, mc_even_moment, mc_general_moment, slope_fit
from .processes import Pmf, SeedSpec


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _render(rows: list[dict], fmt: str) -> bytes:
    if fmt == "json":
        text = json.dumps(rows, indent=2, default=_fmt) + "\n"
        return text.encode()
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue().encode()


def _emit(rows: list[dict], args, started: str) -> None:
    data = _render(rows, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        manifest = {
            "subcommand": args.subcommand,
            "argv": args.raw_argv,
            "master_seed": args.seed,
            "version": __version__,
            "started": started,
            "finished": datetime.now(timezone.utc).isoformat(),
            "output": os.path.basename(args.out),
            "sha256": hashlib.sha256(data).hexdigest(),
        }
        with open(args.out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    else:
        sys.stdout.write(data.decode())


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _parse_map(text: str) -> TimeMap:
    if text == "identity":
        return TimeMap("identity")
    if text.startswith("power:"):
        return TimeMap("power", d=int(text.split(":", 1)[1]))
    if text.startswith("arith:"):
        return TimeMap("arith", r=float(text.split(":", 1)[1]))
    raise ValueError(f"unknown time map {text!r} (use identity, power:D, arith:R)")

def _parse_pmf(text: str | None) -> Pmf | None:
    if text is None:
        return None
    pairs = []
    for tok in text.split(","):
        v, p = tok.split(":")
        pairs.append((int(v), float(p)))
    return Pmf(tuple(sorted(pairs)))


def _config_values(path: str | None) -> dict[str, str]:
    values: dict[str, str] = {}
    if path:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, val = line.partition("=")
                values[key.strip().lower()] = val.strip()
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed (u64)")
    parser.add_argument("--samples", type=int, default=None, help="Monte Carlo samples")
    parser.add_argument("--threads", type=int, default=None, help="worker count (wall time only)")
    parser.add_argument("--out", type=str, default=None, help="output path (stdout if absent)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--tol", type=float, default=1e-8, help="tolerance for exact engines")
    parser.add_argument("--config", type=str, default=None, help="key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expsumlab",
        description="Random exponential sums, moment experiments, and lattice counting.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("moment", help="Monte Carlo moment experiments over a size ladder")
    p.add_argument("--process", choices=("poisson", "walk", "iid"), required=True)
    p.add_argument("--map", dest="time_map", default="identity", help="identity | power:D | arith:R")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--sizes", type=str, required=True, help="comma list, A = {1..size}")
    p.add_argument("--pmf", type=str, default=None, help="iid pmf as v:p,v:p")
    p.add_argument("--mode", choices=("auto", "even", "quadrature"), default="auto")
    p.add_argument("--nodes", type=int, default=None, help="quadrature nodes (default auto)")
    _add_common(p)

    p = sub.add_parser("shell", help="shell counts |k^d - j^d - E| < D")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--E", type=float, default=None, help="single E (default: grid over [D, D^2])")
    p.add_argument("--mode", choices=("both", "brute", "fast", "sup"), default="both")
    p.add_argument("--e-samples", type=int, default=2048, dest="e_samples")
    _add_common(p)

    p = sub.add_parser("divisor", help="divisor summatory function and its error term")
    p.add_argument("--x", type=str, required=True, help="comma list of evaluation points")
    _add_common(p)

    p = sub.add_parser("repcount", help="representation counts of sums of d-th powers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--squares", action="store_true", help="emit sum of squared counts instead")
    _add_common(p)

    p = sub.add_parser("greenruzsa", help="digit-restricted sets and their sparsity")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--sparsity", type=int, default=None, help="sample this many (center, radius) pairs")
    _add_common(p)

    p = sub.add_parser("majorant", help="phase-optimized majorant ratios")
    p.add_argument("--freqs", type=str, default=None, help="comma list of frequencies")
    p.add_argument("--p", type=int, default=4)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--genericity", action="store_true")
    p.add_argument("--process", choices=("poisson", "walk", "iid"), default="poisson")
    p.add_argument("--map", dest="time_map", default="identity")
    p.add_argument("--sizes", type=str, default="8,16,32,64")
    p.add_argument("--epsilon", type=float, default=0.2)
    _add_common(p)

    p = sub.add_parser("verify", help="run the full inequality and oracle suite")
    p.add_argument("--quick", action="store_true", help="smaller grids for smoke testing")
    _add_common(p)

    p = sub.add_parser("slope", help="log-log slope fit over a moment output file")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--x-col", type=str, default="size")
    p.add_argument("--y-col", type=str, default="mean")
    _add_common(p)

    return parser


def _resolve_settings(args) -> None:
    config = _config_values(args.config)
    if args.seed is None:
        env = os.environ.get("EXPSUM_SEED")
        if env is not None:
            args.seed = int(env)
        elif "seed" in config:
            args.seed = int(config["seed"])
        else:
            args.seed = 0
    if args.threads is None:
        env = os.environ.get("EXPSUM_THREADS")
        if env is not None:
            args.threads = int(env)
        elif "threads" in config:
            args.threads = int(config["threads"])
        else:
            args.threads = 1
    if args.samples is None:
        args.samples = int(config.get("samples", 200))


def _cmd_moment(args) -> tuple[list[dict], int]:
    time_map = _parse_map(args.time_map)
    pmf = _parse_pmf(args.pmf)
    rows = []
    for size in _parse_int_list(args.sizes):
        spec = ExperimentSpec(
            process=args.process,
            index_set=tuple(range(1, size + 1)),
            time_map=time_map,
            p=args.p,
            samples=args.samples,
            seed=SeedSpec(args.seed, size),
            pmf=pmf,
        )
        even_ok = args.p >= 2 and args.p == int(args.p) and int(args.p) % 2 == 0
        use_even = args.mode == "even" or (args.mode == "auto" and even_ok)
        if use_even:
            est = mc_even_moment(spec, threads=args.threads)
        else:
            est = mc_general_moment(spec, nodes=args.nodes, threads=args.threads)
        rows.append(
            {
                "process": args.process,
                "map": time_map.label(),
                "p": args.p,
                "size": size,
                "samples": est.n_samples,
                "mean": est.mean,
                "std_error": est.std_error,
                "seed": args.seed,
                "descriptor": est.descriptor,
            }
        )
    return rows, 0


def _shell_grid(D: float, cap: int) -> list[float]:
    lo = math.ceil(D)
    hi = math.floor(D * D)
    if hi - lo + 1 <= cap:
        return [float(e) for e in range(lo, hi + 1)]
    ratio = (hi / lo) ** (1.0 / (cap - 1))
    out = {float(lo), float(hi)}
    x = float(lo)
    for _ in range(cap):
        out.add(min(max(round(x), lo), hi) * 1.0)
        x *= ratio
    return sorted(out)


def _cmd_shell(args) -> tuple[list[dict], int]:
    rows = []
    if args.mode == "sup":
        count, ratio, argmax_e = shell_sup_ratio(args.d, args.D, args.e_samples)
        rows.append(
            {
                "d": args.d,
                "D": args.D,
                "sup_count": count,
                "sup_ratio": ratio,
                "argmax_E": argmax_e,
                "e_samples": args.e_samples,
            }
        )
        return rows, 0
    grid = [args.E] if args.E is not None else _shell_grid(args.D, args.e_samples)
    for e in grid:
        q = ShellQuery(args.d, e, args.D)
        row: dict = {"E": e}
        if args.mode in ("brute", "both"):
            res = shell_count_brute(q)
            row["brute"] = res.count
            row["work_brute"] = res.work
        if args.mode in ("fast", "both"):
            res = shell_count_fast(q)
            row["fast"] = res.count
            row["work_fast"] = res.work
        if args.mode == "both":
            row["equal"] = row["brute"] == row["fast"]
        rows.append(row)
    return rows, 0


def _cmd_divisor(args) -> tuple[list[dict], int]:
    rows = []
    for tok in args.x.split(","):
        x = float(tok)
        rows.append({"x": x, "summatory": divisor_summatory(x), "error": divisor_error(x)})
    return rows, 0


def _cmd_repcount(args) -> tuple[list[dict], int]:
    if args.squares:
        total = diophantine_count(args.n, args.d, args.M)
        return [{"n": args.n, "d": args.d, "M": args.M, "diophantine": total}], 0
    table = representation_count(args.n, args.d, args.M)
    rows = [{"m": m, "count": c} for m, c in sorted(table.counts.items())]
    return rows, 0


def _cmd_greenruzsa(args) -> tuple[list[dict], int]:
    spec = GreenRuzsaSpec(args.base, args.digits)
    values = greenruzsa_generate(spec)
    if args.sparsity is None:
        return [{"value": v} for v in values], 0
    gen = SeedSpec(args.seed).generator(0)
    exponent = math.log(3) / math.log(args.base)
    rows = []
    for _ in range(args.sparsity):
        center = int(gen.integers(0, values[-1] + 2))
        radius = int(gen.integers(1, max(2, values[-1])))
        count = sparsity_count(values, center, radius)
        bound = 24.0 * radius**exponent
        rows.append(
            {
                "center": center,
                "radius": radius,
                "count": count,
                "bound": bound,
                "ok": count <= bound,
            }
        )
    return rows, 0


def _cmd_majorant(args) -> tuple[list[dict], int]:
    if args.genericity:
        points = genericity_experiment(
            process=args.process,
            time_map=_parse_map(args.time_map),
            sizes=_parse_int_list(args.sizes),
            p=args.p,
            epsilon=args.epsilon,
            samples=args.samples,
            restarts=args.restarts,
            seed=SeedSpec(args.seed),
        )
        rows = [
            {
                "size": pt.size,
                "probability": pt.probability,
                "std_error": pt.std_error,
                "samples": pt.samples,
                "threshold": pt.threshold,
            }
            for pt in points
        ]
        return rows, 0
    if not args.freqs:
        raise ValueError("majorant needs --freqs unless --genericity is given")
    freqs = _parse_int_list(args.freqs)
    result = majorant_ratio(freqs, args.p, args.restarts, SeedSpec(args.seed))
    rows = [
        {
            "freqs": ";".join(str(f) for f in freqs),
            "p": args.p,
            "base_moment": result.base_moment,
            "best_moment": result.best_moment,
            "ratio": result.ratio,
            "restarts": result.restarts,
        }
    ]
    return rows, 0


def _verify_oracles(quick: bool) -> list[dict]:
    rows = []
    # shell fast-vs-brute spot grid
    mismatches = []
    checked = 0
    d_values = (2, 3) if quick else (2, 3, 4, 5)
    d_cap = 100 if quick else 400
    for d in d_values:
        for D in range(1, 11):
            for e in range(D, min(D * D, d_cap) + 1):
                q = ShellQuery(d, float(e), float(D))
                checked += 1
                if shell_count_brute(q).count != shell_count_fast(q).count:
                    mismatches.append(f"shell d={d} E={e} D={D}")
    rows.append(
        {
            "check": "shell_oracle",
            "ok": not mismatches,
            "checked": checked,
            "detail": "ok" if not mismatches else mismatches[0],
        }
    )
    # divisor hyperbola vs sieve
    top = 2000 if quick else 20_000
    counts = np.zeros(top + 1, dtype=np.int64)
    for a in range(1, top + 1):
        counts[a::a] += 1
    sums = np.cumsum(counts)
    bad = [int(x) for x in range(1, top + 1) if divisor_summatory(float(x)) != int(sums[x])]
    rows.append(
        {
            "check": "divisor_oracle",
            "ok": not bad,
            "checked": top,
            "detail": "ok" if not bad else f"divisor x={bad[0]}",
        }
    )
    return rows


def _cmd_verify(args) -> tuple[list[dict], int]:
    reports = verification_suite(quick=args.quick, seed=SeedSpec(args.seed or 20240))
    rows = [
        {"check": r.name, "ok": r.ok, "checked": r.checked, "detail": r.detail}
        for r in reports
    ]
    rows.extend(_verify_oracles(args.quick))
    failures = [r["check"] for r in rows if not r["ok"]]
    for name in failures:
        print(f"verification failure: {name}", file=sys.stderr)
    return rows, (3 if failures else 0)


def _cmd_slope(args) -> tuple[list[dict], int]:
    with open(args.input, newline="") as fh:
        reader = csv.DictReader(fh)
        points = [(float(row[args.x_col]), float(row[args.y_col])) for row in reader]
    fit = slope_fit(points)
    rows = [
        {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "residual": fit.residual,
            "points": len(points),
        }
    ]
    return rows, 0


_DISPATCH = {
    "moment": _cmd_moment,
    "shell": _cmd_shell,
    "divisor": _cmd_divisor,
    "repcount": _cmd_repcount,
    "greenruzsa": _cmd_greenruzsa,
    "majorant": _cmd_majorant,
    "verify": _cmd_verify,
    "slope": _cmd_slope,
}


def run(argv: list[str]) -> int:
    started = datetime.now(timezone.utc).isoformat()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    args.raw_argv = list(argv)
    try:
        _resolve_settings(args)
        rows, code = _DISPATCH[args.subcommand](args)
    except (GuardError, OverflowError) as exc:
        print(f"numeric guard: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(rows, args, started)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
