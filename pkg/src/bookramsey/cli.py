"""``bookramsey`` command line.

Exit codes: 0 success, 1 usage error, 2 verification failed, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import bounds, interval, search
from .constructions import ConstructionError, ConstructionSpec
from .graph import GraphError

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_alpha(text: str) -> Fraction:
    """Decimal or fraction string, parsed exactly."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from None
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def round_half_up(x: Fraction) -> int:
    return math.floor(Fraction(x) + Fraction(1, 2))


# --------------------------------------------------------------------------
# output


def _header(args, extra: dict | None = None) -> list[str]:
    lines = []
    if not args.no_timestamp:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# generated: {stamp}")
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "no_timestamp")}
    cfg.update(extra or {})
    lines.append("# config: " + " ".join(f"{k}={_fmt(v)}" for k, v in cfg.items()))
    return lines


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Path):
        return str(v)
    return str(v)


def _emit(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_bounds(args) -> int:
    if not 0 < args.alpha_min < args.alpha_max <= 1:
        raise UsageError("need 0 < alpha-min < alpha-max <= 1")
    if args.steps < 2:
        raise UsageError("steps must be at least 2")
    points = bounds.bounds_table(args.alpha_min, args.alpha_max, args.steps)
    lines = _header(args)
    if args.format == "csv":
        body = bounds.write_csv(points)
    else:
        rows = []
        for p in points:
            cells = [f"{p.alpha:.6f}", f"{p.random_lb:.6f}",
                     "-" if p.mid_ub is None else f"{p.mid_ub:.6f}",
                     "-" if p.three_block_lb is None else f"{p.three_block_lb:.6f}",
                     f"{p.best_lower:.6f}", f"{p.best_upper:.6f}", p.regime]
            rows.append(" ".join(f"{c:>12}" for c in cells))
        body = " ".join(f"{c:>12}" for c in bounds.CSV_COLUMNS) + "\n" + "\n".join(rows) + "\n"
    _emit(args, "\n".join(lines) + "\n" + body)
    return EXIT_OK


def _construction_spec(args) -> ConstructionSpec:
    if args.kind == "paley":
        return ConstructionSpec.paley(args.q)
    if args.kind == "blocks":
        return ConstructionSpec.blocks(args.k, args.n)
    if args.kind == "random":
        return ConstructionSpec.random(args.vertices, args.blue_probability, args.seed)
    return ConstructionSpec.three_block(args.vertices, args.p, args.seed)


def _targets(args) -> tuple[int, int]:
    if args.kind == "blocks":
        m = args.m if args.m is not None else 1
        n = args.target_n if args.target_n is not None else args.n
        return m, n
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required")
    return args.m, args.n


def cmd_certify(args) -> int:
    spec = _construction_spec(args)
    m, n = _targets(args)
    g = spec.build()
    result = search.verify_target(g, m, n, spec=spec)
    if isinstance(result, search.Violation):
        print(f"verification failed: {result.describe()}", file=sys.stderr)
        return EXIT_FAILED
    text = "\n".join(_header(args)) + "\n" + result.to_text()
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(result.statement)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert = search.LowerBoundCertificate.from_text(Path(args.certificate).read_text())
        result = cert.recheck()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except search.CertificateError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if isinstance(result, search.Violation):
        print(f"verification failed: {result.describe()}", file=sys.stderr)
        return EXIT_FAILED
    print(f"red-pages: {result.red.pages}")
    print(f"blue-pages: {result.blue.pages}")
    print(result.statement)
    return EXIT_OK


def mc_setup(kind: str, alpha: Fraction, book_n: int, eta: float) -> dict:
    """Construction parameters and targets for a Monte Carlo run at ``alpha``.

    three-block: m = book_n, n = round(alpha * book_n), p = p_star(alpha),
    N = (3 / (1 + 2p^2) - eta) * book_n rounded down to a multiple of 3.
    random: blue probability 1 / (sqrt(alpha) + 1), red target
    round(alpha * book_n), blue target book_n, N = ((sqrt(alpha) + 1)^2 - eta) * book_n.
    """
    small = round_half_up(alpha * book_n)
    if small < 1:
        raise UsageError("alpha * book-n rounds to 0")
    if kind == "three-block":
        p = bounds.p_star(alpha)
        N = int(math.floor((3.0 / (1.0 + 2.0 * p * p) - eta) * book_n))
        N -= N % 3
        return {"kind": "three_block", "p": p, "vertices": N, "m": book_n, "n": small}
    r = math.sqrt(float(alpha))
    p_blue = 1.0 / (r + 1.0)
    N = int(math.floor(((r + 1.0) ** 2 - eta) * book_n))
    return {"kind": "random", "p": p_blue, "vertices": N, "m": small, "n": book_n}


def cmd_mc(args) -> int:
    if not 0 < args.alpha <= 1:
        raise UsageError("alpha must lie in (0, 1]")
    setup = mc_setup(args.kind, args.alpha, args.book_n, args.eta)
    N = args.vertices if args.vertices is not None else setup["vertices"]
    if setup["kind"] == "three_block":
        spec = ConstructionSpec.three_block(N, setup["p"], 0)
    else:
        spec = ConstructionSpec.random(N, setup["p"], 0)
    m, n = setup["m"], setup["n"]
    report = search.mc_certify(spec, m, n, args.trials, args.seed, workers=args.workers)
    lines = _header(args, {"effective_vertices": N, "effective_p": setup["p"],
                           "target_m": m, "target_n": n})
    if args.format == "csv":
        lines.append("trial,seed,red_pages,blue_pages,success")
        for t, (seed, (r, b)) in enumerate(zip(report.seeds, report.pages)):
            lines.append(f"{t},{seed},{r},{b},{int(r < m and b < n)}")
    else:
        lines += [
            f"construction: {spec.description}",
            f"vertices: {N}",
            f"targets: red < {m}, blue < {n}",
            f"trials: {report.trials}",
            f"successes: {report.successes}",
            f"rate: {report.rate!r}",
        ]
        if report.mean_intra_red is not None:
            expect = bounds.construction_expectations(N, setup["p"])
            lines.append(f"mean-intra-red: {report.mean_intra_red!r}")
            lines.append(f"expected-intra-red: {expect.expected_red_intra!r}")
        for t, (seed, (r, b)) in enumerate(zip(report.seeds, report.pages)):
            ok = "ok" if r < m and b < n else "fail"
            lines.append(f"trial {t}: seed={seed} red={r} blue={b} {ok}")
        if report.best is not None:
            lines.append(f"best: {report.best.statement} (trial seed "
                         f"{report.best.spec['seed']})")
    _emit(args, "\n".join(lines) + "\n")
    if args.cert_out is not None and report.best is not None:
        Path(args.cert_out).write_text("\n".join(_header(args)) + "\n" + report.best.to_text())
    return EXIT_OK


def cmd_search(args) -> int:
    schedule = search.Schedule(args.t0, args.cooling, args.steps, args.t_floor)
    out = search.anneal(args.vertices, args.m, args.n, args.weight_red, args.weight_blue,
                        schedule, args.seed)
    lines = _header(args, {"weight_red": out.weight_red, "weight_blue": out.weight_blue})
    lines += [
        f"best-cost: {out.best_cost!r}",
        f"red-pages: {out.red_pages}",
        f"blue-pages: {out.blue_pages}",
        f"steps: {out.steps}",
        f"accepted: {out.accepted}",
        "trace: " + " ".join(repr(c) for c in out.trace),
        f"witness-hex: {out.witness.to_hex()}",
    ]
    if out.found:
        cert = out.certificate()
        lines.append(cert.statement)
        if args.out is not None:
            Path(args.out).write_text("\n".join(_header(args)) + "\n" + cert.to_text())
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if out.found else EXIT_INCONCLUSIVE


def cmd_exhaustive(args) -> int:
    v = search.exhaustive(args.vertices, args.m, args.n)
    lines = _header(args)
    lines += [f"verdict: {v.verdict}", f"colorings-examined: {v.colorings_examined}"]
    if v.found:
        lines.append(f"witness-hex: {v.witness.to_hex()}")
    else:
        lines.append(f"r(B_{v.m},B_{v.n}) <= {v.n_vertices}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_inequality(args) -> int:
    cert = interval.certify_no_solution(args.alpha_min, args.alpha_max, args.tol,
                                        args.max_depth)
    _emit(args, "\n".join(_header(args)) + "\n" + cert.to_text())
    return EXIT_OK if cert.certified else EXIT_INCONCLUSIVE


# --------------------------------------------------------------------------
# parser


def _common(p, out_help="write output to this file instead of standard output"):
    p.add_argument("--out", type=Path, default=None, help=out_help)
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the generated-at header line")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bookramsey", description="Book Ramsey bounds and certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="table of leading constants")
    p.add_argument("--alpha-min", type=parse_alpha, default=Fraction(1, 20))
    p.add_argument("--alpha-max", type=parse_alpha, default=Fraction(1))
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--format", choices=("csv", "text"), default="csv")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", help="build a construction and certify a lower bound")
    kinds = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    k = kinds.add_parser("paley")
    k.add_argument("--q", type=int, required=True)
    k = kinds.add_parser("blocks")
    k.add_argument("--k", type=int, default=2)
    k.add_argument("--n", type=_positive_int, required=True,
                   help="block size parameter; also the blue target unless --target-n")
    k.add_argument("--target-n", type=_positive_int, default=None)
    k = kinds.add_parser("random")
    k.add_argument("--vertices", type=int, required=True)
    k.add_argument("--blue-probability", type=float, default=0.5)
    k.add_argument("--seed", type=_seed, default=0)
    k = kinds.add_parser("three-block")
    k.add_argument("--vertices", type=int, required=True)
    k.add_argument("--p", type=float, required=True)
    k.add_argument("--seed", type=_seed, default=0)
    for name, kp in kinds.choices.items():
        kp.add_argument("--m", type=_positive_int, default=None)
        if name != "blocks":
            kp.add_argument("--n", type=_positive_int, default=None)
        _common(kp, "certificate file")
        kp.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("certificate", type=Path)
    p.set_defaults(func=cmd_verify, no_timestamp=True, out=None)

    p = sub.add_parser("mc", help="Monte Carlo certification of a random construction")
    p.add_argument("kind", choices=("three-block", "random"))
    p.add_argument("--alpha", type=parse_alpha, required=True)
    p.add_argument("--book-n", type=_positive_int, required=True)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--vertices", type=_positive_int, default=None,
                   help="override the vertex count derived from eta")
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=("csv", "text"), default="text")
    p.add_argument("--cert-out", type=Path, default=None,
                   help="write the best certificate here")
    _common(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("search", help="simulated annealing for a witness colouring")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--weight-red", type=float, default=None)
    p.add_argument("--weight-blue", type=float, default=None)
    d = search.Schedule()
    p.add_argument("--t0", type=float, default=d.initial_temperature)
    p.add_argument("--cooling", type=float, default=d.cooling_factor)
    p.add_argument("--steps", type=int, default=d.steps_per_temperature)
    p.add_argument("--t-floor", type=float, default=d.floor_temperature)
    _common(p, "certificate file for a zero-cost witness")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("exhaustive", help="exact search on at most 8 vertices")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    _common(p)
    p.set_defaults(func=cmd_exhaustive)

    p = sub.add_parser("inequality", help="interval certificate that the gap is nonnegative")
    p.add_argument("--alpha-min", type=parse_alpha, default=Fraction(1, 6))
    p.add_argument("--alpha-max", type=parse_alpha, default=Fraction(1, 4))
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-depth", type=_positive_int, default=80)
    _common(p)
    p.set_defaults(func=cmd_inequality)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, ConstructionError, GraphError) as exc:
        print(f"bookramsey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
