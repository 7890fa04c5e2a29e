# app.py
"""Command-line entry point for the Suzuki curve codes.

    python app.py params --m 1 --ell 63
    python app.py genmat --ell 3 --out g3.txt
    python app.py selftest --quick

Reports go to stdout (or ``--out``); logs go to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

import agcode
import automorphism
import selftest
from curve import SuzukiParams, suzuki_curve
from errors import SuzukiError
from gf2e import DEFAULT_TABLE_BUDGET
from riemann_roch import basis, check_level, expected_dimension, max_level

log = logging.getLogger(__name__)

SCHEMA = 1
TABLE_BUDGET_ENV = "SUZUKI_TABLE_BUDGET"
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class RunConfig:
    m: int
    ell: int
    seed: int
    out: Path | None
    json: bool
    table_budget: int
    quick: bool = False
    verbose: bool = False

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    @property
    def csv(self) -> bool:
        return self.out is not None and self.out.suffix == ".csv"


def _default_table_budget() -> int:
    raw = os.environ.get(TABLE_BUDGET_ENV)
    if raw is None:
        return DEFAULT_TABLE_BUDGET
    try:
        return int(raw, 0)
    except ValueError:
        raise SystemExit(f"error: {TABLE_BUDGET_ENV}={raw!r} is not an integer")


def load_config(args: argparse.Namespace) -> RunConfig:
    params = SuzukiParams.for_m(args.m)
    ell = max_level(params) if args.ell is None else args.ell
    check_level(params, ell)
    return RunConfig(
        m=args.m,
        ell=ell,
        seed=args.seed & (2**64 - 1),
        out=args.out,
        json=args.json,
        table_budget=_default_table_budget() if args.table_budget is None else args.table_budget,
        quick=getattr(args, "quick", False),
        verbose=args.verbose,
    )


# --- output ---------------------------------------------------------------


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)
        log.info("wrote %s", cfg.out)


def emit_table(
    cfg: RunConfig, df: pd.DataFrame, extra: dict | None = None, trailer: list[str] | None = None
) -> None:
    """JSON with ``extra`` merged in, CSV when --out ends in .csv, else a text table followed by ``trailer``."""
    if cfg.json:
        payload = {"schema": SCHEMA, **(extra or {}), "rows": df.to_dict(orient="records")}
        _write(cfg, json.dumps(payload, indent=2, default=_json_default) + "\n")
    elif cfg.csv:
        df.to_csv(cfg.out, index=False)
        log.info("wrote %s", cfg.out)
    else:
        _write(cfg, "\n".join([df.to_string(index=False), *(trailer or [])]) + "\n")


def emit_lines(cfg: RunConfig, lines: list[str], key: str) -> None:
    if cfg.json:
        _write(cfg, json.dumps({"schema": SCHEMA, key: lines}, indent=2) + "\n")
    else:
        _write(cfg, "\n".join(lines) + "\n")


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _read_symbols(path: Path | None) -> list[str]:
    text = path.read_text() if path is not None else sys.stdin.read()
    return text.split()


# --- subcommands ----------------------------------------------------------


def cmd_params(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = SuzukiParams.for_m(cfg.m)
    cp = agcode.compute_params(cfg.m, cfg.ell)
    iso = agcode.isodual_level(p)
    row = {
        "m": cfg.m,
        "ell": cfg.ell,
        "q0": p.q0,
        "q": p.q,
        "g": p.g,
        "N1": p.N1,
        "N4": p.N4,
        "n": cp.n,
        "k": cp.k,
        "dstar": cp.dstar,
        "t": cp.t,
        "rate": round(cp.rate, 6),
        "dual_level": agcode.dual_level(p, cfg.ell),
        "isodual_level": iso,
        "isodual": cfg.ell == iso,
        "iso_orthogonal": agcode.iso_orthogonal(p, cfg.ell),
    }
    emit_table(cfg, pd.DataFrame([row]))
    return 0


def cmd_points(cfg: RunConfig, args: argparse.Namespace) -> int:
    curve = suzuki_curve(cfg.m, cfg.table_budget)
    points = curve.rational_points_E() if args.field == "E" else curve.enumerate_points(int(args.field))
    if cfg.csv:
        width = (points.ctx.e + 3) // 4
        df = pd.DataFrame(
            {
                "x": [f"{v:0{width}x}" for v in points.xs.tolist()],
                "y": [f"{v:0{width}x}" for v in points.ys.tolist()],
            }
        )
        emit_table(cfg, df)
    else:
        p = curve.params
        header = f"# m={p.m} q={p.q} modulus={points.ctx.describe()['modulus']} count={len(points)}"
        emit_lines(cfg, [header, *points.to_lines()], "points")
    return 0


def cmd_basis(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = SuzukiParams.for_m(cfg.m)
    rr = basis(params, cfg.ell)
    expected = expected_dimension(params, cfg.ell)
    pairs = list(zip(rr.monomials, rr.pole_orders))
    if cfg.json or cfg.csv:
        df = pd.DataFrame(
            [(i, *(getattr(mono, f) for f in "abcdr"), n) for i, (mono, n) in enumerate(pairs)],
            columns=["row", "a", "b", "c", "d", "r", "pole_order"],
        )
        emit_table(cfg, df, {"m": cfg.m, "ell": cfg.ell, "k": rr.k, "expected_dimension": expected})
    else:
        lines = [f"n={n} a={mono.a} b={mono.b} c={mono.c} d={mono.d} r={mono.r}" for mono, n in pairs]
        lines.append(f"k={rr.k} expected_dimension={expected}")
        emit_lines(cfg, lines, "basis")
    return 0


def _code(cfg: RunConfig) -> agcode.SuzukiCode:
    return agcode.build_code(suzuki_curve(cfg.m, cfg.table_budget), cfg.ell)


def cmd_genmat(cfg: RunConfig, args: argparse.Namespace) -> int:
    emit_lines(cfg, agcode.genmat_lines(_code(cfg)), "genmat")
    return 0


def cmd_encode(cfg: RunConfig, args: argparse.Namespace) -> int:
    code = _code(cfg)
    big = code.curve.big
    msg = [big.from_hex(s) for s in _read_symbols(args.input)]
    word = agcode.encode(code, msg, systematic=args.systematic)
    emit_lines(cfg, [" ".join(big.to_hex(v) for v in word.tolist())], "codeword")
    return 0


def cmd_decode_erasures(cfg: RunConfig, args: argparse.Namespace) -> int:
    code = _code(cfg)
    big = code.curve.big
    received = [None if s == "?" else big.from_hex(s) for s in _read_symbols(args.input)]
    msg = agcode.erasure_decode(code, received)
    emit_lines(cfg, [" ".join(big.to_hex(v) for v in msg.tolist())], "message")
    return 0


def cmd_dual_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    code = _code(cfg)
    report = agcode.verify_duality(code, args.samples, cfg.rng(), full=args.full)
    row = {
        "ell": report.ell,
        "ell_dual": report.ell_dual,
        "n": report.n,
        "k": report.k,
        "k_dual": report.k_dual,
        "samples": report.samples,
        "failures": report.failures,
        "first_counterexample": report.first_counterexample,
        "full_zero": report.full_zero,
        "passed": report.passed,
    }
    emit_table(cfg, pd.DataFrame([row]))
    return 0 if report.passed else 1


def cmd_aut_check(cfg: RunConfig, args: argparse.Namespace) -> int:
    code = _code(cfg)
    big = code.curve.big
    rng = cfg.rng()
    rows = []
    failing = None
    for _ in range(args.trials):
        sigma = automorphism.AffineAut.random(rng, code.curve.params.q)
        report = automorphism.invariance_check(code, sigma, args.words, rng)
        rows.append(
            {
                "a": sigma.a,
                "b": sigma.b,
                "c": sigma.c,
                "fixes_D": report.fixes_D,
                "permutes_E": report.permutes_E,
                "failures": report.failures,
                "passed": report.passed,
            }
        )
        if failing is None and report.counterexample is not None:
            failing = {
                "a": sigma.a,
                "b": sigma.b,
                "c": sigma.c,
                "codeword": [big.to_hex(v) for v in report.counterexample],
            }
    trailer = None
    if failing is not None:
        trailer = [
            f"# counterexample sigma=({failing['a']},{failing['b']},{failing['c']}) codeword="
            + " ".join(failing["codeword"])
        ]
    emit_table(cfg, pd.DataFrame(rows), {"counterexample": failing}, trailer=trailer)
    return 0 if all(row["passed"] for row in rows) else 1


def cmd_selftest(cfg: RunConfig, args: argparse.Namespace) -> int:
    claims = selftest.run(cfg, corrupt_modulus=args.corrupt_modulus)
    df = selftest.to_frame(claims)
    emit_table(cfg, df, {"passed": selftest.all_passed(claims)})
    return 0 if selftest.all_passed(claims) else 1


COMMANDS = {
    "params": cmd_params,
    "points": cmd_points,
    "basis": cmd_basis,
    "genmat": cmd_genmat,
    "encode": cmd_encode,
    "decode-erasures": cmd_decode_erasures,
    "dual-verify": cmd_dual_verify,
    "aut-check": cmd_aut_check,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=1, help="curve parameter, q = 2^(2m+1) (default 1)")
    common.add_argument("--ell", type=int, default=None, help="level ℓ, 1..q^2-1 (default q^2-1)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every sampled check")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", type=Path, default=None, help="write the report here (.csv for CSV tables)")
    common.add_argument(
        "--table-budget",
        type=int,
        default=None,
        help=f"largest field given log tables (default ${TABLE_BUDGET_ENV} or {DEFAULT_TABLE_BUDGET})",
    )
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(description="Suzuki curve algebraic-geometry codes")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="code parameters from the closed forms")
    points = sub.add_parser("points", parents=[common], help="rational points in canonical order")
    points.add_argument("--field", choices=["1", "4", "E"], default="E", help="F_q, F_(q^4) or Supp(E)")
    sub.add_parser("basis", parents=[common], help="monomial basis of L(ℓD)")
    sub.add_parser("genmat", parents=[common], help="generator matrix as hex rows")
    encode = sub.add_parser("encode", parents=[common], help="encode k hex symbols")
    encode.add_argument("--input", type=Path, default=None, help="symbols file (default stdin)")
    encode.add_argument("--systematic", action="store_true", help="use the row-reduced generator")
    decode = sub.add_parser("decode-erasures", parents=[common], help="recover a message, '?' marks an erasure")
    decode.add_argument("--input", type=Path, default=None, help="symbols file (default stdin)")
    dual = sub.add_parser("dual-verify", parents=[common], help="check orthogonality against the dual level")
    dual.add_argument("--samples", type=int, default=1000)
    dual.add_argument("--full", action="store_true", help="also compute the whole Gram product")
    aut = sub.add_parser("aut-check", parents=[common], help="invariance under random affine automorphisms")
    aut.add_argument("--trials", type=int, default=50, help="automorphisms to draw")
    aut.add_argument("--words", type=int, default=5, help="codewords per automorphism")
    test = sub.add_parser("selftest", parents=[common], help="reproduce the m=1 claims")
    test.add_argument("--quick", action="store_true", help="skip the ℓ=63 and ℓ=45 checks")
    test.add_argument("--corrupt-modulus", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args)
    except SuzukiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
