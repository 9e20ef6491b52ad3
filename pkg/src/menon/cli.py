"""Command-line front end.

    menon verify --field "Q(sqrt -1)" --modulus gen:2+1w --chi all --s 1
    menon scan --field Q --max-norm 50 --s 0,1,2
    menon lemmas --field "Q(sqrt -1)" --max-norm 125
    menon classic --max-n 60

Exit status: 0 all cases match, 1 mismatch, 2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from typing import Iterable, Iterator

from .characters import DirichletCharacter, character_group, trivial_character
from .engine import BudgetExceeded, lemma_grid, verify_theorem
from .ideals import (
    FieldDesc,
    Ideal,
    IdealError,
    ideals_up_to_norm,
    parse_field,
    parse_ideal,
    prime_ideals_up_to,
)
from .residues import RingTooLarge, make_ring

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
REPORT_KEYS = ["field", "modulus", "chi", "conductor", "a0", "s", "lhs", "rhs", "match", "ms"]


@dataclass
class RunConfig:
    field: str = "Q"
    max_norm: int = 50
    s_values: list[int] = dc_field(default_factory=lambda: [0])
    chi: str = "all"
    lemmas: bool = False
    out: str | None = None
    format: str = "jsonl"
    jobs: int = 1
    budget: int | None = None

    def __post_init__(self):
        if self.max_norm < 0 or self.jobs < 1 or (self.budget is not None and self.budget < 1):
            raise ValueError("bounds must be positive")
        if self.format not in ("jsonl", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        if any(s < 0 for s in self.s_values):
            raise ValueError("s must be nonnegative")


def _parse_s(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --s list {text!r}") from None


def select_characters(ring, selector: str) -> list[DirichletCharacter]:
    if selector == "all":
        return list(character_group(ring))
    if selector == "trivial":
        return [trivial_character(ring)]
    exps = [int(t) for t in selector.split(",") if t.strip()] if selector != "-" else []
    if len(exps) != len(ring.unit_group.orders):
        raise ValueError(
            f"--chi needs {len(ring.unit_group.orders)} exponents "
            f"(unit group orders {list(ring.unit_group.orders)})"
        )
    return [DirichletCharacter(ring, exps)]


def modulus_cases(
    K: FieldDesc, a: Ideal, chi_sel: str, s_values: list[int], budget: int | None
) -> list[dict]:
    if a.is_zero:
        raise IdealError("modulus must be a nonzero ideal")
    ring = make_ring(K, a)
    out = []
    for chi in select_characters(ring, chi_sel):
        for s in s_values:
            out.append(verify_theorem(K, a, chi, s, budget).to_json())
    return out


class _Writer:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self.csv = None

    def write(self, row: dict, keys: list[str]) -> None:
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(row) + "\n")
            return
        if self.csv is None:
            self.csv = csv.DictWriter(self.stream, fieldnames=keys, extrasaction="ignore")
            self.csv.writeheader()
        self.csv.writerow(row)


def _open_out(path: str | None):
    return open(path, "w", newline="") if path else sys.stdout


def _ordered_map(fn, args: Iterable[tuple], jobs: int) -> Iterator:
    if jobs <= 1:
        for a in args:
            yield fn(*a)
        return
    args = list(args)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, so output is schedule-independent
        yield from pool.map(fn, *zip(*args)) if args else iter(())


def _summary(kind: str, cases: int, mismatches: int) -> None:
    print(json.dumps({"summary": kind, "cases": cases, "mismatches": mismatches}), file=sys.stderr)


def cmd_verify(args) -> int:
    K = parse_field(args.field)
    a = parse_ideal(K, args.modulus)
    rows = modulus_cases(K, a, args.chi, args.s, args.budget)
    stream = _open_out(args.out)
    w = _Writer(args.format, stream)
    for row in rows:
        w.write(row, REPORT_KEYS)
    stream.flush()
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_MISMATCH


def cmd_scan(args) -> int:
    cfg = RunConfig(args.field, args.max_norm, args.s, args.chi, False, args.out, args.format, args.jobs, args.budget)
    K = parse_field(cfg.field)
    ideals = ideals_up_to_norm(K, cfg.max_norm)
    stream = _open_out(cfg.out)
    w = _Writer(cfg.format, stream)
    cases = bad = 0
    work = ((K, a, cfg.chi, cfg.s_values, cfg.budget) for a in ideals)
    for rows in _ordered_map(modulus_cases, work, cfg.jobs):
        for row in rows:
            w.write(row, REPORT_KEYS)
            cases += 1
            bad += not row["match"]
    stream.flush()
    _summary("scan", cases, bad)
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


LEMMA_KEYS = ["lemma", "prime", "norm_p", "m", "t", "chi", "params", "brute", "closed", "ok"]


def _lemma_rows(P: Ideal, m: int) -> list[dict]:
    return [dict(asdict(c), ok=c.ok) for c in lemma_grid(P, m)]


def cmd_lemmas(args) -> int:
    K = parse_field(args.field)
    work = []
    for P in prime_ideals_up_to(K, args.max_norm):
        m = 1
        while P.norm**m <= args.max_norm:
            work.append((P, m))
            m += 1
    stream = _open_out(args.out)
    w = _Writer(args.format, stream)
    cases = bad = 0
    for rows in _ordered_map(_lemma_rows, work, args.jobs):
        for row in rows:
            w.write(row, LEMMA_KEYS)
            cases += 1
            bad += not row["ok"]
    stream.flush()
    _summary("lemmas", cases, bad)
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


def cmd_classic(args) -> int:
    from .rational import IDENTITIES, NEEDS_CHI, rational_characters, verify_identity

    idents = IDENTITIES if args.identity == "all" else [args.identity]
    stream = _open_out(args.out)
    w = _Writer(args.format, stream)
    keys = ["identity", "n", "s", "k", "chi", "conductor", "lhs", "rhs", "match"]
    cases = bad = 0
    for n in range(1, args.max_n + 1):
        for ident in idents:
            chis = rational_characters(n) if ident in NEEDS_CHI else [None]
            s_list = args.s if ident in ("sury", "li_hu_kim", "corollary") else [0]
            k_list = range(1, args.max_k + 1) if ident == "toth" else [2]
            for chi in chis:
                for s in s_list:
                    for k in k_list:
                        row = verify_identity(ident, n, s, k, chi)
                        if isinstance(row["lhs"], tuple):
                            row["lhs"] = list(row["lhs"])
                        w.write(row, keys)
                        cases += 1
                        bad += not row["match"]
    stream.flush()
    _summary("classic", cases, bad)
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="menon", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_field=True):
        if with_field:
            p.add_argument("--field", default="Q", help='"Q" or "Q(sqrt D)"')
        p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--budget", type=int, default=None, help="max terms per evaluation")

    p = sub.add_parser("verify", help="verify one modulus")
    common(p)
    p.add_argument("--modulus", required=True, help='"n", "hnf:a,b,c" or "gen:x+yw;..."')
    p.add_argument("--chi", default="all", help="trivial | all | e1,e2,...")
    p.add_argument("--s", type=_parse_s, default=[0])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="verify every ideal up to a norm bound")
    common(p)
    p.add_argument("--max-norm", type=int, required=True)
    p.add_argument("--chi", default="all")
    p.add_argument("--s", type=_parse_s, default=[0])
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("lemmas", help="prime-power lemma suite")
    common(p)
    p.add_argument("--max-norm", type=int, required=True)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("classic", help="classical identities over Z")
    common(p, with_field=False)
    p.add_argument("--identity", default="all")
    p.add_argument("--max-n", type=int, default=60)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--s", type=_parse_s, default=[0, 1, 2])
    p.set_defaults(func=cmd_classic)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, RingTooLarge) as exc:
        print(f"menon: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (IdealError, ValueError) as exc:
        print(f"menon: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
