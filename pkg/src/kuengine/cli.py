"""Command-line front end: group tables, chart emission, audits, and
Poincare-series dumps.

    kuengine groups --prime 2 --from 80 --to 84
    kuengine chart A:5 --prime 2 --format svg --out a5.svg
    kuengine chart A:5 B:5 --prime 2 --format tikz      (dashed A-minus-B)
    kuengine chart --einfty --prime 2 --window 0:60 --max-s 14
    kuengine audit --which bockstein --prime 2 --max 200
    kuengine ps --prime 2 --max 120 --format csv

All output is deterministic (no timestamps) and, with --out, written
atomically.  Exit status: 0 on success (for audits: all checks passed),
1 on a failed audit, 2 on usage errors or unsupported combinations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import adams, k1, margolis, modules
from .render import (
    ChartDocument,
    document_from_chart,
    document_from_einfty,
    document_overlay,
    render_svg,
    render_tikz,
)

SUPPORTED_PRIMES = (2, 3, 5, 7)

AUDITS = (
    "bockstein",
    "matching",
    "einfty",
    "duality",
    "theorem61",
    "margolis",
    "ext",
    "ps",
)

SERIES = ("free", "free-total", "trivial", "k1")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    prime: int
    window: tuple[int, int] | None = None
    homology: bool = False
    include_free: bool = False
    fmt: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.prime not in SUPPORTED_PRIMES:
            raise UsageError(
                f"prime {self.prime} not in supported set {SUPPORTED_PRIMES}"
            )
        if self.window is not None and self.window[0] > self.window[1]:
            raise UsageError(f"empty window {self.window}")


def _pretty_group(exponents: list[int], p: int) -> str:
    if not exponents:
        return "0"
    return " + ".join(f"Z/{p**e}" for e in exponents)


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


def cmd_groups(config: RunConfig) -> list[dict]:
    """One row per degree in the window: cyclic decomposition of ku^n (or
    ku_n with --homology), plus the trivial-summand count with
    --include-free.  Shift bookkeeping: homology degree n reads cohomology
    degree n + 2p, and a free generator in cohomology degree d leaves its
    trivial Z/p at codegree d + 2p (so in homology mode the count at n is
    the generator count at n itself)."""
    if config.window is None:
        raise UsageError("groups needs a degree window (--from/--to or --window)")
    lo, hi = config.window
    p = config.prime
    shift = 2 * p if config.homology else 0
    cutoff = modules._round_up(max(hi + shift, 1))
    free = None
    if config.include_free:
        free = margolis.trivial_summand_counts(p, hi + shift)
    rows = []
    for n in range(lo, hi + 1):
        exps = modules.ku_group_at(p, n + shift, cutoff)
        row = {
            "degree": n,
            "group": [p**e for e in exps],
            "pretty": _pretty_group(exps, p),
        }
        if free is not None:
            row["free"] = free[n + shift]
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


def _chart_for_selector(p: int, sel: str, cutoff: int | None):
    parts = sel.split(":")
    try:
        if parts[0] == "A" and len(parts) == 2:
            return modules.build_A(p, int(parts[1]))
        if parts[0] == "B" and len(parts) == 2:
            return modules.build_B(p, int(parts[1]))
        if parts[0] == "S" and len(parts) == 3:
            return modules.build_S(p, int(parts[1]), int(parts[2]))
        if sel == "full-even":
            if cutoff is None:
                raise UsageError("full-even needs --window to bound the chart")
            return modules.even_part(p, cutoff)
        if sel == "full-odd":
            if cutoff is None:
                raise UsageError("full-odd needs --window to bound the chart")
            return modules.odd_part(p, cutoff)
    except ValueError as exc:
        raise UsageError(f"selector {sel!r}: {exc}") from exc
    raise UsageError(
        f"unknown selector {sel!r} (expected A:k, B:k, S:k:l, full-even, full-odd)"
    )


def cmd_chart(
    config: RunConfig,
    selectors: list[str],
    einfty: bool = False,
    s_max: int | None = None,
) -> ChartDocument:
    p = config.prime
    if einfty:
        if selectors:
            raise UsageError("--einfty replaces the module selector")
        if config.window is None:
            raise UsageError("--einfty needs --window")
        lo, hi = config.window
        return document_from_einfty(p, lo, hi, s_max if s_max is not None else 40)
    if not selectors:
        raise UsageError("chart needs a module selector (or --einfty)")
    cutoff = config.window[1] if config.window else None
    if len(selectors) == 1:
        return document_from_chart(
            _chart_for_selector(p, selectors[0], cutoff), config.window
        )
    if len(selectors) == 2:
        kinds = {s.split(":")[0] for s in selectors}
        tails = {s.split(":", 1)[1] if ":" in s else "" for s in selectors}
        if kinds != {"A", "B"} or len(tails) != 1:
            raise UsageError(
                "two selectors must be A:k and B:k with the same k "
                "(the dashed A-minus-B overlay)"
            )
        k = int(tails.pop())
        return document_overlay(
            modules.build_B(p, k), modules.build_A(p, k), config.window
        )
    raise UsageError("at most two selectors")


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


def cmd_audit(
    config: RunConfig,
    which: str,
    max_n: int | None = None,
    max_degree: int | None = None,
    max_s: int | None = None,
) -> dict:
    p = config.prime
    if which == "bockstein":
        return k1.bockstein_audit(p, max_n if max_n is not None else 200)
    if which == "matching":
        return adams.matching_audit(
            p, 0, max_n if max_n is not None else 120, max_s if max_s is not None else 40
        )
    if which == "einfty":
        return adams.einfty_audit(p, max_n if max_n is not None else 120, max_s)
    if which == "duality":
        return modules.duality_audit(p, max_n if max_n is not None else 4)
    if which == "theorem61":
        try:
            return k1.theorem61_audit(p, max_n if max_n is not None else 200)
        except ValueError as exc:
            raise UsageError(f"audit theorem61: {exc}") from exc
    if which == "margolis":
        return margolis.margolis_audit(p, max_n if max_n is not None else 60)
    if which == "ext":
        return adams.ext_audit(
            p,
            max_degree if max_degree is not None else 40,
            max_s if max_s is not None else 8,
        )
    if which == "ps":
        return margolis.ps_audit(p, max_n if max_n is not None else 100)
    raise UsageError(f"unknown audit {which!r} (choose from {', '.join(AUDITS)})")


# ---------------------------------------------------------------------------
# Poincare series
# ---------------------------------------------------------------------------


def cmd_ps(config: RunConfig, which: str, top: int) -> list[int]:
    p = config.prime
    if which == "free":
        return list(margolis.free_part_ps(p, top).c)
    if which == "free-total":
        return list(margolis.free_part_total_ps(p, top).c)
    if which == "trivial":
        return list(margolis.trivial_summand_counts(p, top).c)
    if which == "k1":
        return list(k1.k1_dims(p, top))
    raise UsageError(f"unknown series {which!r} (choose from {', '.join(SERIES)})")


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    """Write the fully composed output in one atomic step."""
    if out is None:
        sys.stdout.write(text)
        return
    tmp = out + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, out)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _parse_window(args) -> tuple[int, int] | None:
    if getattr(args, "window", None):
        try:
            a, b = args.window.split(":")
            return (int(a), int(b))
        except ValueError as exc:
            raise UsageError(f"bad --window {args.window!r} (expected a:b)") from exc
    lo = getattr(args, "lo", None)
    hi = getattr(args, "hi", None)
    if lo is None and hi is None:
        return None
    if lo is None or hi is None:
        raise UsageError("--from and --to must be given together")
    return (lo, hi)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="kuengine",
        description="Connective K-theory of the mod-p Eilenberg-MacLane "
        "space K(Z/p, 2): groups, charts, audits, series.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices):
        sp.add_argument("--prime", type=int, default=2)
        sp.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
        sp.add_argument("--out", metavar="PATH")

    g = sub.add_parser("groups", help="cyclic decompositions per degree")
    common(g, ("json",))
    g.add_argument("--from", dest="lo", type=int)
    g.add_argument("--to", dest="hi", type=int)
    g.add_argument("--window", metavar="a:b")
    g.add_argument("--homology", action="store_true")
    g.add_argument("--include-free", action="store_true")

    c = sub.add_parser("chart", help="emit a chart document")
    common(c, ("json", "svg", "tikz"))
    c.add_argument("selector", nargs="*")
    c.add_argument("--window", metavar="a:b")
    c.add_argument("--einfty", action="store_true")
    c.add_argument("--max-s", dest="max_s", type=int)

    a = sub.add_parser("audit", help="run a cross-check and report")
    common(a, ("json",))
    a.add_argument("--which", required=True, choices=AUDITS)
    a.add_argument("--max", dest="max_n", type=int)
    a.add_argument("--max-degree", dest="max_degree", type=int)
    a.add_argument("--max-s", dest="max_s", type=int)

    s = sub.add_parser("ps", help="Poincare series dump")
    common(s, ("json", "csv"))
    s.add_argument("--which", choices=SERIES, default="free")
    s.add_argument("--max", dest="max_n", type=int, default=100)
    return top


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = RunConfig(
            prime=args.prime,
            window=_parse_window(args),
            homology=getattr(args, "homology", False),
            include_free=getattr(args, "include_free", False),
            fmt=args.format,
            out=args.out,
        )
        if args.command == "groups":
            _emit(_dump(cmd_groups(config)), config.out)
            return 0
        if args.command == "chart":
            doc = cmd_chart(config, args.selector, args.einfty, args.max_s)
            if config.fmt == "svg":
                _emit(render_svg(doc), config.out)
            elif config.fmt == "tikz":
                _emit(render_tikz(doc), config.out)
            else:
                _emit(doc.to_json() + "\n", config.out)
            return 0
        if args.command == "audit":
            report = cmd_audit(
                config, args.which, args.max_n, args.max_degree, args.max_s
            )
            _emit(_dump(report), config.out)
            return 0 if report["ok"] else 1
        if args.command == "ps":
            coeffs = cmd_ps(config, args.which, args.max_n)
            if config.fmt == "csv":
                body = "degree,count\n" + "\n".join(
                    f"{n},{c}" for n, c in enumerate(coeffs)
                )
                _emit(body + "\n", config.out)
            else:
                _emit(_dump(coeffs), config.out)
            return 0
    except UsageError as exc:
        print(f"kuengine: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
