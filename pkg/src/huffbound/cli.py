"""Command-line entry point: bounds, redundancy maps, conjecture sweeps, V2V."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import conjecture, optimize, prune, v2v
from .enumeration import all_codes, trajectory_count
from .exactnum import compare, EQUAL, to_canonical, to_decimal
from .feasibility import InvariantError
from .huffman import code_lengths, tree_walk_codewords
from .source import Source, SubSource, parse_probabilities, parse_probability

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 2, 3

log = logging.getLogger("huffbound")


class UsageError(ValueError):
    pass


def bound_report(result: optimize.BoundResult, mode: str, digits: int) -> dict:
    return {
        "exact": to_canonical(result.value),
        "decimal": to_decimal(result.value, digits),
        "code": str(result.best_code),
        "witness": [[leaf, str(p)] for leaf, p in result.witness.items()],
        "psi_size": result.psi_size,
        "threshold": result.threshold,
        "mode": mode,
        "n": result.n,
    }


def _sub_source(text: str) -> SubSource:
    try:
        return SubSource.from_probabilities(parse_probabilities(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def compute_bound(x: SubSource, n=None, upto=None, general=False,
                  allow_large=False):
    if n is not None:
        if n < len(x):
            raise UsageError(f"--n {n} is below the {len(x)} known symbols")
        return optimize.r_min_n(x, n, allow_large=allow_large), "fixed-n"
    if upto is not None:
        return optimize.r_min_upto(x, upto, allow_large=allow_large), "upto-n"
    return prune.r_min_star(x), "general"


def cmd_bound(args) -> int:
    x = _sub_source(args.known)
    result, mode = compute_bound(x, args.n, args.upto, args.general,
                                 args.allow_large)
    if mode == "general" and len(x):
        result.threshold = optimize.threshold(x)
    report = bound_report(result, mode, args.digits)
    print(json.dumps(report, indent=2, ensure_ascii=False))
    return EXIT_OK


def _map_point(args):
    point, fixed = args
    x = SubSource.from_probabilities(list(point) + list(fixed))
    return point, prune.r_min_star(x)


def map_points(start, stop, step, dims, fixed):
    if step <= 0:
        raise UsageError("--step must be positive")
    values = []
    v = start
    while v <= stop:
        values.append(v)
        v += step
    rest = sum(fixed, Fraction(0))
    if dims == 1:
        points = [(a,) for a in values]
    else:
        points = [(a, b) for a in values for b in values]
    out = []
    for pt in points:
        total = sum(pt, Fraction(0)) + rest
        if total > 1:
            continue
        if total == 1 and len(pt) + len(fixed) < 2:
            continue
        out.append(pt)
    return out


def cmd_map(args) -> int:
    fixed = parse_probabilities(args.fixed) if args.fixed else []
    step = parse_probability(args.step)
    start = parse_probability(args.start) if args.start else step
    stop = parse_probability(args.stop) if args.stop else Fraction(1)
    points = map_points(start, stop, step, args.dims, fixed)
    jobs = [(pt, tuple(fixed)) for pt in points]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_map_point, jobs, chunksize=4))
    else:
        results = [_map_point(j) for j in jobs]
    ids: dict[str, int] = {}
    header = ["p1"] if args.dims == 1 else ["p1", "p2"]
    header += ["exact", "decimal", "best_code_id", "best_code"]
    try:
        fh = open(args.out, "w", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    with fh:
        w = csv.writer(fh)
        w.writerow(header)
        for point, r in sorted(results, key=lambda t: t[0]):
            code = str(r.best_code)
            ids.setdefault(code, len(ids))
            w.writerow([str(p) for p in point]
                       + [to_canonical(r.value), to_decimal(r.value, args.digits),
                          ids[code], code])
    print(json.dumps({"points": len(results), "codes": len(ids),
                      "out": args.out}))
    return EXIT_OK


def cmd_conjecture(args) -> int:
    step = Fraction(1, 1000) if args.full else parse_probability(args.step)
    if step <= 0:
        raise UsageError("--step must be positive")
    bad, checked = conjecture.check_grid(step, workers=args.workers)
    conjecture.write_mismatches(args.out, bad)
    print(json.dumps({"step": str(step), "checked": checked,
                      "mismatches": len(bad), "out": args.out}))
    return EXIT_OK


def cmd_v2v(args) -> int:
    try:
        base = Source.from_probabilities(parse_probabilities(args.base))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.dict:
        d = v2v.Dictionary.parse(args.dict)
        tree = v2v.v2v_code(d, base)
        value = v2v.v2v_redundancy(d, base)
        out = {"dictionary": str(d),
               "codewords": tree_walk_codewords(tree),
               "lengths": code_lengths(tree),
               "expected_word_length": str(v2v.expected_length(d, base))}
    else:
        if args.max_len is None:
            raise UsageError("--known-words needs --max-len")
        d = v2v.Dictionary.parse(args.known_words)
        x = SubSource((v2v.name(w), v2v.word_probability(w, base))
                      for w in d.words)
        if len(x) and x.total < 1:
            print(f"threshold T(X) = {optimize.threshold(x)}", file=sys.stderr)
        value = v2v.v2v_prune_bound(d, base, args.max_len)
        out = {"known_words": str(d), "max_len": args.max_len}
    out.update(exact=to_canonical(value), decimal=to_decimal(value, args.digits))
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_oracle(args) -> int:
    x = _sub_source(args.known)
    exhaustive = optimize.r_min_upto(x, args.upto, allow_large=args.allow_large)
    pruned = prune.r_min_star(x)
    same = compare(exhaustive.value, pruned.value) == EQUAL
    counts = {}
    for n in range(2, args.upto + 1):
        found = len(all_codes(n, dedup=False, allow_large=args.allow_large))
        counts[n] = {"enumerated": found, "formula": trajectory_count(n)}
    out = {
        "exhaustive": to_canonical(exhaustive.value),
        "pruned": to_canonical(pruned.value),
        "verdict": "Equal" if same else "Unequal",
        "threshold": optimize.threshold(x) if len(x) else None,
        "psi_size": pruned.psi_size,
        "psi_codes": sorted({str(st.tree) for st in pruned.extra["psi"].states
                             if prune.is_code(st, x)}) if len(x) else [],
        "trajectory_counts": counts,
    }
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="huffbound",
                                 description="Lower bounds on Huffman redundancy "
                                             "with partially known probabilities.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="bound for one set of known probabilities")
    p.add_argument("--known", required=True, help="e.g. 49/100,1/2")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int, help="alphabet size exactly N")
    g.add_argument("--upto", type=int, help="alphabet sizes up to N")
    g.add_argument("--general", action="store_true", help="any alphabet size "
                   "(default)")
    p.add_argument("--digits", type=int, default=6)
    p.add_argument("--allow-large", action="store_true",
                   help="lift the enumeration cap")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("map", help="CSV of the general bound over a grid")
    p.add_argument("--fixed", default="", help="probabilities held fixed")
    p.add_argument("--step", required=True)
    p.add_argument("--start")
    p.add_argument("--stop")
    p.add_argument("--dims", type=int, choices=(1, 2), default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--digits", type=int, default=6)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("conjecture", help="check the two-symbol closed form")
    p.add_argument("--step", default="1/50")
    p.add_argument("--full", action="store_true", help="step 1/1000 (hours)")
    p.add_argument("--out", default="conjecture_mismatches.csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("v2v", help="V2V dictionary redundancy or pruning bound")
    p.add_argument("--base", required=True, help="base source probabilities")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dict", help="exhaustive dictionary, e.g. a1a1,a1a2,a2")
    g.add_argument("--known-words", help="words known to be in the dictionary")
    p.add_argument("--max-len", type=int)
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_v2v)

    p = sub.add_parser("oracle", help="exhaustive vs pruned comparison")
    p.add_argument("--known", required=True)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
