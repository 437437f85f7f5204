"""Batch command line front end.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 on malformed input.  Output is deterministic given inputs and seed;
every set is sorted before printing.  --jobs is accepted for interface
stability; execution is serial (all sweeps are pure and partitionable).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import algebra as A
from . import deform as DF
from . import duality as DU
from . import freemedian as FM
from . import words as W
from . import zline as Z
from .closure import rtc_fragment, tc_iterate
from .fixtures import write_fixtures


class CheckFailure(Exception):
    pass


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        for line in text_lines:
            print(line)


def _load_median(args) -> A.MedianAlgebra:
    return A.load_algebra(args.median, checked=not getattr(args, "unchecked", False))


def _load_ctx(args) -> W.WordContext:
    return W.WordContext(W.load_group(args.group), args.indices)


def _load_deformed(args) -> DF.DeformedGroup:
    ctx = _load_ctx(args)
    M = _load_median(args)
    return DF.DeformedGroup(DF.MedianAction(ctx.group, ctx.index_count, M))


def cmd_axioms(args) -> None:
    with open(args.median, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    M = A.algebra_from_json(data, checked=False)
    rep = A.check_median_axioms(M.size, M.table)
    lines = [f"size: {M.size}", f"axioms: {'pass' if rep.ok else 'fail'}"]
    for name, operands in rep.violations:
        lines.append(f"violation {name} at {operands}")
    _emit(args, {"size": M.size, "ok": rep.ok,
                 "violations": [list(v) for v in rep.violations]}, lines)
    if not rep.ok:
        raise CheckFailure


def cmd_spec(args) -> None:
    M = _load_median(args)
    primes = DU.spectrum(M)
    lines = [f"primes ({len(primes)}):"]
    for p in primes:
        members = ",".join(M.labels[i] for i in A.iter_bits(p)) if p else ""
        lines.append(f"  mask {p:#0{M.size + 2}b} {{{members}}}")
    opens = DU.invariant_opens(M)
    lines.append(f"invariant opens ({len(opens)}):")
    payload_opens = []
    for x, o in enumerate(opens):
        ext = sorted(o.extension or ())
        lines.append(f"  {M.labels[x]}: U(x) = {ext}")
        payload_opens.append({"element": M.labels[x], "extension": ext})
    rep = DU.duality_check(M)
    lines.append(f"duality: {'pass' if rep.ok else 'fail'} "
                 f"({rep.pairs_checked} pairs, {rep.hulls_checked} hulls)")
    _emit(args, {"primes": list(primes), "invariant_opens": payload_opens,
                 "duality_ok": rep.ok}, lines)
    if not rep.ok:
        raise CheckFailure


def cmd_fms(args) -> None:
    n = args.base
    if args.enumerate:
        elems = FM.fms_enumerate(n)
        lines = [f"fms({n}): {len(elems)} elements"]
        lines += [f"  {e}" for e in elems]
        _emit(args, {"base": n, "count": len(elems),
                     "elements": [str(e) for e in elems]}, lines)
        return
    if args.median:
        fams = [FM.parse_family(t, n) for t in args.median]
        elems = [FM.FreeMedianElement(n, f) for f in fams]
        med = FM.fms_median(*elems)
        _emit(args, {"median": str(med)}, [str(med)])
        return
    if args.negate:
        fam = FM.parse_family(args.negate, n)
        neg = FM.family_negate(fam)
        _emit(args, {"negate": FM.render_family(neg)}, [FM.render_family(neg)])
        return
    raise ValueError("choose --enumerate, --median or --negate")


def cmd_words(args) -> None:
    ctx = _load_ctx(args)
    wt = lambda w: W.word_to_text(ctx, w)
    if args.action == "normalize":
        w = W.word_from_text(ctx, " ".join(args.words))
        _emit(args, {"word": wt(w), "length": len(w)}, [f"{wt(w)}  (length {len(w)})"])
    elif args.action == "mul":
        u = W.word_from_text(ctx, args.words[0])
        v = W.word_from_text(ctx, args.words[1])
        p = W.mul(ctx, u, v)
        u2, h, v2 = W.mul_factorization(ctx, u, v)
        lines = [wt(p), f"factorization: {wt(u2)} | h={h} | {wt(v2)}"]
        _emit(args, {"product": wt(p), "factor": [wt(u2), h, wt(v2)]}, lines)
    elif args.action == "inv":
        u = W.word_from_text(ctx, args.words[0])
        _emit(args, {"inverse": wt(W.inv(ctx, u))}, [wt(W.inv(ctx, u))])
    elif args.action == "ball":
        r = int(args.words[0])
        b = W.ball(ctx, r)
        formula = W.ball_count(ctx, r)
        lines = [f"ball({r}): {len(b)} words (recursion: {formula})"]
        lines += [f"  {wt(w)}" for w in b]
        _emit(args, {"radius": r, "count": len(b), "recursion": formula,
                     "words": [wt(w) for w in b]}, lines)
        if formula != len(b):
            raise CheckFailure
    elif args.action == "msfg":
        ok, witness = W.has_free_median_action(ctx.group)
        lines = [f"free median action: {'yes' if ok else 'no'}"]
        if witness is not None:
            lines.append(f"witness of odd prime order: element {witness}")
        _emit(args, {"ok": ok, "witness": witness}, lines)
    else:
        raise ValueError(f"unknown words action {args.action}")


def cmd_deform(args) -> None:
    if args.action == "enumerate":
        ctx = _load_ctx(args)
        ops = DF.enumerate_compatible_medians(ctx.group, ctx.index_count)
        shapes: dict[str, int] = {}
        for M in ops:
            shapes[DF.classify_median_algebra(M)] = shapes.get(DF.classify_median_algebra(M), 0) + 1
        lines = [f"compatible median tables: {len(ops)}"]
        lines += [f"  {k}: {v}" for k, v in sorted(shapes.items())]
        _emit(args, {"count": len(ops), "shapes": shapes}, lines)
        return
    D = _load_deformed(args)
    ctx = D.ctx
    wt = lambda w: W.word_to_text(ctx, w)
    if args.action == "verify":
        rep = D.verify(args.radius, m3_radius=args.m3_radius,
                       compat_radius=args.compat_radius, cell_radius=args.cell_radius)
        if args.sample_m3:
            rng = random.Random(args.seed)
            pool = W.ball(ctx, args.radius + 2)
            bad = []
            for _ in range(args.sample_m3):
                x, y, z, u, v = (rng.choice(pool) for _ in range(5))
                lhs = D.median(D.median(x, y, z), u, v)
                rhs = D.median(D.median(x, u, v), D.median(y, u, v), z)
                if lhs != rhs:
                    bad.append((x, y, z, u, v))
            rep.record("sampled_self_distributivity", args.sample_m3, bad)
        lines = rep.summary().splitlines()
        lines.append(f"verify: {'pass' if rep.ok else 'fail'}")
        _emit(args, {"ok": rep.ok, "checks": rep.checks,
                     "violations": {k: len(v) for k, v in rep.violations.items()}}, lines)
        if not rep.ok:
            raise CheckFailure
    elif args.action == "cell":
        u = W.word_from_text(ctx, args.words[0])
        v = W.word_from_text(ctx, args.words[1])
        cell = D.cell(u, v)
        lines = [f"cell [{wt(u)}, {wt(v)}]: {len(cell)} elements"]
        lines += [f"  {wt(z)}" for z in cell]
        _emit(args, {"cell": [wt(z) for z in cell]}, lines)
    elif args.action == "config":
        v = W.word_from_text(ctx, args.words[0])
        cfg = D.configuration(v)
        lines = [f"configuration of {wt(v)}: {len(cfg.cut_words)} cut words"]
        for w, landing, size in zip(cfg.cut_words, cfg.landings, cfg.interval_sizes):
            lines.append(f"  cut {wt(w):<20} landing {wt(landing):<20} interval size {size}")
        _emit(args, {"cuts": [wt(w) for w in cfg.cut_words],
                     "landings": [wt(w) for w in cfg.landings],
                     "interval_sizes": list(cfg.interval_sizes)}, lines)
    else:
        raise ValueError(f"unknown deform action {args.action}")


def cmd_zline(args) -> None:
    if args.action == "verify":
        n = int(args.params[0])
        reports = {op.value: Z.window_verify(op, n) for op in Z.ZOp}
        lines = [f"{name}: {'pass' if rep.ok else 'fail'} ({rep.checks} checks)"
                 for name, rep in reports.items()]
        _emit(args, {k: v.ok for k, v in reports.items()}, lines)
        if not all(rep.ok for rep in reports.values()):
            raise CheckFailure
    elif args.action == "table":
        opname, a, b = args.params[0], int(args.params[1]), int(args.params[2])
        op = {o.value: o for o in Z.ZOp}[opname]
        lines = []
        rows = []
        for x in range(a, b + 1):
            for y in range(a, b + 1):
                for z in range(a, b + 1):
                    v = Z.z_median(op, x, y, z)
                    lines.append(f"m({x},{y},{z}) = {v}")
                    rows.append([x, y, z, v])
        _emit(args, {"op": opname, "table": rows}, lines)
    elif args.action == "quotient":
        n = int(args.params[0])
        rep = Z.z_quotient_check(n)
        lines = [f"quotient checks: {'pass' if rep.ok else 'fail'} ({rep.checks} checks)"]
        _emit(args, {"ok": rep.ok, "checks": rep.checks}, lines)
        if not rep.ok:
            raise CheckFailure
    else:
        raise ValueError(f"unknown zline action {args.action}")


def cmd_closure(args) -> None:
    if args.action == "rtc":
        D = _load_deformed(args)
        rep = rtc_fragment(D, args.radius)
        lines = [
            f"fragment at radius {args.radius}: {rep.element_count} elements "
            f"({rep.generator_count} generators, {rep.new_elements} new; "
            f"counts are distinct-at-radius lower bounds)",
        ]
        for name in sorted(rep.checks):
            bad = rep.violations.get(name, [])
            lines.append(f"  {name}: {rep.checks[name]} checked, "
                         f"{'ok' if not bad else f'{len(bad)} violations'}")
        _emit(args, {"elements": rep.element_count, "new": rep.new_elements,
                     "ok": rep.ok, "checks": rep.checks}, lines)
        if not rep.ok:
            raise CheckFailure
    elif args.action == "tc":
        levels = tc_iterate(args.seed_size, args.depth, [args.radius] * max(args.depth, 1))
        lines = []
        for lv in levels:
            med = lv.median_fragment_size if lv.median_fragment_size >= 0 else "not materialized"
            lines.append(f"level {lv.level}: group fragment {lv.group_fragment_size}, "
                         f"median fragment {med}"
                         + (f" (oracle {lv.oracle_size})" if lv.oracle_size is not None else ""))
        _emit(args, {"levels": [
            {"level": lv.level, "group": lv.group_fragment_size,
             "median": lv.median_fragment_size, "oracle": lv.oracle_size}
            for lv in levels]}, lines)
    else:
        raise ValueError(f"unknown closure action {args.action}")


def cmd_fixtures(args) -> None:
    hashes = write_fixtures(args.out)
    lines = [f"{h}  {name}" for name, h in sorted(hashes.items())]
    _emit(args, {"hashes": hashes}, lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="median-forge")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1,
                   help="reserved; sweeps run serially")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("axioms", help="check a median table file")
    sp.add_argument("--median", required=True)
    sp.set_defaults(func=cmd_axioms)

    sp = sub.add_parser("spec", help="primes and invariant opens of a median table")
    sp.add_argument("--median", required=True)
    sp.add_argument("--unchecked", action="store_true")
    sp.set_defaults(func=cmd_spec)

    sp = sub.add_parser("fms", help="free median algebra over a finite base")
    sp.add_argument("--base", type=int, required=True)
    sp.add_argument("--enumerate", action="store_true")
    sp.add_argument("--median", nargs=3, metavar="ELEM")
    sp.add_argument("--negate", metavar="FAMILY")
    sp.set_defaults(func=cmd_fms)

    sp = sub.add_parser("words", help="reduced words in the free product")
    sp.add_argument("--group", required=True)
    sp.add_argument("--indices", type=int, required=True)
    sp.add_argument("action", choices=("normalize", "mul", "inv", "ball", "msfg"))
    sp.add_argument("words", nargs="*")
    sp.set_defaults(func=cmd_words)

    sp = sub.add_parser("deform", help="the deformed median group structure")
    sp.add_argument("--group", required=True)
    sp.add_argument("--indices", type=int, required=True)
    sp.add_argument("--median")
    sp.add_argument("--unchecked", action="store_true")
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--m3-radius", dest="m3_radius", type=int)
    sp.add_argument("--compat-radius", dest="compat_radius", type=int)
    sp.add_argument("--cell-radius", dest="cell_radius", type=int)
    sp.add_argument("--sample-m3", dest="sample_m3", type=int, default=0)
    sp.add_argument("action", choices=("verify", "cell", "config", "enumerate"))
    sp.add_argument("words", nargs="*")
    sp.set_defaults(func=cmd_deform)

    sp = sub.add_parser("zline", help="integer median fixtures")
    sp.add_argument("action", choices=("verify", "table", "quotient"))
    sp.add_argument("params", nargs="*")
    sp.set_defaults(func=cmd_zline)

    sp = sub.add_parser("closure", help="bounded-radius closure fragments")
    sp.add_argument("action", choices=("rtc", "tc"))
    sp.add_argument("--group")
    sp.add_argument("--indices", type=int)
    sp.add_argument("--median")
    sp.add_argument("--unchecked", action="store_true")
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--depth", type=int, default=1)
    sp.add_argument("--seed-size", dest="seed_size", type=int, default=2)
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("fixtures", help="write the canonical fixture files")
    sp.add_argument("--out", default="fixtures")
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CheckFailure:
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
