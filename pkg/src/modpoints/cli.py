"""Command-line entry point: ``modpoints <command> ...``."""

from __future__ import annotations

import argparse
import sys

from .checker import Status, check_semibig, find, load_db, search
from .cohom import verify_h1
from .curves import local_data
from .errors import WorkbenchError
from .frobmat import borel_fixed_point, disc_decomposition, frobenius_matrix
from .hecke import a_ell, sweep_square_equivalence, sweep_trace_identities
from .reptheory import socle_classes, verify_not0, verify_rigidity

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _db(args):
    return load_db(args.db)


def cmd_check(args) -> int:
    db = _db(args)
    E, A = find(db, args.E), find(db, args.A)
    v = check_semibig(
        E, A, args.p, args.n, strict_cond6=args.strict_cond6, assume_surjective=args.assume_surjective
    )
    print(f"E = {E.label} {E.model}  A = {A.label} {A.model}  p = {args.p}  n = {args.n}")
    for c in v.certificates:
        print(c.line())
    print(f"OVERALL {v.overall.value}")
    print(v.conclusion)
    return EXIT_PASS if v.overall is Status.PASS else EXIT_FAIL


def cmd_search(args) -> int:
    db = _db(args)
    res = search(
        db,
        args.E,
        args.A,
        args.pmax,
        workers=args.workers,
        prime_conductor_only=args.prime_conductor_only,
        assume_surjective=args.assume_surjective,
    )
    for v in res.verdicts:
        if v.overall is Status.FAIL and not args.all:
            continue
        failed = [str(c.index) for c in v.certificates if c.status is not Status.PASS]
        extra = f" conds={','.join(failed)}" if failed else ""
        print(f"{v.overall.value} {v.e_label} {v.a_label} {v.p}{extra}")
    print(f"# {len(res.passing)} pass, {len(res.unverified)} unverified, {len(res.verdicts)} checked")
    return EXIT_PASS if res.passing else EXIT_FAIL


def cmd_local_data(args) -> int:
    rec = find(_db(args), args.curve)
    ld = local_data(rec.model, args.prime)
    print(
        f"{rec.label} at {args.prime}: kodaira={ld.kodaira} f={ld.f} c={ld.c} "
        f"kind={ld.kind.value} ord_disc={ld.ord_disc}"
    )
    return EXIT_PASS


def cmd_aell(args) -> int:
    rec = find(_db(args), args.curve)
    print(f"a_{args.ell}({rec.label}) = {a_ell(rec.model, args.ell)}")
    return EXIT_PASS


def cmd_verify_identities(args) -> int:
    bad = sweep_trace_identities(args.lmax, args.nmax)
    print(f"trace identities: {len(bad)} counterexamples (ell < {args.lmax}, n <= {args.nmax})")
    for b in bad[:10]:
        print(f"  {b}")
    ok = not bad
    if args.square_bound:
        sq = sweep_square_equivalence(args.square_bound, args.square_nmax, forward_only=args.forward_only)
        mode = "forward" if args.forward_only else "both directions"
        print(f"square equivalence ({mode}): {len(sq)} counterexamples")
        for b in sq[:10]:
            print(f"  a={b[0]} ell={b[1]} p={b[2]} n={b[3]}")
        ok = ok and not sq
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_verify_cohom(args) -> int:
    v = verify_h1(args.p, args.n, args.which, args.m)
    for line in v.lines():
        print(line)
    return EXIT_PASS if v.passed else EXIT_FAIL


def cmd_verify_rep(args) -> int:
    ok = True
    for c in socle_classes(args.p, args.n):
        print(f"socle: {c.tag} dim={c.dim} multiplicity={c.multiplicity} borel_fixed={c.fixed_dim}")
        ok = ok and c.tag in ("trivial", "Steinberg")
    for v in (verify_not0(args.p, args.n), verify_rigidity(args.p, args.n)):
        print(f"{'PASS' if v.passed else 'FAIL'} {v.claim}: {v.computed}")
        ok = ok and v.passed
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_frobmat(args) -> int:
    fd = disc_decomposition(args.a, args.q)
    M = frobenius_matrix(args.a, args.q)
    print(f"u={fd.u} b={fd.b} delta={fd.delta}")
    print(f"M={M.rows()}")
    if fd.b != 1:
        print("note: b != 1, so Z[Frobenius] is not the maximal order")
    pt = borel_fixed_point(M, args.p, args.n)
    print(f"fixed point mod {args.p}^{args.n + 1}: {pt if pt else 'none'}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modpoints", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def with_db(p):
        p.add_argument("--db", default=None, help="record file (default: bundled dataset)")
        return p

    p = with_db(sub.add_parser("check", help="evaluate the six conditions for (E, A, p)"))
    p.add_argument("--E", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--assume-surjective", action="store_true")
    p.add_argument("--strict-cond6", action="store_true")
    p.set_defaults(func=cmd_check)

    p = with_db(sub.add_parser("search", help="scan the dataset for passing triples"))
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--E", default=None)
    p.add_argument("--A", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--prime-conductor-only", action="store_true")
    p.add_argument("--assume-surjective", action="store_true")
    p.add_argument("--all", action="store_true", help="also list failing triples")
    p.set_defaults(func=cmd_search)

    p = with_db(sub.add_parser("local-data", help="Tate's algorithm at one prime"))
    p.add_argument("--curve", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_local_data)

    p = with_db(sub.add_parser("aell", help="trace of Frobenius"))
    p.add_argument("--curve", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_aell)

    p = sub.add_parser("verify-identities", help="trace-power identity sweep")
    p.add_argument("--lmax", type=int, default=200)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--square-bound", type=int, default=0, help="also sweep square classes for ell, p below this")
    p.add_argument("--square-nmax", type=int, default=6)
    p.add_argument("--forward-only", action="store_true")
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("verify-cohom", help="H^1 claims for Cartan and Borel")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=["CartanOnSumZero", "BorelOnSumZero", "BorelOnFull"], required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_verify_cohom)

    p = sub.add_parser("verify-rep", help="socle, fixed-vector and rigidity checks")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify_rep)

    p = sub.add_parser("frobmat", help="Frobenius matrix and its fixed point on P^1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=0)
    p.set_defaults(func=cmd_frobmat)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WorkbenchError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
