"""Command-line interface.

Exit codes: 0 success, 1 negative mathematical result (failed certificate,
decomposable found, unstable bundle), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import bundlecalc, cert, orbitdim, seqdsl, sl2rep
from .wedge import SubspaceGenerators, wedge_dim

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

FIXTURES = ("p5_printed", "tango_n3", "tango_n4", "tango_n5")


class InputError(Exception):
    pass


# --- subspace files ----------------------------------------------------------

def format_subspace(W: SubspaceGenerators, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"n": W.n, "m": W.m, "rows": [list(r) for r in W.rows]}) + "\n"
    lines = [f"{W.n} {W.m}"] + [" ".join(str(x) for x in r) for r in W.rows]
    return "\n".join(lines) + "\n"


def parse_subspace(text: str, source: str = "<input>") -> SubspaceGenerators:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
            return _checked(int(data["n"]), int(data["m"]), [[int(x) for x in r] for r in data["rows"]], source)
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{source}: malformed JSON subspace file: {exc}") from None
    lines = [(k + 1, ln.split()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, toks) for k, toks in lines if toks]
    if not lines:
        raise InputError(f"{source}: empty subspace file")
    k, head = lines[0]
    if len(head) != 2:
        raise InputError(f"{source}:{k}: header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"{source}:{k}: header must be two integers") from None
    if n < 1 or m < 0:
        raise InputError(f"{source}:{k}: need n >= 1 and m >= 0")
    width = wedge_dim(n + 1)
    rows = []
    for k, toks in lines[1:]:
        if len(toks) != width:
            raise InputError(f"{source}:{k}: expected {width} integers, found {len(toks)}")
        try:
            rows.append([int(x) for x in toks])
        except ValueError:
            raise InputError(f"{source}:{k}: non-integer entry") from None
    return _checked(n, m, rows, source)


def _checked(n, m, rows, source) -> SubspaceGenerators:
    if len(rows) != m:
        raise InputError(f"{source}: header announces {m} rows, found {len(rows)}")
    try:
        W = SubspaceGenerators(n, tuple(tuple(r) for r in rows))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None
    if W.m and W.rank() != m:
        raise InputError(f"{source}: rows are linearly dependent (rank {W.rank()} < {m})")
    return W


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("sl2tango").joinpath("fixtures", f"{name}.txt").read_text()


def load_subspace(source: str) -> SubspaceGenerators:
    """Read a subspace file; ``@name`` selects a shipped fixture."""
    if source.startswith("@"):
        return parse_subspace(fixture_text(source[1:]), source)
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return parse_subspace(text, source)


# --- subcommands -------------------------------------------------------------

def _emit(args, data: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def cmd_construct(args) -> int:
    if args.n < 3:
        raise InputError(f"--n {args.n}: need n >= 3")
    out = format_subspace(sl2rep.construct_tango_subspace(args.n), args.format)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _subspace_arg(args) -> SubspaceGenerators:
    if getattr(args, "subspace", None):
        return load_subspace(args.subspace)
    if getattr(args, "n", None) is not None:
        if args.n < 3:
            raise InputError(f"--n {args.n}: need n >= 3")
        return sl2rep.construct_tango_subspace(args.n)
    raise InputError("give --subspace FILE or --n N")


def cmd_certify(args) -> int:
    c = cert.certify_no_decomposables(_subspace_arg(args))
    _emit(args, c.to_dict(), c.to_text())
    return EXIT_OK if c.valid else EXIT_NEGATIVE


def cmd_scan(args) -> int:
    W = load_subspace(args.subspace)
    try:
        primes = [int(p) for p in args.primes.split(",") if p.strip()]
    except ValueError:
        raise InputError(f"--primes {args.primes!r}: expected comma-separated integers") from None
    from sympy import isprime

    for p in primes:
        if not isprime(p):
            raise InputError(f"--primes: {p} is not prime")
    try:
        res = cert.scan_decomposables_modp(W, primes)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, res.to_dict(), res.to_text())
    return EXIT_NEGATIVE if res.found else EXIT_OK


def cmd_orbit_dim(args) -> int:
    W = load_subspace(args.subspace)
    rep = orbitdim.orbit_dimension(W, exact=args.exact, threads=args.threads)
    _emit(args, {**rep.to_dict(), "group_dim": rep.group_dim}, rep.to_text())
    return EXIT_OK


def cmd_decompose(args) -> int:
    if args.n < 1:
        raise InputError(f"--n {args.n}: need n >= 1")
    comps = sl2rep.decompose_irreducibles(sl2rep.wedge2_symn(args.n))
    data = {"n": args.n, "dim": sum(c.dim for c in comps),
            "components": [{"highest_weight": c.highest_weight, "dim": c.dim,
                            "highest_weight_vector": list(c.highest_weight_vector)} for c in comps]}
    lines = [f"wedge^2 S^{args.n}U = " + " + ".join(f"S^{c.highest_weight}U" for c in comps),
             f"dims: {[c.dim for c in comps]}, total {data['dim']}"]
    for c in comps:
        lines.append(f"  S^{c.highest_weight}U  hw = " + " ".join(str(x) for x in c.highest_weight_vector))
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _weights(args) -> tuple[int, int, int]:
    try:
        bundlecalc.validate_weights(args.n, args.alpha, args.gamma)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return args.n, args.alpha, args.gamma


def cmd_chern(args) -> int:
    n, a, g = _weights(args)
    c = bundlecalc.chern_weighted_tango(n, a, g)
    cFg = bundlecalc.chern_weighted_tango_twisted(n, a, g)
    data = {"n": n, "alpha": a, "gamma": g, "c": list(c), "total_twisted": list(cFg.coeffs)}
    _emit(args, data, "c = (" + ", ".join(str(x) for x in c) + ")")
    return EXIT_OK


def cmd_stability(args) -> int:
    rep = bundlecalc.is_stable(*_weights(args))
    _emit(args, rep.to_dict(), rep.to_text())
    return EXIT_OK if rep.stable else EXIT_NEGATIVE


def cmd_eval(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from None
    try:
        sys.stdout.write(seqdsl.run_text(text, as_json=args.json))
    except seqdsl.DslError as exc:
        raise InputError(f"{args.file}:{exc}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output instead of text")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")

    p = argparse.ArgumentParser(prog="sl2tango", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", help="write the SL(2)-invariant subspace W")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("certify", parents=[common], help="prove W has no decomposable bivectors")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--subspace")
    g.add_argument("--n", type=int)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("scan", parents=[common], help="search for decomposables over prime fields")
    s.add_argument("--subspace", required=True)
    s.add_argument("--primes", required=True)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("orbit-dim", parents=[common], help="orbit dimension under PGL(n+1)")
    s.add_argument("--subspace", required=True)
    s.add_argument("--exact", action="store_true", help="integer elimination instead of multi-modular rank")
    s.set_defaults(func=cmd_orbit_dim)

    s = sub.add_parser("decompose", parents=[common], help="irreducible components of wedge^2 S^n U")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_decompose)

    for name, func, hlp in (("chern", cmd_chern, "Chern classes of F_{alpha,gamma}"),
                            ("stability", cmd_stability, "stability of F_{alpha,gamma}")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--alpha", type=int, required=True)
        s.add_argument("--gamma", type=int, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("eval", parents=[common], help="run a sequence script")
    s.add_argument("file")
    s.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
