"""Command-line entry points.

    hilbzeta global --curve FILE [--nmax K] [--out FILE] [--verify-cache]
    hilbzeta local  --f EXPR --q Q (--branches R | --orbit-degrees LIST)
                    [--nmax K] [--out FILE]
    hilbzeta corpus [--dir DIR] [--out FILE]

Exit codes are stable API: 0 all checks pass, 1 a theorem check failed,
2 a work budget refused the computation, 3 invalid input (including the
integrality screen refusing a non-integral curve).
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
import time
from pathlib import Path

from . import counting
from .assembly import run_declared_local_checks, verify_local_theorem, verify_weil
from .curves import count_points, integrality_heuristic, parse_curve
from .errors import BudgetError, InconsistentCountsError, SchemaError
from .fields import is_prime, make_field

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3

CACHE_FILENAME = "hilbzeta_counts_cache.json"


def corpus_dir() -> Path:
    """The shipped curve corpus (package data)."""
    return Path(__file__).resolve().parent / "corpus"


# ---------------------------------------------------------------------------
# Point-count cache
# ---------------------------------------------------------------------------

class CountCache:
    """JSON-backed cache of point counts keyed by (curve content hash, m)."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.data = {}
        self.dirty = False
        if self.path.exists():
            try:
                self.data = json.loads(self.path.read_text())
            except (OSError, json.JSONDecodeError):
                raise SchemaError(f"cache file {self.path} is not valid JSON")

    def get(self, key: str, m: int):
        return self.data.get(key, {}).get(str(m))

    def put(self, key: str, m: int, value: int):
        self.data.setdefault(key, {})[str(m)] = value
        self.dirty = True

    def save(self):
        if self.dirty:
            blob = json.dumps(self.data, sort_keys=True, indent=1) + "\n"
            tmp = self.path.with_suffix(".tmp")
            try:
                tmp.write_text(blob)
                tmp.replace(self.path)
            except OSError as exc:
                print(f"warning: could not persist count cache: {exc}", file=sys.stderr)
            self.dirty = False


def make_count_fn(cache: CountCache | None, workers: int, budget: int, provenance: dict):
    memo = {}

    def count_fn(curve, m):
        key = (curve.content_hash(), m)
        if key in memo:
            return memo[key]
        if cache is not None:
            hit = cache.get(key[0], m)
            if hit is not None:
                provenance[m] = "cache"
                memo[key] = int(hit)
                return memo[key]
        value = count_points(curve, m, workers=workers, budget=budget)
        provenance[m] = "computed"
        if cache is not None:
            cache.put(key[0], m, value)
        memo[key] = value
        return value

    return count_fn


# ---------------------------------------------------------------------------
# Local-equation expression parser
# ---------------------------------------------------------------------------

def parse_poly_expression(text: str) -> dict:
    """Sparse {(a, b): int} from expressions like 'y^2 - x^3' or '2*x*y + x^4'."""
    tokens = _tokenize(text)
    poly, pos = _parse_expr(tokens, 0)
    if pos != len(tokens):
        raise SchemaError(f"trailing input in polynomial expression: {text!r}")
    return poly


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j])))
            i = j
        elif c in "xy":
            out.append(("var", c))
            i += 1
        elif c in "+-*^()":
            out.append((c, c))
            i += 1
        else:
            raise SchemaError(f"unexpected character {c!r} in polynomial expression")
    return out


def _poly_add(a, b, sign=1):
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0) + sign * c
    return {key: c for key, c in out.items() if c}


def _poly_mul(a, b):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return {key: c for key, c in out.items() if c}


def _parse_expr(tokens, pos):
    sign = 1
    if pos < len(tokens) and tokens[pos][0] in "+-":
        sign = -1 if tokens[pos][0] == "-" else 1
        pos += 1
    acc, pos = _parse_term(tokens, pos)
    if sign < 0:
        acc = {key: -c for key, c in acc.items()}
    while pos < len(tokens) and tokens[pos][0] in "+-":
        sign = -1 if tokens[pos][0] == "-" else 1
        term, pos = _parse_term(tokens, pos + 1)
        acc = _poly_add(acc, term, sign)
    return acc, pos


def _parse_term(tokens, pos):
    acc, pos = _parse_factor(tokens, pos)
    while pos < len(tokens) and tokens[pos][0] in ("*", "int", "var", "("):
        if tokens[pos][0] == "*":
            pos += 1
        factor, pos = _parse_factor(tokens, pos)
        acc = _poly_mul(acc, factor)
    return acc, pos


def _parse_factor(tokens, pos):
    if pos >= len(tokens):
        raise SchemaError("polynomial expression ended unexpectedly")
    kind, value = tokens[pos]
    if kind == "int":
        base = {(0, 0): value}
        pos += 1
    elif kind == "var":
        base = {(1, 0) if value == "x" else (0, 1): 1}
        pos += 1
    elif kind == "(":
        base, pos = _parse_expr(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise SchemaError("unbalanced parenthesis in polynomial expression")
        pos += 1
    else:
        raise SchemaError(f"unexpected token {value!r} in polynomial expression")
    if pos < len(tokens) and tokens[pos][0] == "^":
        if pos + 1 >= len(tokens) or tokens[pos + 1][0] != "int":
            raise SchemaError("exponent must be a literal integer")
        e = tokens[pos + 1][1]
        out = {(0, 0): 1}
        for _ in range(e):
            out = _poly_mul(out, base)
        base = out
        pos += 2
    return base, pos


def parse_prime_power(q: int):
    if q < 2:
        raise SchemaError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                raise SchemaError(f"{q} is not a prime power")
            k = 0
            rest = q
            while rest % p == 0:
                rest //= p
                k += 1
            if rest != 1:
                raise SchemaError(f"{q} is not a prime power")
            return p, k
    raise SchemaError(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

def _dump_json(doc, out_path: Path | None):
    blob = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out_path:
        Path(out_path).write_text(blob)
    return blob


def _poly_str(coeffs):
    parts = []
    for i, c in enumerate(coeffs):
        c = int(c)
        if c == 0 and len(coeffs) > 1:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            parts.append(str(c))
        elif abs(c) == 1:
            parts.append(("-" if c < 0 else "") + mono)
        else:
            parts.append(f"{c}*{mono}")
    text = " + ".join(parts) if parts else "0"
    return text.replace("+ -", "- ")


def _print_global_report(report, stream):
    print(f"curve: {report.curve_name}   q={report.q}   genus={report.genus}", file=stream)
    counts = "  ".join(f"N_{m}={n}" for m, n in sorted(report.counts.items()))
    print(f"counts: {counts}", file=stream)
    print(f"numerator P(t) = {_poly_str(report.numerator.coeffs)}", file=stream)
    if report.local_factors:
        for idx, f in enumerate(report.local_factors):
            pt = f.point
            series = ", ".join(str(int(c)) for c in f.series_over_residue.coeffs)
            print(
                f"singular point: chart {pt.chart}, degree {pt.degree}, "
                f"multiplicity {pt.multiplicity}, local series [{series}]",
                file=stream,
            )
            check = report.local_checks.get(idx)
            if check is not None:
                state = "PASS" if check.all_pass else "FAIL"
                print(
                    f"  local numerator N(t) = {_poly_str(check.numerator)} "
                    f"(delta = {check.delta}): {state}",
                    file=stream,
                )
    else:
        print("singular points: none (smooth)", file=stream)
    verdicts = "  ".join(
        f"{name}={'PASS' if ok else 'FAIL'}" for name, ok in sorted(report.verdicts.items())
    )
    print(f"verdicts: {verdicts}", file=stream)
    if report.macdonald is not None:
        state = "PASS" if report.macdonald.ok else "FAIL"
        print(f"macdonald two-path: {state}", file=stream)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_global(args) -> int:
    try:
        doc = json.loads(Path(args.curve).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read curve document: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return _run_global(doc, args, src=Path(args.curve))


def _run_global(doc, args, src: Path) -> int:
    try:
        curve = parse_curve(doc)
    except SchemaError as exc:
        print(f"error: invalid curve document: {exc}", file=sys.stderr)
        return EXIT_INPUT

    cache = None
    if not args.no_cache:
        cache_path = Path(args.cache) if args.cache else src.parent / CACHE_FILENAME
        try:
            cache = CountCache(cache_path)
        except SchemaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    provenance: dict = {}
    count_fn = make_count_fn(cache, args.workers, args.budget, provenance)

    try:
        if args.verify_cache and cache is not None:
            code = _verify_cache(curve, cache, args)
            if code != EXIT_PASS:
                return code
        g = curve.genus
        prec = max(2 * g + 4, (args.nmax or 0) + 1)
        counts = {m: count_fn(curve, m) for m in range(1, prec)}
        screen = integrality_heuristic(curve, counts)
        if screen.result == "fail":
            print(
                "refused: the curve fails the integrality screen "
                f"({'; '.join(screen.reasons)}); the theorems require an "
                "integral curve",
                file=sys.stderr,
            )
            if cache is not None:
                cache.save()
            return EXIT_INPUT
        report = verify_weil(
            curve,
            nmax=args.nmax,
            workers=args.workers,
            budget=args.budget,
            count_fn=count_fn,
            emit_timings=not args.no_timing,
        )
        report.counts_provenance = provenance
        if args.local_check:
            run_declared_local_checks(
                curve, report, workers=args.workers, emit_timings=not args.no_timing
            )
    except BudgetError as exc:
        print(
            f"refused: {exc} (estimate {exc.estimate}, budget {exc.budget})",
            file=sys.stderr,
        )
        return EXIT_BUDGET
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistentCountsError as exc:
        print(
            f"error: {exc} (the curve is outside the hypotheses of the "
            "checks, or a count source is corrupted)",
            file=sys.stderr,
        )
        return EXIT_INPUT
    finally:
        if cache is not None:
            cache.save()

    doc_out = report.to_dict()
    if args.out:
        _dump_json(doc_out, Path(args.out))
    if args.json:
        sys.stdout.write(_dump_json(doc_out, None))
    else:
        _print_global_report(report, sys.stdout)
    return EXIT_PASS if report.all_pass else EXIT_CHECK_FAILED


def _verify_cache(curve, cache: CountCache, args) -> int:
    key = curve.content_hash()
    entries = cache.data.get(key, {})
    if not entries:
        return EXIT_PASS
    ms = sorted(int(m) for m in entries)
    for m in (ms[0], ms[-1]):
        fresh = count_points(curve, m, workers=args.workers, budget=args.budget)
        if fresh != int(entries[str(m)]):
            print(
                f"error: cache is stale for m={m}: cached {entries[str(m)]}, "
                f"recomputed {fresh}",
                file=sys.stderr,
            )
            return EXIT_INPUT
    return EXIT_PASS


def cmd_local(args) -> int:
    try:
        if args.f_json:
            doc = json.loads(Path(args.f_json).read_text())
            p, k = int(doc.get("p", 0)), int(doc.get("k", 1))
            if args.q:
                p, k = parse_prime_power(args.q)
            if p == 0:
                raise SchemaError("local document without p needs --q")
            field = make_field(p, k)
            fterms = {}
            for row in doc["terms"]:
                a, b, coeff = int(row[0]), int(row[1]), row[2]
                fterms[(a, b)] = field.element(int(coeff))
            orbit = doc.get("orbit_degrees")
        else:
            if not args.f or not args.q:
                raise SchemaError("local mode needs --f and --q")
            p, k = parse_prime_power(args.q)
            field = make_field(p, k)
            ints = parse_poly_expression(args.f)
            fterms = {key: field.element(c) for key, c in ints.items()}
            orbit = None
        if args.orbit_degrees:
            orbit = [int(e) for e in args.orbit_degrees.split(",")]
        elif args.branches:
            orbit = [1] * args.branches
        if not orbit:
            raise SchemaError("declare --branches R or --orbit-degrees LIST")
        report = verify_local_theorem(
            fterms,
            field,
            orbit,
            args.nmax,
            workers=args.workers,
            estimate_branches=args.estimate_branches,
            emit_timings=not args.no_timing,
        )
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    doc_out = report.to_dict()
    if args.out:
        _dump_json(doc_out, Path(args.out))
    if args.json:
        sys.stdout.write(_dump_json(doc_out, None))
    else:
        series = ", ".join(str(int(c)) for c in report.series.coeffs)
        print(f"q={report.q}  orbit degrees {report.orbit_degrees}  n_max={report.n_max}")
        print(f"ideal counts: [{series}]")
        print(f"numerator N(t) = {_poly_str(report.numerator)}")
        print(f"delta = {report.delta}")
        verdicts = "  ".join(
            f"{k}={'PASS' if v else 'FAIL'}" for k, v in sorted(report.verdicts.items())
        )
        print(f"verdicts: {verdicts}" + ("" if report.conclusive else "  [INCONCLUSIVE]"))
        if report.branch_estimate is not None:
            print(f"branch-orbit pole estimate: {report.branch_estimate}")
    if not report.conclusive:
        return EXIT_BUDGET
    return EXIT_PASS if report.all_pass else EXIT_CHECK_FAILED


def cmd_corpus(args) -> int:
    directory = Path(args.dir) if args.dir else corpus_dir()
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_INPUT
    docs = sorted(d for d in directory.glob("*.json") if d.name != CACHE_FILENAME)
    rows = []
    worst = EXIT_PASS
    summary = {}
    for path in docs:
        sub = argparse.Namespace(**vars(args))
        sub.curve = str(path)
        sub.out = None
        sub.json = False
        started = time.perf_counter()
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            rows.append((path.stem, "-", "-", "-", "invalid json", EXIT_INPUT))
            worst = max(worst, EXIT_INPUT)
            continue
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            code = _run_global(doc, sub, src=path)
        elapsed = time.perf_counter() - started
        name = doc.get("name", path.stem)
        status = {0: "pass", 1: "CHECK FAILED", 2: "budget", 3: "input"}[code]
        q = doc.get("p", "?")
        genus = "-"
        numerator = "-"
        for line in buffer.getvalue().splitlines():
            if line.startswith("numerator"):
                numerator = line.split("=", 1)[1].strip()
            if "genus=" in line:
                genus = line.rsplit("genus=", 1)[1]
        rows.append((name, q, genus, numerator, status, round(elapsed, 2)))
        summary[name] = status
        worst = max(worst, code)
    width = max((len(r[0]) for r in rows), default=10) + 2
    print(f"{'curve':{width}} {'p':>3} {'genus':>5}  {'numerator':32} {'status':14} {'sec':>7}")
    for name, q, genus, numerator, status, elapsed in rows:
        print(f"{name:{width}} {q!s:>3} {genus!s:>5}  {numerator:32} {status:14} {elapsed!s:>7}")
    if args.out:
        _dump_json({"results": summary}, Path(args.out))
    return worst


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hilbzeta",
        description="Hilbert-zeta functions of plane curves over finite fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--workers", type=int, default=1, help="scan partitions")
        sp.add_argument(
            "--budget",
            type=int,
            default=counting.DEFAULT_WORK_BUDGET,
            help="work budget in evaluation steps",
        )
        sp.add_argument("--out", help="write the JSON report to this file")
        sp.add_argument("--json", action="store_true", help="print JSON to stdout")
        sp.add_argument(
            "--no-timing",
            action="store_true",
            help="omit timings for byte-reproducible reports",
        )
        sp.add_argument(
            "--local-check",
            action="store_true",
            help="also verify the local numerator at singular points with "
            "declared branch data",
        )

    g = sub.add_parser("global", help="verify the Weil-type facts for a curve")
    g.add_argument("--curve", required=True, help="curve document (JSON)")
    g.add_argument("--nmax", type=int, help="extend the series to this order")
    g.add_argument("--cache", help="point-count cache file")
    g.add_argument("--no-cache", action="store_true")
    g.add_argument(
        "--verify-cache",
        action="store_true",
        help="recompute the smallest and largest cached counts and compare",
    )
    common(g)
    g.set_defaults(func=cmd_global)

    l = sub.add_parser("local", help="verify the local numerator theorem")
    l.add_argument("--f", help="local equation, e.g. 'y^2 - x^3'")
    l.add_argument("--f-json", help="local equation document (JSON)")
    l.add_argument("--q", type=int, help="field size (prime power)")
    l.add_argument("--branches", type=int, help="number of rational branches")
    l.add_argument(
        "--orbit-degrees", help="comma list of branch-orbit degrees, e.g. '2' or '1,1'"
    )
    l.add_argument("--nmax", type=int, default=8, help="largest colength enumerated")
    l.add_argument(
        "--estimate-branches",
        action="store_true",
        help="also report the advisory pole-order branch estimate",
    )
    common(l)
    l.set_defaults(func=cmd_local)

    c = sub.add_parser("corpus", help="run the global checks over a corpus directory")
    c.add_argument("--dir", help="directory of curve documents (default: shipped corpus)")
    c.add_argument("--nmax", type=int)
    c.add_argument("--cache", help="point-count cache file")
    c.add_argument("--no-cache", action="store_true")
    c.add_argument("--verify-cache", action="store_true")
    common(c)
    c.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
