"""Point-counting backend: lane selection, budgets, and worker partitioning.

The hot loops live in a kernel with two interchangeable implementations:
the compiled extension `_fastcount` (Cython) and the pure-Python mirror
`_purecount`.  The compiled one is picked at import when present; set
HILBZETA_PURE=1 to force the fallback.  Both produce identical integers.

Scan fields are presented as F_p[u]/(m) with m the lexicographically least
*primitive* monic irreducible, so the multiplicative group is the power
chain of u.  Counts are isomorphism invariants, hence independent of this
presentation (the exact layer in `fields` uses a different, merely
irreducible modulus; tests cross-check the two).

Two lanes:

* solve lane (odd p, chart y-degree <= 2): walk x through the chain,
  evaluate the y-quadratic's coefficients and discriminant, and read the
  number of y-roots off the square bitmap.  Work ~ q^m.
* yscan lane: the literal double scan over (x, y), with exp/log/Zech
  tables.  Work ~ q^{2m}, so it is budget-gated.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import BudgetError
from .fields import FieldElement, FiniteField, least_primitive_modulus

if os.environ.get("HILBZETA_PURE"):
    from . import _purecount as kernel

    HAVE_EXT = False
else:
    try:
        from . import _fastcount as kernel  # type: ignore

        HAVE_EXT = True
    except ImportError:
        from . import _purecount as kernel

        HAVE_EXT = False

BACKEND = kernel.BACKEND

DEFAULT_WORK_BUDGET = 10**9
# solve lane needs a square bitmap of q bits; beyond this it is refused
CHAIN_FIELD_LIMIT = 1 << 24
# exp/log/Zech tables; the q^2 work budget keeps yscan fields tiny anyway
TABLE_FIELD_LIMIT = 1 << 18


class KernelField:
    """Integer-coded arithmetic in the counting presentation of F_{p^n}."""

    __slots__ = ("p", "n", "q", "modulus", "red", "redpow", "u_code", "impl", "_tables")

    def __init__(self, p: int, n: int, impl=None):
        self.impl = impl or kernel
        self.p = p
        self.n = n
        self.q = p**n
        if self.q > CHAIN_FIELD_LIMIT:
            # refuse before the primitive-modulus search can crawl
            raise BudgetError(
                f"scan field F_{p}^{n} of size {self.q} exceeds the chain "
                f"limit {CHAIN_FIELD_LIMIT}",
                estimate=self.q,
                budget=CHAIN_FIELD_LIMIT,
            )
        self.modulus = least_primitive_modulus(p, n)
        red = tuple((-c) % p for c in self.modulus[:n])
        self.red = red
        # redpow[i] = digits of u^(n+i), i = 0..n-2
        redpow = []
        cur = list(red)
        if n > 1:
            redpow.append(tuple(cur))
            for _ in range(n - 2):
                top = cur[n - 1]
                cur = [((cur[j - 1] if j else 0) + top * red[j]) % p for j in range(n)]
                redpow.append(tuple(cur))
        self.redpow = redpow
        self.u_code = p if n > 1 else red[0]
        self._tables = None

    def tables(self, want_tables=False):
        if self._tables is None or (want_tables and not self._tables.has_tables):
            want = want_tables or self.q <= TABLE_FIELD_LIMIT
            self._tables = self.impl.make_tables(
                self.p, self.n, self.red, self.redpow, want
            )
        return self._tables

    # element arithmetic on codes (thin wrappers over the table object's
    # table-free routines; cheap glue, never in a hot loop)

    def add(self, a, b):
        return self.tables().add(a, b)

    def neg(self, a):
        p = self.p
        digits = self.tables().digits(a)
        return self.tables().code([(-d) % p for d in digits])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self.tables().mul(a, b)

    def pow(self, a, e):
        return self.tables().pow(a, e)

    def scalar(self, s, a):
        """Multiply by a prime-field scalar s (0 <= s < p)."""
        p = self.p
        digits = self.tables().digits(a)
        return self.tables().code([s * d % p for d in digits])

    def eval_poly(self, coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def chi(self, a):
        """Quadratic character: +1 nonzero square, -1 nonsquare, 0 at zero.

        Reads the square bitmap when a chain was already built; otherwise a
        single Euler-criterion exponentiation, so asking for one character
        value never triggers a full chain walk.
        """
        if a == 0:
            return 0
        if self._tables is not None:
            return 1 if self._tables.is_square(a) else -1
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def absolute_trace(self, a):
        """Trace to the prime field, as an integer in [0, p)."""
        acc = 0
        cur = a
        for _ in range(self.n):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.p)
        return acc


_KERNEL_FIELDS: dict = {}


def kernel_field(p: int, n: int) -> KernelField:
    key = (p, n)
    if key not in _KERNEL_FIELDS:
        _KERNEL_FIELDS[key] = KernelField(p, n)
    return _KERNEL_FIELDS[key]


def clear_cache():
    """Drop cached kernel fields (mainly for tests measuring build cost)."""
    _KERNEL_FIELDS.clear()


def embed_code(kf: KernelField, field: FiniteField, elt: FieldElement) -> int:
    """Code of elt inside the kernel presentation of an extension of its field.

    Constants (k = 1) embed as themselves.  For k >= 2 the embedding sends
    the polynomial-basis generator to the least root of the base modulus in
    the kernel field; any conjugate choice would give the same counts.
    """
    if elt.field.p != kf.p or kf.n % elt.field.k != 0:
        raise ValueError("element field does not embed in the kernel field")
    if elt.field.k == 1:
        return elt.coeffs[0]
    if kf.q > TABLE_FIELD_LIMIT:
        raise BudgetError(
            f"embedding F_{kf.p}^{elt.field.k} coefficients into a field of size "
            f"{kf.q} exceeds the table limit",
            estimate=kf.q,
            budget=TABLE_FIELD_LIMIT,
        )
    tab = kf.tables(want_tables=True)
    rho = tab.least_root([c % kf.p for c in elt.field.modulus])
    if rho < 0:
        raise AssertionError("base modulus has no root in the kernel field")
    acc = 0
    for c in reversed(elt.coeffs):
        acc = kf.add(kf.mul(acc, rho), c)
    return acc


# ---------------------------------------------------------------------------
# Root counting for low-degree univariate polynomials (closed forms)
# ---------------------------------------------------------------------------

def _quad_root_count(kf: KernelField, a, b, c):
    """Roots of a y^2 + b y + c over the kernel field, any characteristic."""
    if a == 0:
        if b != 0:
            return 1
        return kf.q if c == 0 else 0
    if kf.p == 2:
        # y^2 is bijective, so b = 0 means exactly one root; otherwise
        # substituting y = (b/a) w reduces to w^2 + w = ac/b^2, solvable
        # iff the absolute trace vanishes, and then with two roots.
        if b == 0:
            return 1
        e = kf.mul(kf.mul(a, c), kf.pow(kf.mul(b, b), kf.q - 2))
        return 2 if kf.absolute_trace(e) == 0 else 0
    disc = kf.sub(kf.mul(b, b), kf.scalar(4 % kf.p, kf.mul(a, c)))
    ch = kf.chi(disc)
    return 1 + ch


def univariate_root_count(kf: KernelField, coeffs, budget=DEFAULT_WORK_BUDGET):
    """Exact number of roots of coeffs(x) over the kernel field."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return kf.q
    deg = len(coeffs) - 1
    if deg == 0:
        return 0
    if deg == 1:
        return 1
    if deg == 2:
        return _quad_root_count(kf, coeffs[2], coeffs[1], coeffs[0])
    if kf.q > TABLE_FIELD_LIMIT:
        raise BudgetError(
            f"univariate scan over field of size {kf.q} exceeds the table "
            f"limit {TABLE_FIELD_LIMIT}",
            estimate=kf.q,
            budget=TABLE_FIELD_LIMIT,
        )
    if kf.q > budget:
        raise BudgetError(
            f"univariate scan needs {kf.q} evaluations, budget is {budget:.3g}",
            estimate=kf.q,
            budget=budget,
        )
    return kf.tables(want_tables=True).univariate_roots(coeffs)


# ---------------------------------------------------------------------------
# Affine plane counts
# ---------------------------------------------------------------------------

def _poly_mul_codes(kf: KernelField, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = kf.add(out[i + j], kf.mul(x, y))
    return out


def _poly_gcd_codes(kf: KernelField, a, b):
    """Monic gcd of two code-coefficient polynomials over the kernel field."""
    a, b = _strip(a), _strip(b)
    while b:
        inv_lead = kf.pow(b[-1], kf.q - 2)
        rem = list(a)
        for shift in range(len(a) - len(b), -1, -1):
            c = kf.mul(rem[shift + len(b) - 1], inv_lead)
            if c:
                for i, bi in enumerate(b):
                    rem[shift + i] = kf.sub(rem[shift + i], kf.mul(c, bi))
        a, b = b, _strip(rem)
    if a:
        inv_lead = kf.pow(a[-1], kf.q - 2)
        a = [kf.mul(c, inv_lead) for c in a]
    return a or [0]


def _strip(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _chunks(total, workers):
    workers = max(1, min(workers, total)) if total else 1
    size = (total + workers - 1) // workers if total else 0
    out = []
    start = 0
    while start < total:
        out.append((start, min(start + size, total)))
        start += size
    return out


def affine_count(
    kf: KernelField,
    terms: dict,
    workers: int = 1,
    budget: int = DEFAULT_WORK_BUDGET,
) -> int:
    """#{(x, y) in F^2 : f(x, y) = 0} for f given as {(i, j): code}.

    Lane selection: y-degree <= 2 in odd characteristic takes the O(q)
    discriminant walk; otherwise the literal O(q^2) double scan, refused
    beyond the work budget with the estimate reported.
    """
    q = kf.q
    terms = {ij: c for ij, c in terms.items() if c}
    ydeg = max((j for (_, j) in terms), default=0)
    xdeg = max((i for (i, _) in terms), default=0)
    # c_j(x): coefficient polynomials of y^j
    ypolys = []
    for j in range(ydeg + 1):
        cj = [0] * (xdeg + 1)
        for (i, jj), c in terms.items():
            if jj == j:
                cj[i] = c
        ypolys.append(_strip(cj) or [0])

    if ydeg == 0:
        return q * univariate_root_count(kf, ypolys[0], budget)

    if ydeg == 1:
        # c1(x) y = -c0(x): one y when c1(x) != 0, all q when both vanish
        try:
            r1 = univariate_root_count(kf, ypolys[1], budget)
            rg = univariate_root_count(
                kf, _poly_gcd_codes(kf, ypolys[1], ypolys[0]), budget
            )
            return (q - r1) + q * rg
        except BudgetError:
            pass  # a scan lane below may still be affordable

    if kf.p > 2 and ydeg <= 2 and q <= CHAIN_FIELD_LIMIT and q <= budget:
        return _solve_lane(kf, ypolys, workers)

    estimate = q * q
    if estimate > budget or q > TABLE_FIELD_LIMIT:
        raise BudgetError(
            f"affine scan needs ~{estimate:.3g} evaluations over a field of "
            f"size {q}, budget is {budget:.3g}",
            estimate=estimate,
            budget=budget,
        )
    return _yscan_lane(kf, ypolys, workers)


def _solve_lane(kf: KernelField, ypolys, workers):
    q = kf.q
    c0 = ypolys[0]
    c1 = ypolys[1] if len(ypolys) > 1 else [0]
    c2 = ypolys[2] if len(ypolys) > 2 else [0]
    sq = _poly_mul_codes(kf, c1, c1)
    cross = _poly_mul_codes(kf, c2, c0)
    width = max(len(sq), len(cross))
    sq += [0] * (width - len(sq))
    cross += [0] * (width - len(cross))
    disc = _strip(
        [kf.sub(a, kf.scalar(4 % kf.p, b)) for a, b in zip(sq, cross)]
    ) or [0]
    tables = kf.tables()
    polys = (c2, c1, c0, disc)
    dmax = max(len(pl) - 1 for pl in polys)
    dmax = max(dmax, 1)

    # x = 0 handled directly
    total = _quad_root_count(kf, c2[0] if c2 else 0, c1[0] if c1 else 0, c0[0])

    segments = _chunks(q - 1, workers)
    jobs = []
    for start, end in segments:
        x0 = kf.pow(kf.u_code, start)
        init = [kf.pow(x0, j + 1) for j in range(dmax)]
        jobs.append((init, end - start))
    if len(jobs) == 1 or kf.impl.BACKEND != "fast":
        for init, steps in jobs:
            total += tables.solve_scan(polys, init, steps)
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            futures = [
                pool.submit(tables.solve_scan, polys, init, steps)
                for init, steps in jobs
            ]
            total += sum(f.result() for f in futures)
    return total


def _yscan_lane(kf: KernelField, ypolys, workers):
    tables = kf.tables(want_tables=True)
    segments = _chunks(kf.q, workers)
    if len(segments) == 1 or kf.impl.BACKEND != "fast":
        return sum(tables.yscan(ypolys, s, e) for s, e in segments)
    with ThreadPoolExecutor(max_workers=len(segments)) as pool:
        futures = [pool.submit(tables.yscan, ypolys, s, e) for s, e in segments]
        return sum(f.result() for f in futures)
