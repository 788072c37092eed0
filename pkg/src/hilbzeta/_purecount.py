"""Pure-Python counting kernel.

Mirror of the compiled kernel in _fastcount.pyx: same contract, same
algorithms, no C.  Selected at import time by `counting` when the extension
is unavailable (or when HILBZETA_PURE=1).  Elements of the scan field
F_p[u]/(m) are integer codes sum(c_i p^i); m is chosen primitive so the
chain e -> u*e walks the whole multiplicative group once, which yields the
square/non-square bitmap and (for small fields) exp/log/Zech tables in a
single pass.
"""

from __future__ import annotations

BACKEND = "pure"

# Zech sentinel: marks exponents i with 1 + u^i = 0.
SENT = 1 << 30


class ScanTables:
    """Per-field scan state: parity bitmap, and lookup tables when small."""

    __slots__ = (
        "p",
        "n",
        "q",
        "red",
        "redpow",
        "parity",
        "exp2",
        "log",
        "zech",
        "has_tables",
    )

    def __init__(self, p, n, red, redpow, want_tables):
        self.p = p
        self.n = n
        self.q = q = p**n
        self.red = tuple(red)
        self.redpow = [tuple(r) for r in redpow]
        self.parity = bytearray((q + 7) >> 3)
        self.exp2 = None
        self.log = None
        self.zech = None
        self.has_tables = bool(want_tables)
        self._build(want_tables)

    # -- digit helpers ----------------------------------------------------

    def digits(self, code):
        p, n = self.p, self.n
        out = [0] * n
        for j in range(n):
            out[j] = code % p
            code //= p
        return out

    def code(self, digits):
        c = 0
        for j in range(self.n - 1, -1, -1):
            c = c * self.p + digits[j]
        return c

    def _step(self, digits):
        """In-place multiply by u (shift + reduce by u^n = red)."""
        p, n, red = self.p, self.n, self.red
        top = digits[n - 1]
        for j in range(n - 1, 0, -1):
            digits[j] = digits[j - 1]
        digits[0] = 0
        if top:
            for j in range(n):
                r = red[j]
                if r:
                    digits[j] = (digits[j] + top * r) % p

    def _build(self, want_tables):
        p, n, q = self.p, self.n, self.q
        parity = self.parity
        if want_tables:
            exp = [0] * (q - 1)
            log = [0] * q
        digits = [0] * n
        digits[0] = 1
        code = 1
        for i in range(q - 1):
            if i > 0 and code == 1:
                raise ValueError("scan modulus is not primitive")
            if want_tables:
                exp[i] = code
                log[code] = i
            if (i & 1) == 0:
                parity[code >> 3] |= 1 << (code & 7)
            self._step(digits)
            code = self.code(digits)
        if code != 1:
            raise ValueError("scan modulus is not primitive")
        if want_tables:
            zech = [SENT] * (q - 1)
            for i in range(q - 1):
                e = exp[i]
                low = e % p
                s = e - low + (low + 1) % p
                zech[i] = SENT if s == 0 else log[s]
            self.exp2 = exp + exp
            self.log = log
            self.zech = zech

    # -- element arithmetic -----------------------------------------------

    def is_square(self, code):
        """True for nonzero squares; code 0 returns False (chi = 0)."""
        return bool(self.parity[code >> 3] & (1 << (code & 7)))

    def tmul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp2[self.log[a] + self.log[b]]

    def tadd(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        d = self.log[b] - self.log[a]
        if d < 0:
            d += self.q - 1
        z = self.zech[d]
        if z == SENT:
            return 0
        return self.exp2[self.log[a] + z]

    def mul(self, a, b):
        """Table-free product (digit convolution), works for any field size."""
        if a == 0 or b == 0:
            return 0
        p, n = self.p, self.n
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        out = prod[:n]
        for i in range(n, 2 * n - 1):
            c = prod[i]
            if c:
                row = self.redpow[i - n]
                for j in range(n):
                    out[j] = (out[j] + c * row[j]) % p
        return self.code(out)

    def add(self, a, b):
        p = self.p
        da, db = self.digits(a), self.digits(b)
        return self.code([(x + y) % p for x, y in zip(da, db)])

    def pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    # -- scans --------------------------------------------------------------

    def solve_scan(self, polys, init_powers, steps):
        """Sum over steps chain points x of #roots_y of c2 y^2 + c1 y + c0.

        polys = (c2, c1, c0, disc), each a list of coefficient codes (low
        degree first); disc = c1^2 - 4 c2 c0 as a polynomial.  init_powers[j]
        is the code of x0^(j+1); x walks x0, u x0, ..., u^(steps-1) x0.
        Odd characteristic only.
        """
        p, n, q = self.p, self.n, self.q
        c2, c1, c0, disc = [list(c) for c in polys]
        dmax = len(init_powers)
        X = [self.digits(c) for c in init_powers]  # X[j] = x^(j+1)

        # per-poly: constant digit vector + list of (power index, digits, scalar)
        def prep(poly):
            const = self.digits(poly[0]) if poly else [0] * n
            terms = []
            for e in range(1, len(poly)):
                cc = poly[e]
                if cc:
                    terms.append((e - 1, cc if cc < p else None, self.digits(cc)))
            return const, terms

        pc2, pc1, pc0, pd = prep(c2), prep(c1), prep(c0), prep(disc)

        def eval_poly(prepped):
            const, terms = prepped
            acc = list(const)
            for idx, scalar, cdig in terms:
                xd = X[idx]
                if scalar is not None:
                    for j in range(n):
                        acc[j] = (acc[j] + scalar * xd[j]) % p
                else:
                    prod = [0] * (2 * n - 1)
                    for i, a in enumerate(cdig):
                        if a:
                            for j, b in enumerate(xd):
                                prod[i + j] = (prod[i + j] + a * b) % p
                    red = prod[:n]
                    for i in range(n, 2 * n - 1):
                        c = prod[i]
                        if c:
                            row = self.redpow[i - n]
                            for j in range(n):
                                red[j] = (red[j] + c * row[j]) % p
                    for j in range(n):
                        acc[j] = (acc[j] + red[j]) % p
            return acc

        total = 0
        for _ in range(steps):
            a2 = eval_poly(pc2)
            if any(a2):
                d = eval_poly(pd)
                if any(d):
                    if self.is_square(self.code(d)):
                        total += 2
                else:
                    total += 1
            else:
                a1 = eval_poly(pc1)
                if any(a1):
                    total += 1
                elif not any(eval_poly(pc0)):
                    total += q
            # advance: X[j] *= u^(j+1)
            for j in range(dmax):
                xd = X[j]
                for _ in range(j + 1):
                    self._step(xd)
        return total

    def yscan(self, ypolys, x_start, x_end):
        """Count zeros of f(x,y) = sum_j c_j(x) y^j for x in [x_start, x_end),
        y over all field codes.  Requires tables."""
        q = self.q
        qm1 = q - 1
        exp2, log, zech = self.exp2, self.log, self.zech
        tmul, tadd = self.tmul, self.tadd
        total = 0
        for x in range(x_start, x_end):
            coeffs = []
            for cj in ypolys:
                acc = 0
                for c in reversed(cj):
                    acc = tadd(tmul(acc, x), c)
                coeffs.append(acc)
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if not coeffs:
                total += q
                continue
            if len(coeffs) == 1:
                continue  # nonzero constant: no roots
            rev = coeffs[-2::-1]
            top = coeffs[-1]
            # Horner with the table ops inlined (this is the hot loop)
            for y in range(q):
                acc = top
                for c in rev:
                    if acc and y:
                        acc = exp2[log[acc] + log[y]]
                    else:
                        acc = 0
                    if acc == 0:
                        acc = c
                    elif c:
                        d = log[c] - log[acc]
                        z = zech[d if d >= 0 else d + qm1]
                        acc = 0 if z == SENT else exp2[log[acc] + z]
                if acc == 0:
                    total += 1
        return total

    def univariate_roots(self, coeffs):
        """Number of roots over all field codes.  Requires tables."""
        q = self.q
        tmul, tadd = self.tmul, self.tadd
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            return q
        total = 0
        for x in range(q):
            acc = coeffs[-1]
            for j in range(len(coeffs) - 2, -1, -1):
                acc = tadd(tmul(acc, x), coeffs[j])
            if acc == 0:
                total += 1
        return total

    def least_root(self, coeffs):
        """Smallest code that is a root, or -1.  Requires tables."""
        tmul, tadd = self.tmul, self.tadd
        for x in range(self.q):
            acc = 0
            for c in reversed(coeffs):
                acc = tadd(tmul(acc, x), c)
            if acc == 0:
                return x
        return -1


def make_tables(p, n, red, redpow, want_tables):
    return ScanTables(p, n, red, redpow, want_tables)
