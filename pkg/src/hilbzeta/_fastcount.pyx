# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernel.

Exact mirror of _purecount.py (same contract, same algorithms); see that
module for the semantics.  Digit vectors live in fixed-size C arrays, the
chain walk and both scan lanes run without the GIL.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcpy, memset

BACKEND = "fast"

SENT = 1 << 30

cdef unsigned int SENT_C = 1 << 30

DEF MAXN = 24        # max extension degree of a scan field
DEF MAXTERMS = 16    # max nonconstant terms per evaluated polynomial
DEF MAXPOLY = 40     # max coefficients of a yscan column polynomial


cdef struct Term:
    int idx                      # index into the maintained power row
    int scalar                   # prime-subfield value, or -1 for full mult
    unsigned char dig[MAXN]


cdef struct Prep:
    int nterms
    unsigned char const_dig[MAXN]
    Term terms[MAXTERMS]


cdef class ScanTables:
    cdef readonly int p, n
    cdef readonly long long q
    cdef readonly bint has_tables
    cdef readonly object red, redpow
    cdef unsigned char red_c[MAXN]
    cdef unsigned char mulmod[16][16]   # (a*b) % p, avoids division in hot loops
    cdef unsigned char *redpow_c
    cdef unsigned char *parity_c
    cdef unsigned int *exp2_c
    cdef unsigned int *log_c
    cdef unsigned int *zech_c

    def __cinit__(self, int p, int n, red, redpow, bint want_tables):
        if n > MAXN:
            raise ValueError("scan field degree exceeds kernel limit")
        if p >= 16:
            raise ValueError("characteristic exceeds kernel limit")
        self.p = p
        self.n = n
        self.q = p ** n
        self.red = tuple(red)
        self.redpow = [tuple(r) for r in redpow]
        self.has_tables = want_tables
        cdef int i, j
        for i in range(16):
            for j in range(16):
                self.mulmod[i][j] = (i * j) % p
        memset(self.red_c, 0, MAXN)
        for j in range(n):
            self.red_c[j] = red[j]
        self.redpow_c = <unsigned char *> calloc(max(1, (n - 1) * MAXN), 1)
        for i in range(len(redpow)):
            for j in range(n):
                self.redpow_c[i * MAXN + j] = redpow[i][j]
        self.parity_c = <unsigned char *> calloc((self.q + 7) >> 3, 1)
        self.exp2_c = NULL
        self.log_c = NULL
        self.zech_c = NULL
        if self.parity_c == NULL or self.redpow_c == NULL:
            raise MemoryError()
        self._build(want_tables)

    def __dealloc__(self):
        free(self.redpow_c)
        free(self.parity_c)
        free(self.exp2_c)
        free(self.log_c)
        free(self.zech_c)

    # -- digit helpers ----------------------------------------------------

    cdef inline void _step(self, unsigned char *d) noexcept nogil:
        cdef int top = d[self.n - 1]
        cdef int j, t
        for j in range(self.n - 1, 0, -1):
            d[j] = d[j - 1]
        d[0] = 0
        if top:
            for j in range(self.n):
                if self.red_c[j]:
                    t = d[j] + self.mulmod[top][self.red_c[j]]
                    if t >= self.p:
                        t -= self.p
                    d[j] = t

    cdef inline long long _code(self, unsigned char *d) noexcept nogil:
        cdef long long c = 0
        cdef int j
        for j in range(self.n - 1, -1, -1):
            c = c * self.p + d[j]
        return c

    cdef inline void _decode(self, long long code, unsigned char *d) noexcept nogil:
        cdef int j
        for j in range(self.n):
            d[j] = code % self.p
            code = code // self.p
        for j in range(self.n, MAXN):
            d[j] = 0

    def digits(self, code):
        cdef unsigned char d[MAXN]
        self._decode(code, d)
        return [d[j] for j in range(self.n)]

    def code(self, digits):
        c = 0
        for j in range(self.n - 1, -1, -1):
            c = c * self.p + digits[j]
        return c

    # -- build --------------------------------------------------------------

    def _build(self, bint want_tables):
        cdef long long q = self.q
        cdef long long code = 1
        cdef long long i
        cdef int early = 0
        cdef unsigned char d[MAXN]
        memset(d, 0, MAXN)
        d[0] = 1
        if want_tables:
            self.exp2_c = <unsigned int *> calloc(max(1, 2 * (q - 1)), sizeof(unsigned int))
            self.log_c = <unsigned int *> calloc(q, sizeof(unsigned int))
            self.zech_c = <unsigned int *> calloc(max(1, q - 1), sizeof(unsigned int))
            if self.exp2_c == NULL or self.log_c == NULL or self.zech_c == NULL:
                raise MemoryError()
        with nogil:
            for i in range(q - 1):
                if i > 0 and code == 1:
                    early = 1
                    break
                if want_tables:
                    self.exp2_c[i] = <unsigned int> code
                    self.exp2_c[i + q - 1] = <unsigned int> code
                    self.log_c[code] = <unsigned int> i
                if (i & 1) == 0:
                    self.parity_c[code >> 3] |= <unsigned char> (1 << (code & 7))
                self._step(d)
                code = self._code(d)
        if early or code != 1:
            raise ValueError("scan modulus is not primitive")
        cdef long long e, s, low
        if want_tables:
            with nogil:
                for i in range(q - 1):
                    e = self.exp2_c[i]
                    low = e % self.p
                    s = e - low + (low + 1) % self.p
                    self.zech_c[i] = SENT_C if s == 0 else self.log_c[s]

    # -- element arithmetic (python-callable glue; not hot) -----------------

    def is_square(self, code):
        return bool(self.parity_c[code >> 3] & (1 << (code & 7)))

    def tmul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp2_c[self.log_c[a] + self.log_c[b]]

    def tadd(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        cdef long long la = self.log_c[a], lb = self.log_c[b]
        cdef long long d1 = lb - la
        if d1 < 0:
            d1 += self.q - 1
        cdef unsigned int z = self.zech_c[d1]
        if z == SENT_C:
            return 0
        return self.exp2_c[la + z]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        cdef unsigned char da[MAXN]
        cdef unsigned char db[MAXN]
        cdef unsigned char out[MAXN]
        self._decode(a, da)
        self._decode(b, db)
        self._mul_digits(da, db, out)
        return self._code(out)

    cdef void _mul_digits(self, unsigned char *da, unsigned char *db,
                          unsigned char *out) noexcept nogil:
        cdef int prod[2 * MAXN]
        cdef int i, j, c, t
        cdef int n = self.n
        memset(prod, 0, sizeof(prod))
        for i in range(n):
            if da[i]:
                for j in range(n):
                    if db[j]:
                        t = prod[i + j] + self.mulmod[da[i]][db[j]]
                        if t >= self.p:
                            t -= self.p
                        prod[i + j] = t
        for j in range(n):
            out[j] = prod[j]
        for i in range(n, 2 * n - 1):
            c = prod[i]
            if c:
                for j in range(n):
                    t = out[j] + self.mulmod[c][self.redpow_c[(i - n) * MAXN + j]]
                    if t >= self.p:
                        t -= self.p
                    out[j] = t

    def add(self, a, b):
        cdef unsigned char da[MAXN]
        cdef unsigned char db[MAXN]
        self._decode(a, da)
        self._decode(b, db)
        cdef int j
        for j in range(self.n):
            da[j] = (da[j] + db[j]) % self.p
        return self._code(da)

    def pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    # -- scans --------------------------------------------------------------

    cdef void _prep(self, poly, Prep *pp):
        cdef int e
        self._decode(poly[0] if poly else 0, pp.const_dig)
        pp.nterms = 0
        for e in range(1, len(poly)):
            cc = poly[e]
            if cc:
                if pp.nterms >= MAXTERMS:
                    raise ValueError("polynomial has too many terms for the kernel")
                pp.terms[pp.nterms].idx = e - 1
                pp.terms[pp.nterms].scalar = cc if cc < self.p else -1
                self._decode(cc, pp.terms[pp.nterms].dig)
                pp.nterms += 1

    cdef void _eval(self, Prep *pp, unsigned char *X, unsigned char *acc) noexcept nogil:
        cdef int t, j, v
        cdef int n = self.n
        cdef int s
        cdef unsigned char tmp[MAXN]
        memcpy(acc, pp.const_dig, MAXN)
        for t in range(pp.nterms):
            s = pp.terms[t].scalar
            if s >= 0:
                for j in range(n):
                    v = acc[j] + self.mulmod[s][X[pp.terms[t].idx * MAXN + j]]
                    if v >= self.p:
                        v -= self.p
                    acc[j] = v
            else:
                self._mul_digits(pp.terms[t].dig, X + pp.terms[t].idx * MAXN, tmp)
                for j in range(n):
                    v = acc[j] + tmp[j]
                    if v >= self.p:
                        v -= self.p
                    acc[j] = v

    cdef inline int _nonzero(self, unsigned char *d) noexcept nogil:
        cdef int j
        for j in range(self.n):
            if d[j]:
                return 1
        return 0

    def solve_scan(self, polys, init_powers, long long steps):
        """See _purecount.ScanTables.solve_scan."""
        cdef Prep pc2, pc1, pc0, pd
        self._prep(polys[0], &pc2)
        self._prep(polys[1], &pc1)
        self._prep(polys[2], &pc0)
        self._prep(polys[3], &pd)
        cdef int dmax = len(init_powers)
        cdef unsigned char X[MAXTERMS * MAXN]
        memset(X, 0, sizeof(X))
        cdef int j, r
        if dmax > MAXTERMS:
            raise ValueError("degree too large for the kernel")
        for j in range(dmax):
            self._decode(init_powers[j], X + j * MAXN)
        cdef long long total = 0
        cdef long long i
        cdef long long q = self.q
        cdef unsigned char a2[MAXN]
        cdef unsigned char val[MAXN]
        cdef long long dcode
        with nogil:
            for i in range(steps):
                self._eval(&pc2, X, a2)
                if self._nonzero(a2):
                    self._eval(&pd, X, val)
                    if self._nonzero(val):
                        dcode = self._code(val)
                        if self.parity_c[dcode >> 3] & (1 << (dcode & 7)):
                            total += 2
                    else:
                        total += 1
                else:
                    self._eval(&pc1, X, val)
                    if self._nonzero(val):
                        total += 1
                    else:
                        self._eval(&pc0, X, val)
                        if not self._nonzero(val):
                            total += q
                for j in range(dmax):
                    for r in range(j + 1):
                        self._step(X + j * MAXN)
        return total

    def yscan(self, ypolys, long long x_start, long long x_end):
        """See _purecount.ScanTables.yscan."""
        cdef int ncols = len(ypolys)
        if ncols > MAXTERMS:
            raise ValueError("y-degree too large for the kernel")
        cdef unsigned int cpoly[MAXTERMS * MAXPOLY]
        cdef int clen[MAXTERMS]
        cdef int j, t
        memset(cpoly, 0, sizeof(cpoly))
        for j in range(ncols):
            if len(ypolys[j]) > MAXPOLY:
                raise ValueError("coefficient polynomial too long for the kernel")
            clen[j] = len(ypolys[j])
            for t in range(clen[j]):
                cpoly[j * MAXPOLY + t] = ypolys[j][t]
        cdef long long total = 0
        cdef long long x, y, acc
        cdef long long q = self.q
        cdef long long coeffs[MAXTERMS]
        cdef int deg
        with nogil:
            for x in range(x_start, x_end):
                for j in range(ncols):
                    acc = 0
                    for t in range(clen[j] - 1, -1, -1):
                        acc = self.c_tadd(self.c_tmul(acc, x), cpoly[j * MAXPOLY + t])
                    coeffs[j] = acc
                deg = ncols - 1
                while deg >= 0 and coeffs[deg] == 0:
                    deg -= 1
                if deg < 0:
                    total += q
                    continue
                if deg == 0:
                    continue
                for y in range(q):
                    acc = coeffs[deg]
                    for j in range(deg - 1, -1, -1):
                        acc = self.c_tadd(self.c_tmul(acc, y), coeffs[j])
                    if acc == 0:
                        total += 1
        return total

    cdef inline long long c_tmul(self, long long a, long long b) noexcept nogil:
        if a == 0 or b == 0:
            return 0
        return self.exp2_c[self.log_c[a] + self.log_c[b]]

    cdef inline long long c_tadd(self, long long a, long long b) noexcept nogil:
        cdef long long la, lb, d1
        cdef unsigned int z
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log_c[a]
        lb = self.log_c[b]
        d1 = lb - la
        if d1 < 0:
            d1 += self.q - 1
        z = self.zech_c[d1]
        if z == SENT_C:
            return 0
        return self.exp2_c[la + z]

    def univariate_roots(self, coeffs):
        """See _purecount.ScanTables.univariate_roots."""
        coeffs = list(coeffs)
        while coeffs and coeffs[len(coeffs) - 1] == 0:  # wraparound is off
            coeffs.pop()
        if not coeffs:
            return self.q
        cdef unsigned int cc[MAXPOLY]
        cdef int clen = len(coeffs)
        if clen > MAXPOLY:
            raise ValueError("polynomial too long for the kernel")
        cdef int t
        for t in range(clen):
            cc[t] = coeffs[t]
        cdef long long total = 0
        cdef long long x, acc
        with nogil:
            for x in range(self.q):
                acc = cc[clen - 1]
                for t in range(clen - 2, -1, -1):
                    acc = self.c_tadd(self.c_tmul(acc, x), cc[t])
                if acc == 0:
                    total += 1
        return total

    def least_root(self, coeffs):
        """See _purecount.ScanTables.least_root."""
        cdef unsigned int cc[MAXPOLY]
        cdef int clen = len(coeffs)
        if clen > MAXPOLY:
            raise ValueError("polynomial too long for the kernel")
        cdef int t
        for t in range(clen):
            cc[t] = coeffs[t]
        cdef long long x, acc
        for x in range(self.q):
            acc = 0
            for t in range(clen - 1, -1, -1):
                acc = self.c_tadd(self.c_tmul(acc, x), cc[t])
            if acc == 0:
                return x
        return -1


def make_tables(p, n, red, redpow, want_tables):
    return ScanTables(p, n, red, redpow, want_tables)
