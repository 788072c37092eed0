"""Exact arithmetic in finite fields F_{p^k} with deterministic presentations.

A field is presented as F_p[u]/(m(u)) where m is the lexicographically least
monic irreducible polynomial of degree k.  "Lexicographically least" always
means: encode a polynomial sum(c_i u^i) as the integer sum(c_i p^i) and take
the smallest code.  The same convention orders field elements, so every
construction, element listing and embedding in this module is reproducible
across runs.
"""

from __future__ import annotations

__all__ = [
    "is_prime",
    "make_field",
    "embed",
    "FiniteField",
    "FieldElement",
    "SmallFieldOps",
]


def is_prime(n: int) -> bool:
    """Trial-division primality test; inputs here are desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Univariate polynomials over F_p: tuples of ints, little-endian, no trailing
# zeros.  These helpers back the modulus searches and are reused by the
# counting backend for its (independently presented) scan fields.
# ---------------------------------------------------------------------------

def _pstrip(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _pstrip(out)


def _psub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _pstrip(out)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pstrip(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    rem = list(a)
    quo = [0] * max(0, len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1] * inv_lead % p
        if c:
            quo[shift] = c
            for i, bi in enumerate(b):
                rem[shift + i] = (rem[shift + i] - c * bi) % p
    return _pstrip(quo), _pstrip(rem)


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pgcd(a, b, p):
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = tuple(c * inv_lead % p for c in a)
    return a


def _ppowmod(base, e, mod, p):
    result = (1,)
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _code_to_poly(code, p):
    out = []
    while code:
        code, c = divmod(code, p)
        out.append(c)
    return tuple(out)


def _poly_to_code(poly, p):
    code = 0
    for c in reversed(poly):
        code = code * p + c
    return code


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _rabin_irreducible(f, p):
    k = len(f) - 1
    x = (0, 1)
    h = x
    for _ in range(k):
        h = _ppowmod(h, p, f, p)  # h <- h^p, i.e. x^(p^i)
    if _psub(h, x, p):
        return False
    for r in _prime_factors(k):
        h = x
        for _ in range(k // r):
            h = _ppowmod(h, p, f, p)
        if len(_pgcd(_psub(h, x, p), f, p)) > 1:
            return False
    return True


def _trial_irreducible(f, p):
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for code in range(p**d, 2 * p**d):  # monic divisors of degree d
            if not _pmod(f, _code_to_poly(code, p), p):
                return False
    return True


# Trial factor search is the documented default; above this many candidate
# divisors it would crawl, so the equivalent Rabin test takes over.
_TRIAL_LIMIT = 20000


def poly_is_irreducible(f, p):
    f = _pstrip(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if f[0] == 0:
        return False  # divisible by u
    if p ** (k // 2) > _TRIAL_LIMIT:
        return _rabin_irreducible(f, p)
    return _trial_irreducible(f, p)


def least_irreducible(p: int, k: int):
    """Lexicographically least monic irreducible of degree k over F_p."""
    if k == 1:
        return (0, 1)
    for low in range(p**k):
        f = _code_to_poly(p**k + low, p)
        if poly_is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


def poly_is_primitive(f, p):
    """True when u generates the multiplicative group of F_p[u]/(f)."""
    k = len(f) - 1
    q = p**k - 1
    u = (0, 1) if k > 1 else ((-f[0]) % p,)
    for r in _prime_factors(q):
        if _ppowmod(u, q // r, f, p) == (1,):
            return False
    return True


def least_primitive_modulus(p: int, n: int):
    """Least monic irreducible of degree n over F_p whose root is primitive.

    Used by the counting backend, whose scan fields need a generator whose
    power chain enumerates the whole multiplicative group.
    """
    if n == 1:
        for g in range(2, p):
            if poly_is_primitive(((-g) % p, 1), p):
                return ((-g) % p, 1)
        if p == 2:
            return (1, 1)  # F_2^* is trivial; u+1 with root 1 works
        raise AssertionError("no primitive root found")
    for low in range(1, p**n):  # constant term must be nonzero
        f = _code_to_poly(p**n + low, p)
        if poly_is_irreducible(f, p) and poly_is_primitive(f, p):
            return f
    raise AssertionError("no primitive polynomial found")


# ---------------------------------------------------------------------------
# Field and element classes
# ---------------------------------------------------------------------------

class FieldElement:
    """Element of a FiniteField, stored in the polynomial basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of length field.k, entries in [0, p)

    @property
    def code(self) -> int:
        return _poly_to_code(self.coeffs, self.field.p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("cross-field arithmetic is not defined")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._sub(other.coeffs, self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-c) % p for c in self.coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.size - 2)

    def frobenius(self, times: int = 1):
        """Apply x -> x^p `times` times."""
        out = self
        for _ in range(times):
            out = out ** self.field.p
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.element(other)
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else str(c) + "*"
                parts.append(f"{head}u" if i == 1 else f"{head}u^{i}")
        return " + ".join(parts) if parts else "0"


class FiniteField:
    """The field F_{p^k} presented as F_p[u]/(modulus)."""

    __slots__ = ("p", "k", "modulus", "size", "_red", "_embed_cache", "_small")

    def __init__(self, p: int, k: int, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be at least 1")
        self.p = p
        self.k = k
        self.size = p**k
        if modulus is None:
            modulus = least_irreducible(p, k)
        modulus = _pstrip(modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not poly_is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        # reduction table: red[i] = u^(k+i) mod modulus, i = 0..k-2
        red = []
        if k > 1:
            r0 = tuple((-c) % p for c in modulus[:k])
            cur = r0
            red.append(cur)
            for _ in range(k - 2):
                top = cur[k - 1]
                cur = tuple(
                    ((cur[j - 1] if j else 0) + top * r0[j]) % p for j in range(k)
                )
                red.append(cur)
        self._red = red
        self._embed_cache = {}
        self._small = None

    # -- internal coefficient-tuple arithmetic ---------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        out = prod[:k]
        for i in range(k, 2 * k - 1):
            c = prod[i]
            if c:
                row = self._red[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out)

    # -- public API -------------------------------------------------------

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.k - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise ValueError(f"coefficient vector longer than k={self.k}")
        coeffs = coeffs + (0,) * (self.k - len(coeffs))
        return FieldElement(self, coeffs)

    def from_code(self, code: int) -> FieldElement:
        if not 0 <= code < self.size:
            raise ValueError("code out of range")
        return self.element(_code_to_poly(code, self.p))

    def zero(self) -> FieldElement:
        return self.element(0)

    def one(self) -> FieldElement:
        return self.element(1)

    def gen(self) -> FieldElement:
        """The polynomial-basis generator u (for k = 1 this is 1)."""
        if self.k == 1:
            return self.one()
        return self.element((0, 1))

    def elements(self):
        """All p^k elements, ordered by ascending integer code."""
        for code in range(self.size):
            yield self.from_code(code)

    def small_ops(self, limit: int = 1024):
        if self._small is None:
            if self.size > limit:
                raise ValueError(
                    f"field of size {self.size} exceeds small-table limit {limit}"
                )
            self._small = SmallFieldOps(self)
        return self._small

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        parts = []
        for i, c in enumerate(self.modulus):
            if not c:
                continue
            head = "" if (c == 1 and i > 0) else str(c)
            if i == 0:
                parts.append(head)
            elif i == 1:
                parts.append(f"{head}u" if head in ("", "1") else f"{head}*u")
            else:
                parts.append(f"{head}u^{i}" if head == "" else f"{head}*u^{i}")
        return f"F_{self.p}^{self.k} ({' + '.join(parts)})"


class SmallFieldOps:
    """Code-indexed lookup tables for fields small enough to tabulate.

    Field elements are integer codes in [0, q).  Used by the local-algebra
    and ideal-enumeration layers, whose inner loops would crawl on
    FieldElement objects.
    """

    __slots__ = ("field", "q", "p", "add", "mul", "neg", "inv", "frob")

    def __init__(self, field: FiniteField):
        q = field.size
        elems = list(field.elements())
        self.field = field
        self.q = q
        self.p = field.p
        codes = {e.coeffs: i for i, e in enumerate(elems)}
        self.add = [
            [codes[field._add(a.coeffs, b.coeffs)] for b in elems] for a in elems
        ]
        self.mul = [
            [codes[field._mul(a.coeffs, b.coeffs)] for b in elems] for a in elems
        ]
        self.neg = [codes[(-a).coeffs] for a in elems]
        inv = [0] * q
        for i in range(1, q):
            inv[i] = codes[elems[i].inverse().coeffs]
        self.inv = inv
        self.frob = [codes[(a**field.p).coeffs] for a in elems]

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self.mul[r][a]
            a = self.mul[a][a]
            e >>= 1
        return r

    def to_element(self, code) -> FieldElement:
        return self.field.from_code(code)

    def from_element(self, elt: FieldElement) -> int:
        return elt.code


_FIELD_CACHE: dict = {}


def make_field(p: int, k: int) -> FiniteField:
    """F_{p^k} with the lexicographically least monic irreducible modulus."""
    key = (p, k)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p, k)
    return _FIELD_CACHE[key]


def embed(src: FiniteField, dst: FiniteField, a: FieldElement) -> FieldElement:
    """Image of a under the embedding pinned by the least root of src's modulus.

    The embedding sends the polynomial-basis generator of src to the
    lexicographically least root of src's modulus in dst, which fixes one
    of the k conjugate embeddings deterministically.
    """
    if src.p != dst.p:
        raise ValueError("fields have different characteristics")
    if dst.k % src.k != 0:
        raise ValueError(
            f"no embedding: degree {src.k} does not divide {dst.k}"
        )
    if a.field != src:
        raise ValueError("element does not belong to the source field")
    if src == dst:
        return a
    key = (dst.p, dst.k, dst.modulus)
    rho = src._embed_cache.get(key)
    if rho is None:
        for cand in dst.elements():
            acc = dst.zero()
            for c in reversed(src.modulus):
                acc = acc * cand + dst.element(c)
            if acc.is_zero():
                rho = cand
                break
        else:
            raise AssertionError("modulus has no root in the target field")
        src._embed_cache[key] = rho
    out = dst.zero()
    for c in reversed(a.coeffs):
        out = out * rho + dst.element(c)
    return out
