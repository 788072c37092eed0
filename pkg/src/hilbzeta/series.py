"""Truncated formal power series over exact rationals, and the zeta-side
operations built on them: exp of a counting logarithm, numerator extraction
against (1-t)(1-qt), the functional-equation check, and the Newton-identity
numerator from Frobenius power sums.

Coefficients are Fractions internally; every theorem-facing boundary asserts
integrality.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InconsistentCountsError

__all__ = [
    "TruncatedSeries",
    "NumeratorPolynomial",
    "ExtractionResult",
    "FunctionalEquationResult",
    "zeta_from_counts",
    "counts_from_zeta",
    "extract_numerator",
    "check_functional_equation",
    "numerator_from_power_sums",
]


class TruncatedSeries:
    """Power series known modulo t^prec.

    Coefficients at indices >= prec are unknown, not zero; binary operations
    truncate to the smaller precision.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec=None):
        coeffs = [Fraction(c) for c in coeffs]
        if prec is None:
            prec = len(coeffs)
        if prec < 1:
            raise ValueError("precision must be at least 1")
        coeffs = coeffs[:prec] + [Fraction(0)] * (prec - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.prec = prec

    @classmethod
    def one(cls, prec):
        return cls([1], prec)

    def __getitem__(self, n):
        if not 0 <= n < self.prec:
            raise IndexError(f"coefficient {n} outside precision {self.prec}")
        return self.coeffs[n]

    def truncate(self, prec):
        if prec > self.prec:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[:prec], prec)

    def __add__(self, other):
        prec = min(self.prec, other.prec)
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(prec)], prec
        )

    def __sub__(self, other):
        prec = min(self.prec, other.prec)
        return TruncatedSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(prec)], prec
        )

    def __mul__(self, other):
        prec = min(self.prec, other.prec)
        out = [Fraction(0)] * prec
        for i, a in enumerate(self.coeffs[:prec]):
            if a:
                for j in range(prec - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return TruncatedSeries(out, prec)

    def inverse(self):
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [Fraction(0)] * (self.prec - 1)
        for n in range(1, self.prec):
            acc = Fraction(0)
            for j in range(1, n + 1):
                acc += self.coeffs[j] * out[n - j]
            out[n] = -inv0 * acc
        return TruncatedSeries(out, self.prec)

    def derivative(self):
        """d/dt, one coefficient shorter."""
        if self.prec == 1:
            return TruncatedSeries([0], 1)
        return TruncatedSeries(
            [i * self.coeffs[i] for i in range(1, self.prec)], self.prec - 1
        )

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def integer_coeffs(self):
        if not self.is_integral():
            raise InconsistentCountsError("series has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.coeffs, self.prec))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.prec > 8 else ""
        return f"TruncatedSeries([{shown}{tail}], prec={self.prec})"


def geometric(ratio, prec):
    """1/(1 - ratio*t) truncated."""
    out = [Fraction(1)]
    for _ in range(prec - 1):
        out.append(out[-1] * ratio)
    return TruncatedSeries(out, prec)


def substitute_power(series: TruncatedSeries, e: int, prec: int) -> TruncatedSeries:
    """Replace t by t^e (local factors of closed points of degree e)."""
    out = [Fraction(0)] * prec
    for i, c in enumerate(series.coeffs):
        if i * e >= prec:
            break
        out[i * e] = c
    return TruncatedSeries(out, prec)


def zeta_from_counts(counts, prec) -> TruncatedSeries:
    """exp(sum_m N_m t^m / m) truncated at prec.

    counts[i] is N_{i+1}; at least prec-1 counts are required.  The result
    counts effective zero-cycles, so it must come out integral with
    nonnegative coefficients; anything else means the inputs are not the
    point counts of any scheme.
    """
    counts = list(counts)
    if len(counts) < prec - 1:
        raise ValueError(
            f"need {prec - 1} counts for precision {prec}, got {len(counts)}"
        )
    if any(c < 0 for c in counts):
        raise ValueError("point counts must be nonnegative")
    # b' = a'.b with a = sum N_m t^m / m gives n*b_n = sum_{j<=n} N_j b_{n-j}
    out = [Fraction(1)] + [Fraction(0)] * (prec - 1)
    for n in range(1, prec):
        acc = Fraction(0)
        for j in range(1, n + 1):
            acc += counts[j - 1] * out[n - j]
        out[n] = acc / n
    series = TruncatedSeries(out, prec)
    if not series.is_integral() or not series.is_nonnegative():
        raise InconsistentCountsError(
            "counts are inconsistent with any scheme: zeta expansion is not "
            "a nonnegative integer series"
        )
    return series


def counts_from_zeta(series: TruncatedSeries):
    """Recover N_1..N_{prec-1} from t * Z'/Z (inverse of zeta_from_counts)."""
    ratio = series.derivative() * series.inverse().truncate(series.prec - 1)
    counts = []
    for m in range(1, series.prec):
        c = ratio.coeffs[m - 1]
        if c.denominator != 1:
            raise InconsistentCountsError("log-derivative is not integral")
        counts.append(int(c))
    return counts


class NumeratorPolynomial:
    """Candidate zeta numerator P(t) = p_0 + ... + p_{2g} t^{2g} over Z."""

    __slots__ = ("coeffs", "genus", "q")

    def __init__(self, coeffs, genus, q):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != 2 * genus + 1:
            raise ValueError("numerator must carry exactly 2*genus + 1 coefficients")
        if coeffs[0] != 1:
            raise ValueError("constant coefficient must be 1 (Hilb^0 is a point)")
        self.coeffs = tuple(coeffs)
        self.genus = genus
        self.q = q

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return 0

    def __eq__(self, other):
        return (
            isinstance(other, NumeratorPolynomial)
            and self.coeffs == other.coeffs
            and self.genus == other.genus
            and self.q == other.q
        )

    def __repr__(self):
        return f"NumeratorPolynomial({list(self.coeffs)}, genus={self.genus}, q={self.q})"


@dataclass
class ExtractionResult:
    numerator: NumeratorPolynomial
    shape_ok: bool  # all coefficients beyond t^{2g} vanish up to precision
    observed_tail: tuple  # the coefficients at 2g+1 .. prec-1


# Shape margin: this many vanishing coefficients past t^{2g} are demanded
# before the tail is believed to be genuinely zero rather than an artifact.
SHAPE_MARGIN = 3


def extract_numerator(series: TruncatedSeries, q: int, genus: int) -> ExtractionResult:
    """P = Z * (1-t)(1-qt), with the tail past t^{2g} reported as a verdict."""
    need = 2 * genus + 1 + SHAPE_MARGIN
    if series.prec < need:
        raise ValueError(
            f"insufficient precision: need at least {need}, have {series.prec}"
        )
    denom = TruncatedSeries([1, -(q + 1), q], series.prec)  # (1-t)(1-qt)
    product = series * denom
    tail = tuple(product.coeffs[2 * genus + 1 :])
    shape_ok = all(c == 0 for c in tail)
    head = product.coeffs[: 2 * genus + 1]
    if any(c.denominator != 1 for c in head):
        raise InconsistentCountsError("numerator coefficients are not integers")
    numerator = NumeratorPolynomial([int(c) for c in head], genus, q)
    return ExtractionResult(numerator, shape_ok, tail)


@dataclass
class FunctionalEquationResult:
    ok: bool
    first_violation: int | None  # smallest i with p_{2g-i} != q^{g-i} p_i


def check_functional_equation(numerator: NumeratorPolynomial) -> FunctionalEquationResult:
    """Coefficientwise p_{2g-i} = q^{g-i} p_i for 0 <= i <= g."""
    g, q, p = numerator.genus, numerator.q, numerator.coeffs
    for i in range(g + 1):
        if p[2 * g - i] != q ** (g - i) * p[i]:
            return FunctionalEquationResult(False, i)
    return FunctionalEquationResult(True, None)


def numerator_from_power_sums(power_sums, genus: int, q: int) -> NumeratorPolynomial:
    """Weil numerator of a smooth curve from Frobenius power sums.

    power_sums[m-1] = q^m + 1 - N_m for m = 1..2g are the power sums of the
    2g Frobenius eigenvalues; Newton's identities
        i*e_i = sum_{j=1..i} (-1)^(j-1) e_{i-j} p_j
    recover the elementary symmetric functions, and
        P(t) = sum_i (-1)^i e_i t^i.
    """
    power_sums = [Fraction(s) for s in power_sums]
    if len(power_sums) != 2 * genus:
        raise ValueError(f"need exactly {2 * genus} power sums, got {len(power_sums)}")
    e = [Fraction(1)]
    for i in range(1, 2 * genus + 1):
        acc = Fraction(0)
        for j in range(1, i + 1):
            term = e[i - j] * power_sums[j - 1]
            acc += term if (j - 1) % 2 == 0 else -term
        e.append(acc / i)
    coeffs = []
    for i, ei in enumerate(e):
        if ei.denominator != 1:
            raise InconsistentCountsError(
                f"inconsistent point counts: e_{i} = {ei} is not an integer"
            )
        coeffs.append(int(ei) if i % 2 == 0 else -int(ei))
    return NumeratorPolynomial(coeffs, genus, q)


def coeffs_to_strings(values) -> list:
    """Arbitrary-precision-safe JSON form: decimal strings."""
    out = []
    for v in values:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError("refusing to serialize a non-integer coefficient")
            v = int(v)
        out.append(str(int(v)))
    return out
