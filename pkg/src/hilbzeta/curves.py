"""Integral plane projective curves over F_q.

A curve is a homogeneous F(x, y, z) of degree d given by sparse terms; the
arithmetic genus is (d-1)(d-2)/2.  This module counts points over
extensions exactly (through the counting backend), locates singular closed
points as Frobenius orbits, produces local equations at them, and screens
geometric integrality.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import counting
from .errors import SchemaError
from .fields import FiniteField, embed, make_field
from .local_algebra import multiplicity

CHARTS = ("z", "y", "x")

# chart -> the two affine exponent slots (the remaining one is set to 1)
_CHART_SLOTS = {"z": (0, 1), "y": (0, 2), "x": (1, 2)}


class PlaneCurve:
    """Projective plane curve F = 0 over F_{p^k}."""

    __slots__ = ("field", "degree", "terms", "name", "declared")

    def __init__(self, field: FiniteField, terms: dict, name: str = "", declared=None):
        clean = {}
        degree = None
        for (i, j, k), c in terms.items():
            c = field.element(c)
            if c.is_zero():
                continue
            if min(i, j, k) < 0:
                raise SchemaError(f"negative exponent in term {(i, j, k)}")
            if (i, j, k) in clean:
                raise SchemaError(f"duplicate exponent triple {(i, j, k)}")
            d = i + j + k
            if degree is None:
                degree = d
            elif d != degree:
                raise SchemaError(
                    f"inhomogeneous term {(i, j, k)}: total degree {d} != {degree}"
                )
            clean[(i, j, k)] = c
        if not clean:
            raise SchemaError("curve has no nonzero terms")
        if degree < 1:
            raise SchemaError("degree must be at least 1")
        self.field = field
        self.degree = degree
        self.terms = clean
        self.name = name
        self.declared = dict(declared or {})

    @property
    def genus(self) -> int:
        """Arithmetic genus of a plane curve of this degree."""
        d = self.degree
        return (d - 1) * (d - 2) // 2

    @property
    def q(self) -> int:
        return self.field.size

    def partial(self, var: int) -> dict:
        """Formal partial derivative, var in (0, 1, 2) for (x, y, z)."""
        out = {}
        for (i, j, k), c in self.terms.items():
            e = (i, j, k)[var]
            if e:
                key = tuple(v - (1 if t == var else 0) for t, v in enumerate((i, j, k)))
                coeff = c * e
                if not coeff.is_zero():
                    out[key] = coeff
        return out

    def dehomogenize(self, chart: str, terms=None) -> dict:
        """Bivariate terms {(a, b): coeff} of F with the chart variable set to 1."""
        s0, s1 = _CHART_SLOTS[chart]
        out = {}
        for (i, j, k), c in (terms or self.terms).items():
            key = ((i, j, k)[s0], (i, j, k)[s1])
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
        return {key: c for key, c in out.items() if not c.is_zero()}

    def permuted(self, perm) -> "PlaneCurve":
        """Curve with the roles of (x, y, z) permuted; counts must agree."""
        terms = {}
        for (i, j, k), c in self.terms.items():
            old = (i, j, k)
            terms[(old[perm[0]], old[perm[1]], old[perm[2]])] = c
        return PlaneCurve(self.field, terms, name=f"{self.name}~perm", declared=self.declared)

    def content_hash(self) -> str:
        doc = {
            "p": self.field.p,
            "k": self.field.k,
            "degree": self.degree,
            "terms": sorted(
                [list(key) + [list(c.coeffs)] for key, c in self.terms.items()]
            ),
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self):
        return f"PlaneCurve({self.name or 'unnamed'}, d={self.degree}, q={self.q})"


def parse_curve(doc: dict) -> PlaneCurve:
    """Validate a curve document (see the CLI docs for the JSON schema)."""
    if not isinstance(doc, dict):
        raise SchemaError("curve document must be a JSON object")
    for key in ("p", "k", "terms"):
        if key not in doc:
            raise SchemaError(f"curve document is missing '{key}'")
    try:
        field = make_field(int(doc["p"]), int(doc["k"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    terms = {}
    for idx, row in enumerate(doc["terms"]):
        if not isinstance(row, (list, tuple)) or len(row) != 4:
            raise SchemaError(f"term {idx}: expected [i, j, k, coeff]")
        i, j, k, coeff = row
        try:
            i, j, k = int(i), int(j), int(k)
        except (TypeError, ValueError):
            raise SchemaError(f"term {idx}: exponents must be integers")
        try:
            if isinstance(coeff, str):
                value = field.element(int(coeff))
            else:
                value = field.element([int(c) for c in coeff])
        except (TypeError, ValueError):
            raise SchemaError(
                f"term {idx}: coefficient {coeff!r} does not parse in F_{field.size}"
            )
        if (i, j, k) in terms:
            raise SchemaError(f"term {idx}: duplicate exponent triple {(i, j, k)}")
        terms[(i, j, k)] = value
    try:
        curve = PlaneCurve(
            field, terms, name=str(doc.get("name", "")), declared=doc.get("declared")
        )
    except SchemaError:
        raise
    return curve


# ---------------------------------------------------------------------------
# Point counting
# ---------------------------------------------------------------------------

def count_points(
    curve: PlaneCurve,
    m: int,
    workers: int = 1,
    budget: int = counting.DEFAULT_WORK_BUDGET,
) -> int:
    """Exact #C(F_{q^m}), as affine chart z = 1 plus the line at infinity."""
    if m < 1:
        raise ValueError("extension degree must be positive")
    p, k = curve.field.p, curve.field.k
    kf = counting.kernel_field(p, k * m)
    chart = curve.dehomogenize("z")
    terms = {
        key: counting.embed_code(kf, curve.field, c) for key, c in chart.items()
    }
    total = counting.affine_count(kf, terms, workers=workers, budget=budget)
    # line at infinity: points (x:1:0), then (1:0:0)
    inf_poly = [0] * (curve.degree + 1)
    for (i, j, kk), c in curve.terms.items():
        if kk == 0:
            inf_poly[i] = counting.embed_code(kf, curve.field, c)
    total += counting.univariate_root_count(kf, inf_poly, budget)
    lead = curve.terms.get((curve.degree, 0, 0))
    if lead is None:
        total += 1
    return total


# ---------------------------------------------------------------------------
# Singular locus
# ---------------------------------------------------------------------------

@dataclass
class ClosedPoint:
    """A Frobenius orbit of geometric points, with one canonical representative."""

    field: FiniteField  # F_{q^e}, the residue field
    degree: int  # e, orbit size over the curve's base field
    chart: str
    rep: tuple  # projective (x, y, z) over F_{q^e}, last nonzero coord = 1
    multiplicity: int

    def affine_coords(self):
        s0, s1 = _CHART_SLOTS[self.chart]
        return (self.rep[s0], self.rep[s1])

    def key(self):
        return (self.degree, self.chart, tuple(c.coeffs for c in self.rep))


@dataclass
class SingularScan:
    points: list
    m_scanned: int
    complete: bool
    note: str = ""


# Fields larger than this have no lookup tables for the singular scan; the
# m range is clamped and the scan reports possible incompleteness instead.
_SCAN_FIELD_LIMIT = 1024


def _frobenius_orbit(E: FiniteField, base_k: int, point):
    """Orbit of a normalized projective point under x -> x^(q) (q = p^base_k)."""
    orbit = [point]
    cur = point
    while True:
        cur = tuple(c.frobenius(base_k) for c in cur)
        if cur == point:
            return orbit
        orbit.append(cur)


def _normalize(point):
    for c in reversed(point):
        if not c.is_zero():
            inv = c.inverse()
            return tuple(x * inv for x in point)
    raise ValueError("zero vector is not a projective point")


def _chart_of(point):
    if not point[2].is_zero():
        return "z"
    if not point[1].is_zero():
        return "y"
    return "x"


def singular_closed_points(
    curve: PlaneCurve, m_max: int | None = None
) -> SingularScan:
    """All singular closed points of residue degree <= m_max, as orbits.

    A point is singular when F and all three partials vanish (all three are
    needed: in characteristic p the Euler relation d*F = sum x_i dF/dx_i can
    degenerate).  The default search depth min(6, max(1, g_a)) is complete
    for integral curves, where each geometric singular point carries delta
    >= 1 and the total delta budget is g_a, so no orbit is longer than g_a.
    """
    g = curve.genus
    wanted = m_max if m_max is not None else min(6, max(1, g))
    p, k = curve.field.p, curve.field.k
    depth = wanted
    while depth > 1 and curve.q**depth > _SCAN_FIELD_LIMIT:
        depth -= 1

    gradients = [curve.terms, curve.partial(0), curve.partial(1), curve.partial(2)]
    found = {}
    for m in range(1, depth + 1):
        E = make_field(p, k * m)
        for point in _scan_level(curve, gradients, E):
            orbit = _frobenius_orbit(E, k, point)
            if len(orbit) != m:
                continue  # rational over a proper subfield; found at that level
            rep = min(orbit, key=lambda pt: tuple(c.code for c in pt))
            chart = _chart_of(rep)
            mult = _multiplicity_at(curve, E, chart, rep)
            cp = ClosedPoint(E, m, chart, rep, mult)
            found.setdefault(cp.key(), cp)

    points = sorted(found.values(), key=lambda cp: cp.key())
    # delta-budget completeness: each found orbit consumes e * mu(mu-1)/2 of
    # the total budget g_a; a missed orbit would need degree > depth, hence
    # budget > depth.
    spent = sum(cp.degree * (cp.multiplicity * (cp.multiplicity - 1) // 2) for cp in points)
    slack = g - spent
    complete = slack <= depth
    note = ""
    if depth < wanted:
        note = f"search clamped to residue degree {depth} by the field-size limit"
        complete = complete and slack <= depth
    total_orbit = sum(cp.degree for cp in points)
    if total_orbit > (curve.degree - 1) ** 2:
        note = (note + "; " if note else "") + (
            "singular locus exceeds the Bezout bound: curve is not reduced"
        )
        complete = False
    return SingularScan(points, depth, complete, note)


def _scan_level(curve: PlaneCurve, gradients, E: FiniteField):
    """Yield normalized projective points over E where F and all partials vanish."""
    ops = E.small_ops(_SCAN_FIELD_LIMIT)
    q2 = E.size
    d = curve.degree
    base = curve.field

    def encode(terms, chart):
        s0, s1 = _CHART_SLOTS[chart]
        out = {}
        for (i, j, kk), c in terms.items():
            key = ((i, j, kk)[s0], (i, j, kk)[s1])
            img = embed(base, E, c).code
            if key in out:
                out[key] = ops.add[out[key]][img]
            else:
                out[key] = img
        return [(a, b, c) for (a, b), c in out.items() if c]

    # powers table: pow_t[c][e]
    maxe = d + 1
    pow_t = [[1] * (maxe + 1) for _ in range(q2)]
    for c in range(q2):
        for e in range(1, maxe + 1):
            pow_t[c][e] = ops.mul[pow_t[c][e - 1]][c]

    polys_z = [encode(t, "z") for t in gradients]

    def eval_terms(tl, a, b):
        acc = 0
        for (i, j, c) in tl:
            acc = ops.add[acc][ops.mul[c][ops.mul[pow_t[a][i]][pow_t[b][j]]]]
        return acc

    # affine chart z = 1
    f_terms = polys_z[0]
    for a in range(q2):
        for b in range(q2):
            if eval_terms(f_terms, a, b):
                continue
            if all(not eval_terms(tl, a, b) for tl in polys_z[1:]):
                yield (E.from_code(a), E.from_code(b), E.one())
    # line z = 0: points (x:1:0)
    polys_y0 = [
        [(i, kk, c) for (i, kk, c) in encode(t, "y") if kk == 0] for t in gradients
    ]
    for a in range(q2):
        if all(not eval_terms(tl, a, 0) for tl in polys_y0):
            yield (E.from_code(a), E.one(), E.zero())
    # the point (1:0:0)
    polys_x0 = [
        [(j, kk, c) for (j, kk, c) in encode(t, "x") if j == 0 and kk == 0]
        for t in gradients
    ]
    if all(not eval_terms(tl, 0, 0) for tl in polys_x0):
        yield (E.one(), E.zero(), E.zero())


def local_equation(curve: PlaneCurve, point: ClosedPoint) -> dict:
    """Bivariate f over F_{q^e} with f(0,0) = 0 cutting out the germ at the point.

    Dehomogenizes in the point's chart and translates the point to the
    origin; the completed local ring of the curve there is F_{q^e}[[x,y]]/(f).
    """
    E = point.field
    chart = curve.dehomogenize(point.chart)
    a, b = point.affine_coords()
    shifted = {}
    for (i, j), c in chart.items():
        ce = embed(curve.field, E, c)
        for r in range(i + 1):
            for s in range(j + 1):
                coeff = ce * (_binom(i, r) * _binom(j, s)) * a ** (i - r) * b ** (j - s)
                if coeff.is_zero():
                    continue
                key = (r, s)
                shifted[key] = shifted.get(key, E.zero()) + coeff
    shifted = {key: c for key, c in shifted.items() if not c.is_zero()}
    if shifted.get((0, 0)) is not None:
        raise ValueError("point does not lie on the curve")
    return shifted


def _binom(n, r):
    out = 1
    for t in range(r):
        out = out * (n - t) // (t + 1)
    return out


def _multiplicity_at(curve, E, chart, rep) -> int:
    probe = ClosedPoint(E, 0, chart, rep, 0)
    return multiplicity(local_equation(curve, probe))


# ---------------------------------------------------------------------------
# Integrality screen
# ---------------------------------------------------------------------------

@dataclass
class IntegralityVerdict:
    result: str  # "pass" | "fail" | "inconclusive"
    reasons: list
    declared_integral: bool


def integrality_heuristic(curve: PlaneCurve, counts: dict) -> IntegralityVerdict:
    """Necessary-condition screen for geometric integrality.

    (a) F is squarefree (checked chartwise over the base field);
    (b) the largest available count sits in the Weil band
        |N_m - q^m - 1| <= 2 g_a ((sqrt q)^m + 1), which a geometrically
        reducible curve violates for large m (c components give ~ c q^m).
    The curve document's declared integral flag overrides an inconclusive
    outcome, never a failure.
    """
    reasons = []
    declared = bool(curve.declared.get("integral", False))
    for chart in CHARTS:
        f = curve.dehomogenize(chart)
        if not _squarefree_bivariate(f, curve.field):
            reasons.append(f"repeated factor visible in chart {chart}")
            break
    band_checked = False
    if counts:
        m = max(counts)
        q, g = curve.q, curve.genus
        dev = abs(counts[m] - q**m - 1) - 2 * g
        if dev > 0 and dev * dev > 4 * g * g * q**m:
            reasons.append(
                f"N_{m} = {counts[m]} is outside the Weil band around q^{m}+1"
            )
        band_checked = True
    if reasons:
        return IntegralityVerdict("fail", reasons, declared)
    if not band_checked:
        result = "pass" if declared else "inconclusive"
        return IntegralityVerdict(
            result, ["no point counts available for the Weil-band screen"], declared
        )
    return IntegralityVerdict("pass", [], declared)


# -- bivariate squarefreeness over F_q (exact, primitive PRS) ----------------

def _upoly_strip(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def _upoly_mul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _upoly_strip(out)


def _upoly_divmod(a, b):
    a = list(a)
    inv = b[-1].inverse()
    quo = []
    while len(a) >= len(b):
        c = a[-1] * inv
        quo.append(c)
        for i in range(len(b)):
            a[len(a) - len(b) + i] = a[len(a) - len(b) + i] - c * b[i]
        a.pop()
        _upoly_strip(a)
        if len(a) < len(b):
            break
    return _upoly_strip(a)


def _upoly_gcd(a, b):
    a, b = _upoly_strip(list(a)), _upoly_strip(list(b))
    while b:
        a, b = b, _upoly_divmod(a, b)
    return a


def _upoly_exact_div(a, b):
    """a / b assuming exact divisibility (used for content removal)."""
    a = list(a)
    inv = b[-1].inverse()
    out = []
    while len(a) >= len(b):
        c = a[-1] * inv
        out.append(c)
        for i in range(len(b)):
            a[len(a) - len(b) + i] = a[len(a) - len(b) + i] - c * b[i]
        a.pop()
        _upoly_strip(a)
    out.reverse()
    return out


def _to_ypolys(fterms, F):
    ydeg = max(j for (_, j) in fterms)
    xdeg = max(i for (i, _) in fterms)
    rows = []
    for j in range(ydeg + 1):
        row = [F.zero()] * (xdeg + 1)
        for (i, jj), c in fterms.items():
            if jj == j:
                row[i] = c
        rows.append(_upoly_strip(row))
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _content(rows):
    c = []
    for row in rows:
        if row:
            c = _upoly_gcd(c, row) if c else list(row)
    return c


def _primitive(rows):
    c = _content(rows)
    if len(c) <= 1:
        return rows
    return [(_upoly_exact_div(row, c) if row else row) for row in rows]


def _pseudo_rem(A, B, F):
    """Pseudo-remainder of A by B in (F[x])[y]."""
    A = [list(r) for r in A]
    lB = B[-1]
    while len(A) >= len(B) and A:
        lA = A[-1]
        A = [_upoly_mul(r, lB, F.zero()) for r in A[:-1]] + [[]]
        shift = len(A) - len(B)
        for t in range(len(B) - 1):
            prod = _upoly_mul(lA, B[t], F.zero())
            row = A[shift + t]
            width = max(len(row), len(prod))
            row = row + [F.zero()] * (width - len(row))
            for i, v in enumerate(prod):
                row[i] = row[i] - v
            A[shift + t] = _upoly_strip(row)
        A.pop()
        while A and not A[-1]:
            A.pop()
    return A


def _bivariate_gcd(f_rows, g_rows, F):
    """Gcd (up to a unit) in F[x][y], rows indexed by y-degree."""
    A = [_upoly_strip(list(r)) for r in f_rows]
    B = [_upoly_strip(list(r)) for r in g_rows]
    while A and not A[-1]:
        A.pop()
    while B and not B[-1]:
        B.pop()
    if not A:
        return B
    if not B:
        return A
    cont = _upoly_gcd(_content(A), _content(B))
    A, B = _primitive(A), _primitive(B)
    if len(A) < len(B):
        A, B = B, A
    while len(B) > 1:
        R = _pseudo_rem(A, B, F)
        if not R:
            A = B
            B = []
            break
        A, B = B, _primitive(R)
    if B:
        # PRS bottomed out at y-degree 0: primitive parts are coprime
        pp = [[F.one()]]
    else:
        pp = A
    return [_upoly_mul(row, cont, F.zero()) if row else [] for row in pp]


def _is_constant_rows(rows) -> bool:
    return len(rows) == 1 and len(rows[0]) <= 1


def _squarefree_bivariate(fterms: dict, F: FiniteField) -> bool:
    """Exact squarefree test: gcd(f, f_x, f_y) constant, with the
    both-partials-vanish case (a p-th power, since F_q is perfect) handled
    separately."""
    fx = {}
    fy = {}
    for (i, j), c in fterms.items():
        if i:
            v = c * i
            if not v.is_zero():
                fx[(i - 1, j)] = v
        if j:
            v = c * j
            if not v.is_zero():
                fy[(i, j - 1)] = v
    if not fx and not fy:
        return max(i + j for (i, j) in fterms) == 0
    g_rows = _to_ypolys(fterms, F)
    for part in (fx, fy):
        if part:
            g_rows = _bivariate_gcd(g_rows, _to_ypolys(part, F), F)
            if _is_constant_rows(g_rows):
                return True
    return _is_constant_rows(g_rows)
