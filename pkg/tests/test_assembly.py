import pytest

from hilbzeta.assembly import (
    estimate_branch_orbits,
    global_hilbert_zeta,
    macdonald_two_path_check,
    smooth_locus_zeta,
    verify_local_theorem,
    verify_weil,
)
from hilbzeta.curves import PlaneCurve, singular_closed_points
from hilbzeta.fields import make_field
from hilbzeta.series import TruncatedSeries, geometric


def curve(p, terms, name="t", declared=None):
    F = make_field(p, 1)
    return PlaneCurve(F, {k: F.element(c) for k, c in terms.items()}, name, declared)


LINE = {(1, 0, 0): 1}
CONIC = {(0, 1, 1): 1, (2, 0, 0): -1}
CUSP = {(0, 2, 1): 1, (3, 0, 0): -1}
NODE_SPLIT = {(0, 2, 1): 1, (2, 0, 1): -1, (3, 0, 0): -1}
NODE_NONSPLIT = {(0, 2, 1): 1, (2, 0, 1): 1, (3, 0, 0): -1}
ELLIPTIC = {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): 1}


def local(p, terms):
    F = make_field(p, 1)
    return {k: F.element(c) for k, c in terms.items()}, F


A1 = {(1, 1): 1}
A2 = {(0, 2): 1, (3, 0): -1}
A3 = {(0, 2): 1, (4, 0): -1}
A4 = {(0, 2): 1, (5, 0): -1}
NONSPLIT_LOCAL = {(0, 2): 1, (2, 0): 1, (3, 0): -1}


# -- smooth locus -----------------------------------------------------------

def test_smooth_locus_cusp_is_affine_line():
    C = curve(3, CUSP)
    counts = {m: 3**m + 1 for m in range(1, 6)}
    pts = singular_closed_points(C).points
    z = smooth_locus_zeta(C, counts, pts, 6)
    assert z.integer_coeffs() == [3**n for n in range(6)]  # 1/(1-3t)


def test_smooth_locus_split_node():
    C = curve(3, NODE_SPLIT)
    counts = {m: 3**m for m in range(1, 6)}
    pts = singular_closed_points(C).points
    z = smooth_locus_zeta(C, counts, pts, 6)
    expect = geometric(1, 6).inverse() * geometric(3, 6)  # (1-t)/(1-3t)
    assert z.coeffs == expect.coeffs


def test_smooth_curve_smooth_locus_is_full_zeta():
    from hilbzeta.series import zeta_from_counts

    C = curve(3, CONIC)
    counts = {m: 3**m + 1 for m in range(1, 6)}
    z = smooth_locus_zeta(C, counts, [], 6)
    assert z.coeffs == zeta_from_counts([counts[m] for m in range(1, 6)], 6).coeffs


# -- global assembly ---------------------------------------------------------

def test_global_zeta_line_f2():
    C = curve(2, LINE)
    zeta, factors, counts, scan = global_hilbert_zeta(C, 11)
    assert factors == [] and scan.points == []
    assert zeta.integer_coeffs() == [2 ** (n + 1) - 1 for n in range(11)]


def test_global_zeta_cuspidal_cubic_f3():
    C = curve(3, CUSP)
    zeta, factors, counts, scan = global_hilbert_zeta(C, 6)
    assert len(factors) == 1
    expect = TruncatedSeries([1, 0, 3], 6) * geometric(1, 6) * geometric(3, 6)
    assert zeta.coeffs == expect.coeffs
    assert zeta.integer_coeffs()[:5] == [1, 4, 16, 52, 160]


def test_global_zeta_split_nodal_cubic_f3():
    C = curve(3, NODE_SPLIT)
    zeta, *_ = global_hilbert_zeta(C, 6)
    expect = TruncatedSeries([1, -1, 3], 6) * geometric(1, 6) * geometric(3, 6)
    assert zeta.coeffs == expect.coeffs


@pytest.mark.parametrize(
    "p,terms,expected",
    [
        (3, CUSP, (1, 0, 3)),
        (5, CUSP, (1, 0, 5)),
        (3, NODE_SPLIT, (1, -1, 3)),
        (5, NODE_SPLIT, (1, -1, 5)),
        (3, NODE_NONSPLIT, (1, 1, 3)),
        (3, ELLIPTIC, (1, 0, 3)),
        (5, ELLIPTIC, (1, 2, 5)),
    ],
)
def test_verify_weil_cubics(p, terms, expected):
    report = verify_weil(curve(p, terms))
    assert report.numerator.coeffs == expected
    assert report.all_pass
    assert report.verdicts["hypothesis"]


def test_verify_weil_rational_curves():
    for p in (2, 3, 5):
        for terms in (LINE, CONIC):
            report = verify_weil(curve(p, terms))
            assert report.numerator.coeffs == (1,)
            assert report.all_pass


def test_hypothesis_stamp_char2_cusp():
    report = verify_weil(curve(2, CUSP))
    assert not report.verdicts["hypothesis"]  # char 2 is not > mult 2
    # outside the hypothesis the checks still run; here they happen to pass
    assert report.numerator.coeffs == (1, 0, 2)
    assert report.all_pass


def test_extension_base_field_end_to_end():
    # cuspidal cubic over F_4: the whole pipeline through a degree-2 base field
    F4 = make_field(2, 2)
    C = PlaneCurve(F4, {(0, 2, 1): F4.one(), (3, 0, 0): -F4.one()}, "cusp_f4")
    report = verify_weil(C)
    assert report.q == 4
    assert report.counts == {m: 4**m + 1 for m in range(1, 6)}
    assert report.numerator.coeffs == (1, 0, 4)
    assert report.all_pass
    assert not report.verdicts["hypothesis"]


def test_report_json_schema_contract():
    report = verify_weil(curve(3, CUSP))
    doc = report.to_dict()
    for key in (
        "curve",
        "q",
        "genus",
        "counts",
        "numerator",
        "verdicts",
        "local_factors",
        "timing_ms",
    ):
        assert key in doc
    assert set(doc["verdicts"]) == {
        "shape",
        "degree",
        "functional_equation",
        "integrality",
        "nonnegativity",
        "hypothesis",
    }
    assert doc["numerator"] == ["1", "0", "3"]
    assert all(isinstance(c, str) for c in doc["numerator"])
    assert all(isinstance(c, str) for c in doc["zeta"])
    factor = doc["local_factors"][0]
    assert set(factor["point"]) == {"chart", "coords", "degree", "multiplicity"}


def test_leading_coefficient_is_q_to_g():
    for p, terms in ((3, CUSP), (5, NODE_SPLIT), (3, ELLIPTIC)):
        report = verify_weil(curve(p, terms))
        g = report.genus
        assert report.numerator.coeffs[2 * g] == report.q**g


def test_t1_coefficient_is_point_count():
    for p, terms in ((3, CUSP), (3, NODE_NONSPLIT), (5, ELLIPTIC), (2, LINE)):
        report = verify_weil(curve(p, terms))
        assert int(report.zeta.coeffs[1]) == report.counts[1]


def test_local_global_consistency_rational_curves():
    # rational curve with one singular point: global numerator equals the
    # local numerator of that singularity
    for p, terms, local_terms, orbits in (
        (3, CUSP, A2, [1]),
        (5, CUSP, A2, [1]),
        (3, NODE_SPLIT, A1, [1, 1]),
        (3, NODE_NONSPLIT, NONSPLIT_LOCAL, [2]),
    ):
        report = verify_weil(curve(p, terms))
        ft, F = local(p, local_terms)
        loc = verify_local_theorem(ft, F, orbits, 7)
        assert list(report.numerator.coeffs) == loc.numerator


def test_macdonald_two_path_elliptic():
    for p, expected in ((3, (1, 0, 3)), (5, (1, 2, 5))):
        res = macdonald_two_path_check(curve(p, ELLIPTIC))
        assert res.ok
        assert res.euler.coeffs == expected == res.newton.coeffs


def test_macdonald_rejects_singular():
    with pytest.raises(ValueError):
        macdonald_two_path_check(curve(3, CUSP))


def test_macdonald_attached_to_smooth_reports():
    report = verify_weil(curve(3, ELLIPTIC))
    assert report.macdonald is not None and report.macdonald.ok
    report = verify_weil(curve(3, CUSP))
    assert report.macdonald is None


# -- local theorem ------------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3])
def test_local_theorem_a1(p):
    ft, F = local(p, A1)
    rep = verify_local_theorem(ft, F, [1, 1], 7)
    assert rep.numerator == [1, -1, p]
    assert rep.delta == 1 and rep.all_pass


@pytest.mark.parametrize("p", [2, 3])
def test_local_theorem_a2(p):
    ft, F = local(p, A2)
    rep = verify_local_theorem(ft, F, [1], 7)
    assert rep.numerator == [1, 0, p]
    assert rep.delta == 1 and rep.all_pass


def test_local_theorem_a3_f3():
    ft, F = local(3, A3)
    rep = verify_local_theorem(ft, F, [1, 1], 8)
    assert rep.delta == 2 and rep.all_pass
    assert len(rep.numerator) == 5
    assert rep.numerator[4] == 9 and rep.numerator[3] == 3 * rep.numerator[1]


@pytest.mark.parametrize("p", [2, 3])
def test_local_theorem_a4(p):
    ft, F = local(p, A4)
    rep = verify_local_theorem(ft, F, [1], 8)
    assert rep.delta == 2 and rep.all_pass
    assert rep.numerator[4] == p**2


def test_local_theorem_nonsplit_node():
    ft, F = local(3, NONSPLIT_LOCAL)
    rep = verify_local_theorem(ft, F, [2], 7)
    assert rep.numerator == [1, 1, 3]
    assert rep.delta == 1 and rep.all_pass


def test_local_theorem_cli_example_node_f2():
    ft, F = local(2, A1)
    rep = verify_local_theorem(ft, F, [1, 1], 6)
    assert rep.numerator == [1, -1, 2]


def test_local_theorem_auto_grow():
    # n_max too small to stabilize the tacnode tail: auto-grow must rescue it
    ft, F = local(3, A3)
    rep = verify_local_theorem(ft, F, [1, 1], 5)
    assert rep.conclusive and rep.delta == 2


def test_local_theorem_wrong_branch_count_fails():
    ft, F = local(3, A2)
    rep = verify_local_theorem(ft, F, [1, 1], 7, auto_grow=False)
    assert not rep.verdicts["polynomial"] or not rep.verdicts["functional_equation"]


def test_non_integral_curve_fails_shape_honestly():
    # two lines xy: the assembly still produces the true Hilbert-zeta series
    # of the reducible curve, and the rationality shape check fails
    report = verify_weil(curve(3, {(1, 1, 0): 1}))
    assert not report.verdicts["shape"]
    assert not report.all_pass
    assert report.integrality.result == "fail"


def test_node_away_from_origin():
    # y^2 z = (x-z)^2 z + (x-z)^3 over F_3: split node at (1:0:1)
    terms = {(0, 2, 1): 1, (2, 0, 1): -1, (1, 0, 2): 2, (3, 0, 0): -1}
    C = curve(3, terms)
    scan = singular_closed_points(C)
    assert len(scan.points) == 1
    pt = scan.points[0]
    x, y, z = pt.rep
    assert (x.code, y.code, z.code) == (1, 0, 1) and pt.chart == "z"
    from hilbzeta.curves import local_equation

    f = local_equation(C, pt)
    assert {key: c.code for key, c in f.items()} == {(0, 2): 1, (2, 0): 2, (3, 0): 2}
    report = verify_weil(C)
    assert report.numerator.coeffs == (1, -1, 3)
    assert report.all_pass


def test_singularity_at_infinity():
    # cusp moved to (0:1:0) by swapping y and z: y z^2 - x^3
    C = curve(3, {(0, 1, 2): 1, (3, 0, 0): -1})
    scan = singular_closed_points(C)
    assert len(scan.points) == 1
    pt = scan.points[0]
    assert pt.chart == "y"
    report = verify_weil(C)
    assert report.numerator.coeffs == (1, 0, 3)
    assert report.all_pass


def test_two_singularity_quartic_product_of_local_numerators():
    """Rational quartic with a tacnode and a cusp: the global numerator is
    the product of the two local numerators (the smooth-locus factor of a
    rational curve carries no numerator of its own)."""
    terms = {(0, 2, 2): 1, (3, 1, 0): 1, (4, 0, 0): -1}  # y^2 z^2 + x^3 y - x^4
    C = curve(3, terms, "tacnode_cusp_quartic")
    scan = singular_closed_points(C)
    assert sorted(pt.chart for pt in scan.points) == ["y", "z"]
    report = verify_weil(C)
    assert report.counts == {m: 3**m for m in range(1, 10)}
    assert report.numerator.coeffs == (1, -1, 6, -6, 18, -9, 27)
    assert report.all_pass
    # product structure: (1 + 3t^2) * (1 - t + 3t^2 - 3t^3 + 9t^4)
    cusp = TruncatedSeries([1, 0, 3], 7)
    tac = TruncatedSeries([1, -1, 3, -3, 9], 7)
    assert (cusp * tac).integer_coeffs() == list(report.numerator.coeffs)


def test_hilb2_hilb3_combinatorial_oracle():
    """Independent route to [t^2] and [t^3] of the assembled series.

    A length-n subscheme is a Galois-stable union of punctual pieces:
      [t^2] = C(N1, 2) + D2 + sum_P punct_2(P)
      [t^3] = C(N1, 3) + N1*D2 + D3 + (N1 - 1)*sum_P punct_2(P)
              + sum_P punct_3(P)
    with D_e the number of closed points of degree e, punct_k(P) the number
    of colength-k ideals at a rational P (1 at smooth points).
    """
    from math import comb

    from hilbzeta.curves import count_points

    for p, terms in ((3, CUSP), (3, NODE_SPLIT), (3, NODE_NONSPLIT), (5, CUSP)):
        C = curve(p, terms)
        zeta, factors, counts, scan = global_hilbert_zeta(C, 6)
        n1, n2, n3 = counts[1], counts[2], counts[3]
        d2 = (n2 - n1) // 2
        d3 = (n3 - n1) // 3
        punct2 = punct3 = 0
        for f in factors:
            assert f.point.degree == 1  # rational singular points in these cases
            c = f.series_over_residue.integer_coeffs()
            punct2 += c[2] - 1  # excess over the smooth contribution
            punct3 += c[3] - 1
        sum2 = n1 + punct2  # sum of punct_2 over rational points
        sum3 = n1 + punct3
        hilb2 = comb(n1, 2) + d2 + sum2
        hilb3 = comb(n1, 3) + n1 * d2 + d3 + (n1 - 1) * sum2 + sum3
        assert int(zeta.coeffs[2]) == hilb2
        assert int(zeta.coeffs[3]) == hilb3


def test_local_factor_conjugate_representative_invariance():
    # ideal counts do not depend on which orbit member represents the point
    from hilbzeta.assembly import _local_factor
    from hilbzeta.curves import ClosedPoint

    terms = {(0, 2, 2): 1, (4, 0, 0): -1, (2, 0, 2): 4, (0, 0, 4): -4}
    C = curve(3, terms)
    pt = [p for p in singular_closed_points(C).points if p.degree == 2][0]
    conj = tuple(c.frobenius(1) for c in pt.rep)
    assert conj != pt.rep
    other = ClosedPoint(pt.field, pt.degree, pt.chart, conj, pt.multiplicity)
    a = _local_factor(C, pt, prec=7, workers=1)
    b = _local_factor(C, other, prec=7, workers=1)
    assert a.series_over_residue.coeffs == b.series_over_residue.coeffs


# -- structural invariants -------------------------------------------------------

def test_hasse_weil_band_smooth_corpus():
    # sanity screen, not a proof: |N_m - q^m - 1| <= 2 g sqrt(q)^m
    for p, terms in ((3, CONIC), (5, CONIC), (3, ELLIPTIC), (5, ELLIPTIC)):
        C = curve(p, terms)
        g = C.genus
        for m in (1, 2, 3):
            from hilbzeta.curves import count_points

            dev = abs(count_points(C, m) - p**m - 1)
            assert dev * dev <= 4 * g * g * p**m


def test_singular_points_have_multiplicity_at_least_two():
    for p, terms in ((3, CUSP), (3, NODE_SPLIT), (3, NODE_NONSPLIT), (2, CUSP)):
        for pt in singular_closed_points(curve(p, terms)).points:
            assert pt.multiplicity >= 2


def test_smooth_assembled_equals_counting_zeta():
    from hilbzeta.series import zeta_from_counts

    C = curve(3, ELLIPTIC)
    zeta, factors, counts, _ = global_hilbert_zeta(C, 6)
    assert factors == []
    direct = zeta_from_counts([counts[m] for m in range(1, 6)], 6)
    assert zeta.coeffs == direct.coeffs


def test_local_factor_substitution_degree_two_point():
    # a degree-2 closed point (conjugate node pair): its factor lives in t^2
    from hilbzeta.assembly import _local_factor

    terms = {(0, 2, 2): 1, (4, 0, 0): -1, (2, 0, 2): 4, (0, 0, 4): -4}
    C = curve(3, terms)  # y^2 z^2 = (x^2 - 2 z^2)^2, not integral: factor only
    pt = [p for p in singular_closed_points(C).points if p.degree == 2][0]
    factor = _local_factor(C, pt, prec=9, workers=1)
    # node over the residue field F_9: counts 1, 1, q+1, 2q+1 with q = 9
    assert factor.series_over_residue.integer_coeffs() == [1, 1, 10, 19, 28]
    sub = factor.substituted.integer_coeffs()
    assert sub == [1, 0, 1, 0, 10, 0, 19, 0, 28]
    assert sub[0] == 1
    assert all(c == 0 for i, c in enumerate(sub) if i % 2 == 1)


def test_ideal_counts_never_drop_to_zero():
    from hilbzeta.ideal_enum import count_colength_ideals
    from hilbzeta.local_algebra import build_truncated

    for d in (A1, A2, A3, A4, NONSPLIT_LOCAL):
        ft, F = local(3, d)
        counts = count_colength_ideals(build_truncated(ft, F, 6), 6).counts
        assert all(c >= 1 for c in counts)


# -- branch heuristic ----------------------------------------------------------

@pytest.mark.parametrize(
    "p,terms,expected",
    [
        (3, A1, 2),
        (3, A2, 1),
        (3, A3, 2),
        (3, A4, 1),
        (3, NONSPLIT_LOCAL, 2),
    ],
)
def test_branch_estimate(p, terms, expected):
    ft, F = local(p, terms)
    assert estimate_branch_orbits(ft, F, 8) == expected
