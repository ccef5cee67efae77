import random
from fractions import Fraction

import pytest
from conftest import germs
from hypothesis import given
from hypothesis import strategies as st

from lctcalc import adapt
from lctcalc.adapt import (
    AmbiguousThickRoot,
    Field,
    IterationCapExceeded,
    MonotonicityViolation,
    Normalization,
    RationalityViolation,
    ThickRoot,
    ZeroPolynomialError,
    adapt_step,
    compute_lct,
    is_exact_root,
    lct,
    multiple_part,
    thick_root,
)
from lctcalc.bivar import INFINITE, Axis, BivarPoly, ShearTerm, parse
from lctcalc.newton import MainFace, MainFaceKind, newton_distance, polygon

x, y = BivarPoly.x(), BivarPoly.y()


def c0(text, field=Field.COMPLEX, norm=Normalization.INDEX):
    return compute_lct(parse(text), field, norm).c0


# -- values -------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, field, expected",
    [
        ("y^2 - x^3", Field.COMPLEX, Fraction(5, 3)),
        ("y^2 - x^3", Field.REAL, Fraction(5, 6)),
        ("(y-x)^4", Field.COMPLEX, Fraction(1, 2)),
        ("x^2*y^3", Field.COMPLEX, Fraction(2, 3)),
        ("x^2 + y^2", Field.REAL, 1),
        ("x^2 + y^2", Field.COMPLEX, 2),
        ("(y-x)^2*(y+x)", Field.COMPLEX, 1),
        ("y(y-x^2)^2", Field.COMPLEX, 1),
        ("x", Field.COMPLEX, 2),
        ("x + y^2 + y^3", Field.COMPLEX, 2),
        ("(x - 2y^2)^3", Field.COMPLEX, Fraction(2, 3)),
        ("(y^2 - x^3)^3 + x^11", Field.COMPLEX, Fraction(5, 9)),
        ("(y^2 - x^3)^2", Field.COMPLEX, Fraction(5, 6)),
        ("y^3 - x^7", Field.COMPLEX, Fraction(20, 21)),
    ],
)
def test_exact_values(text, field, expected):
    assert c0(text, field) == expected


def test_lct_normalization():
    assert c0("y^2 - x^3", Field.COMPLEX, Normalization.LCT) == Fraction(5, 6)
    assert c0("y^2 - x^3", Field.REAL, Normalization.LCT) == Fraction(5, 6)
    assert lct("(y-x)^4") == Fraction(1, 2)


def test_nonvanishing_and_zero():
    res = compute_lct(parse("1 + x*y"))
    assert res.c0 is INFINITE and res.order == 0
    with pytest.raises(ZeroPolynomialError):
        compute_lct(BivarPoly())
    with pytest.raises(ValueError):
        compute_lct(BivarPoly())


# -- thick roots ----------------------------------------------------------------


def _thick(text):
    f = parse(text)
    P = polygon(f)
    return thick_root(f, P, newton_distance(P))


def test_thick_root_examples():
    r = _thick("(y-x)^4")
    assert (r.b, r.multiplicity, r.axis, r.exponent) == (1, 4, Axis.Y, 1)
    assert _thick("y^2 - x^3") is None
    assert _thick("y(y-x^2)^2") is None  # multiplicity equals t_star
    assert _thick("x^2 y^3") is None


def test_thick_root_on_x_axis():
    r = _thick("(x - 2y^2)^3")
    assert (r.b, r.multiplicity, r.axis, r.exponent) == (2, 3, Axis.X, 2)


def test_thick_root_rejects_irrational_heavy_class():
    f = parse("(y^2 - 2x^2)^3")
    P = polygon(f)
    fake = MainFace(MainFaceKind.COMPACT_FACE, Fraction(1), face=P.faces[0])
    with pytest.raises(RationalityViolation):
        thick_root(f, P, fake)


def test_thick_root_rejects_two_heavy_classes():
    f = parse("(y-x)^3 (y+x)^4")
    P = polygon(f)
    fake = MainFace(MainFaceKind.COMPACT_FACE, Fraction(2), face=P.faces[0])
    with pytest.raises(AmbiguousThickRoot):
        thick_root(f, P, fake)


@pytest.mark.parametrize(
    "text, expected",
    [("(y-x)^4", "y^4"), ("(y-x^2)^3", "y^3"), ("(y-x)^2*(y+x)", "y^3 + 2x y^2")],
)
def test_adapt_step_examples(text, expected):
    f = parse(text)
    P = polygon(f)
    r = thick_root(f, P, newton_distance(P))
    assert adapt_step(f, r) == parse(expected)


def test_adapt_step_checks_monotonicity():
    f = parse("(y-x)^4")
    P = polygon(f)
    wrong = ThickRoot(P.faces[0], Fraction(-1), 4, Axis.Y, 1)
    with pytest.raises(MonotonicityViolation):
        adapt_step(f, wrong)


def test_iteration_cap(monkeypatch):
    monkeypatch.setattr(adapt, "iteration_cap", lambda f: 1)
    with pytest.raises(IterationCapExceeded):
        compute_lct(parse("(y - x - x^2)^3 + x^7"))


# -- results and traces -------------------------------------------------------


def test_result_fields_for_linear_shear():
    res = compute_lct(parse("(y-x)^4"))
    assert res.coordinate_change == (ShearTerm(Axis.Y, 1, 1),)
    assert res.delta_inv_final == 4
    assert [r.t_star for r in res.trace] == [2, 4]
    assert res.trace[-1].adapted and not res.trace[0].adapted


def test_result_fields_two_lines_and_double_line():
    res = compute_lct(parse("(y-x)^2*(y+x)"))
    assert len(res.coordinate_change) == 1
    assert res.trace[-1].main_face is MainFaceKind.HORIZONTAL_RAY
    assert res.delta_inv_final == 2


def test_x_axis_change_reported_in_original_variables():
    res = compute_lct(parse("(x - 2y^2)^3 + y^7"))
    assert res.axis is Axis.X
    assert res.coordinate_change[0] == ShearTerm(Axis.X, 2, 2)
    assert res.trace[0].transposed is False and res.trace[-1].transposed is True


def test_c0_formula_matches_final_t_star():
    for text in ["y^2 - x^3", "(y-x)^2*(y+x)", "(y^2-x^3)^3 + x^11", "y^5 - x^2 y + x^7"]:
        res = compute_lct(parse(text))
        assert res.c0 == 2 / res.delta_inv_final
        real = compute_lct(parse(text), Field.REAL)
        assert real.c0 == 1 / res.delta_inv_final


def _apply(f, change):
    g = f
    if change and change[0].axis is Axis.X:
        g = g.transpose()
    for t in change:
        g = g.shear(ShearTerm(Axis.Y, t.exponent, t.coefficient))
    return g


@pytest.mark.parametrize(
    "text", ["(y-x)^4", "(y - x - x^2)^3 + x^7", "(x - 2y^2)^3 + y^7", "(y^2-x^3)^3 + x^11"]
)
def test_reported_change_adapts(text):
    f = parse(text)
    res = compute_lct(f)
    g = _apply(f, res.coordinate_change)
    assert newton_distance(polygon(g)).t_star == res.delta_inv_final


# -- exact m-fold roots that are infinite series ------------------------------


@pytest.mark.parametrize(
    "text, m, expected",
    [
        ("(y - x + y^2)^2", 2, 1),
        ("y - x + y^2", 1, 2),
        ("(y - x - x^2 - x^3)^3 (y + x)", 3, Fraction(2, 3)),
        ("(x - y + x*y)^3", 3, Fraction(2, 3)),
        ("(y - x + y^3)^4 (y + 2x)", 4, Fraction(1, 2)),
    ],
)
def test_infinite_series_roots_reach_their_limit(text, m, expected):
    res = compute_lct(parse(text))
    assert res.c0 == expected
    assert res.limit_multiplicity == m
    # reported shears are the truncation; t_star there is still below m
    g = _apply(parse(text), res.coordinate_change)
    assert newton_distance(polygon(g)).t_star <= m


def test_multiple_part_and_exact_root():
    f = parse("(y - x + y^2)^2 (y + x)")
    assert multiple_part(f, 2) == parse("y - x + y^2") or multiple_part(f, 2) == -parse("y - x + y^2")
    r = _thick("(y-x)^2 (y-x+x^3)")
    assert r is not None and r.multiplicity == 3
    assert not is_exact_root(parse("(y-x)^2 (y-x+x^3)"), r)


def test_near_exact_root_runs_to_the_split():
    # after y -> y + x: y^2 (y + x^3), weights (1, 3)
    assert c0("(y-x)^2 (y-x+x^3)") == Fraction(8, 9)


# -- properties -----------------------------------------------------------------


def _check_trace(res):
    ts = [r.t_star for r in res.trace]
    assert all(a < b for a, b in zip(ts, ts[1:]))
    axes = {t.axis for t in res.coordinate_change}
    assert len(axes) <= 1
    ks = [t.exponent for t in res.coordinate_change]
    assert all(a < b for a, b in zip(ks, ks[1:]))


@given(germs(max_deg=6, max_terms=5))
def test_trace_invariants_and_order_bound(f):
    res = compute_lct(f)
    _check_trace(res)
    assert res.c0 <= Fraction(4, res.order)
    real = compute_lct(f, Field.REAL)
    assert real.c0 <= Fraction(2, res.order)
    assert real.c0 == res.c0 / 2


@given(germs(max_deg=5, max_terms=4), st.integers(min_value=2, max_value=4))
def test_power_law(f, k):
    assert compute_lct(f**k).c0 == compute_lct(f).c0 / k


@given(germs(max_deg=6, max_terms=5), st.fractions(min_value=-7, max_value=7).filter(bool))
def test_transpose_and_scale_invariance(f, lam):
    c = compute_lct(f).c0
    assert compute_lct(f.transpose()).c0 == c
    assert compute_lct(f.scale(lam)).c0 == c


@given(
    germs(max_deg=5, max_terms=4),
    st.lists(st.integers(min_value=-3, max_value=3), min_size=1, max_size=3),
    st.booleans(),
)
def test_shear_invariance(f, coeffs, on_x):
    if not any(coeffs):
        return
    if on_x:
        g = f.substitute(x + BivarPoly({(0, k + 1): c for k, c in enumerate(coeffs)}), y)
    else:
        g = f.substitute(x, y + BivarPoly({(k + 1, 0): c for k, c in enumerate(coeffs)}))
    res = compute_lct(g)
    _check_trace(res)
    assert res.c0 == compute_lct(f).c0


@given(
    germs(max_deg=5, max_terms=4),
    st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=3)] * 4),
)
def test_linear_invariance(f, m):
    a, b, c, d = m
    if a * d - b * c == 0:
        return
    assert compute_lct(f.compose_linear(a, b, c, d)).c0 == compute_lct(f).c0


# -- independent oracle: weighted-homogeneous curves --------------------------


def weighted_homogeneous_c0(alpha, beta, a, b, mults):
    """``x^a y^b prod (y^alpha - c_j x^beta)^{m_j}`` with weights
    ``(alpha, beta)`` coprime: ``c0 = 2 min((alpha+beta)/d, 1/a, 1/b, 1/m_j)``."""
    d = a * alpha + b * beta + alpha * beta * sum(mults)
    cands = [Fraction(alpha + beta, d)]
    cands += [Fraction(1, k) for k in [a, b, *mults] if k > 0]
    return 2 * min(cands)


@st.composite
def weighted_homogeneous(draw):
    alpha, beta = draw(
        st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 4), (2, 5)])
    )
    a = draw(st.integers(min_value=0, max_value=3))
    b = draw(st.integers(min_value=0, max_value=3))
    n = draw(st.integers(min_value=0 if a + b else 1, max_value=3))
    cs = draw(st.lists(st.integers(min_value=-4, max_value=4).filter(bool), min_size=n, max_size=n, unique=True))
    mults = draw(st.lists(st.integers(min_value=1, max_value=3), min_size=n, max_size=n))
    f = x**a * y**b
    for cj, mj in zip(cs, mults):
        f = f * (y**alpha - BivarPoly.monomial(beta, 0, cj)) ** mj
    return f, weighted_homogeneous_c0(alpha, beta, a, b, mults)


@given(weighted_homogeneous())
def test_weighted_homogeneous_oracle(case):
    f, expected = case
    assert compute_lct(f).c0 == expected


@given(weighted_homogeneous(), st.integers(min_value=0, max_value=10**6))
def test_weighted_homogeneous_oracle_in_disguise(case, seed):
    f, expected = case
    if f.degree() > 9:
        return
    rng = random.Random(seed)
    while True:
        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
        if a * d - b * c:
            break
    g = f.compose_linear(a, b, c, d)
    g = g.substitute(x, y + BivarPoly({(2, 0): rng.randint(-2, 2), (3, 0): rng.randint(-1, 1)}))
    res = compute_lct(g)
    _check_trace(res)
    assert res.c0 == expected
