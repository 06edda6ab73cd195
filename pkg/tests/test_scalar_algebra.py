"""Exact scalar algebra: normalization, evaluation, solving, s-extension."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nkt.scalar_algebra import (
    A,
    A0,
    A1,
    C,
    DivisionByZero,
    KAPPA,
    N,
    NonlinearInVariable,
    RationalExpr,
    S,
    UnboundIndeterminate,
    ZeroDenominator,
    eval_at,
    expr,
    normalize,
    parse_expr,
    solve_linear,
    sqrt_expr,
    substitute,
)

# ---------------------------------------------------------------------------
# pinned examples


def test_annihilation_by_zero():
    assert ((2 * N - 2 + KAPPA) * 0).is_zero()


def test_factor_cancellation():
    assert (N ** 2 - 1) / (N - 1) == N + 1


def test_s_square_reduction():
    assert (S * S - N).is_zero()
    assert S ** 3 == N * S


def test_zero_denominator_raises():
    with pytest.raises(ZeroDenominator):
        RationalExpr((N - N).num, (N - N).num)
    with pytest.raises(DivisionByZero):
        N / (S * S - N)


def test_eval_scalar_curvature_value():
    value = eval_at(2 * N * (2 * N - 2 + KAPPA), {"n": 1, "kappa": Fraction(3, 4)})
    assert value == Fraction(3, 2)


def test_eval_edge_cases():
    assert eval_at((N - 1) / N, {"n": 1}) == 0
    with pytest.raises(DivisionByZero):
        eval_at(1 / (2 * N - 1), {"n": Fraction(1, 2)})
    with pytest.raises(UnboundIndeterminate):
        eval_at(N + KAPPA, {"n": 2})


def test_solve_linear_kinds():
    zero = expr(0)
    assert solve_linear(zero, "kappa").is_identity
    assert solve_linear(N + 1, "kappa").kind == "no_solution"
    with pytest.raises(NonlinearInVariable):
        solve_linear(KAPPA ** 2 - 1, "kappa")


def test_solve_linear_concircular_and_conharmonic():
    # the two flagship roots of the flatness constraint
    concircular = KAPPA - (2 * N - 2 + KAPPA) / (2 * N + 1)
    sol = solve_linear(concircular, "kappa")
    assert sol.is_unique and sol.root == (N - 1) / N

    conharmonic = -(2 * N - 2 + KAPPA) / (2 * N - 1)
    sol = solve_linear(conharmonic, "kappa")
    assert sol.is_unique and sol.root == 2 - 2 * N


def test_side_condition_reported():
    e = (A0 + (2 * N - 1) * A1) * (2 * N * KAPPA - 2 * N + 2)
    sol = solve_linear(e, "kappa")
    assert sol.is_unique
    assert sol.root == (N - 1) / N
    assert sol.side_condition == 2 * N * (A0 + (2 * N - 1) * A1)


def test_parse_render_round_trip():
    samples = [
        (2 * N * KAPPA - 2 * N + 2) / (2 * N + 1),
        1 / (2 * N),
        (A0 + 4 * N * A1) / (A1 * (2 * N + 1)),
        S / N,
        -KAPPA,
        expr(Fraction(-3, 7)),
    ]
    for e in samples:
        assert parse_expr(str(e)) == e


def test_unknown_indeterminate_rejected():
    from nkt.scalar_algebra import ExprSyntaxError

    with pytest.raises(ExprSyntaxError):
        parse_expr("x + 1")


def test_substitute_scalar_curvature_symbol():
    from nkt.scalar_algebra import R

    f = (KAPPA + R) / (N + 1)
    got = substitute(f, "r", 2 * N * (2 * N - 2 + KAPPA))
    assert got == (KAPPA + 2 * N * (2 * N - 2 + KAPPA)) / (N + 1)


def test_division_in_s_extension():
    # (1 + c) / |1 - c| with c = (s-1)^2/(n-1) collapses to s
    c = (S - 1) ** 2 / (N - 1)
    assert (1 + c) / ((2 * S - 2) / (N - 1)) == S
    assert 1 / (S / N) == S


def test_sqrt_expr_patterns():
    assert sqrt_expr(expr(Fraction(1, 4))) == expr(Fraction(1, 2))
    assert sqrt_expr(1 / N) == S / N
    assert sqrt_expr(expr(2)) is None
    root = sqrt_expr((1 - (S - 1) ** 2 / (N - 1)) ** 2)
    assert root is not None and root ** 2 == (1 - (S - 1) ** 2 / (N - 1)) ** 2


# ---------------------------------------------------------------------------
# randomized properties

_VAR_POOL = (N, KAPPA, A, C, S)


@st.composite
def polys(draw):
    terms = draw(st.integers(min_value=1, max_value=4))
    value = expr(0)
    for _ in range(terms):
        coeff = Fraction(
            draw(st.integers(min_value=-5, max_value=5)),
            draw(st.integers(min_value=1, max_value=3)),
        )
        term = expr(coeff)
        for _ in range(draw(st.integers(min_value=0, max_value=2))):
            term = term * draw(st.sampled_from(_VAR_POOL))
        value = value + term
    return value


@st.composite
def exprs(draw):
    num = draw(polys())
    den = draw(polys().filter(lambda p: not p.is_zero()))
    return num / den


@settings(max_examples=60, deadline=None)
@given(exprs())
def test_normalize_idempotent(e):
    assert normalize(normalize(e)) == normalize(e) == e


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_equality_of_equal_constructions(a, b, c):
    # distributivity-built pairs must land on the same canonical form
    assert (a + b) * c == a * c + b * c


def _random_point(rng):
    k = rng.randint(1, 5)
    return {
        "n": Fraction(k * k),
        "kappa": Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
        "a": Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
        "c": Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
        "s": Fraction(k),  # consistent with s^2 = n
    }


def test_ring_laws_at_1000_points():
    rng = random.Random(20260809)
    pairs = []
    for _ in range(10):
        e1 = sum((expr(random.Random(rng.random()).randint(-3, 3)) * v for v in _VAR_POOL), expr(rng.randint(-3, 3)))
        e2 = (N + rng.randint(-2, 2)) * KAPPA + rng.randint(-3, 3) * S
        pairs.append((e1, e2))
    checked = 0
    for e1, e2 in pairs:
        prod = e1 * e2
        total = e1 + e2
        for _ in range(100):
            point = _random_point(rng)
            assert eval_at(prod, point) == eval_at(e1, point) * eval_at(e2, point)
            assert eval_at(total, point) == eval_at(e1, point) + eval_at(e2, point)
            checked += 1
    assert checked == 1000


@settings(max_examples=40, deadline=None)
@given(exprs(), st.integers(min_value=1, max_value=6))
def test_s_reduction_sound_under_consistent_bindings(e, k):
    # binding n = k^2 and s = k is a ring homomorphism, so reduction s^2 -> n
    # must be invisible to evaluation
    point = {"n": Fraction(k * k), "s": Fraction(k), "kappa": Fraction(2),
             "a": Fraction(3), "c": Fraction(5)}
    try:
        direct = eval_at(e * e - e, point)
    except DivisionByZero:
        return
    assert direct == eval_at(e, point) ** 2 - eval_at(e, point)


@settings(max_examples=50, deadline=None)
@given(polys(), polys())
def test_solve_linear_round_trip(a, b):
    # a*kappa + b with kappa-free a, b: substituting the root back gives 0
    if "kappa" in (a.variables() | b.variables()):
        return
    e = a * KAPPA + b
    sol = solve_linear(e, "kappa")
    if sol.is_unique:
        assert substitute(e, "kappa", sol.root).is_zero()
        # same zero set: the reported condition is the canonical numerator's
        # leading coefficient, a constant multiple of a
        assert (sol.side_condition / a).is_constant()
    elif sol.kind == "no_solution":
        assert a.is_zero() and not b.is_zero()
    else:
        assert a.is_zero() and b.is_zero()


@settings(max_examples=40, deadline=None)
@given(exprs(), exprs())
def test_equality_sound_for_evaluation(e1, e2):
    if e1 != e2:
        return
    rng = random.Random(7)
    for _ in range(5):
        point = _random_point(rng)
        try:
            assert eval_at(e1, point) == eval_at(e2, point)
        except DivisionByZero:
            continue
