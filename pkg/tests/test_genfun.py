import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artinstat.arith import decompose, discriminant, factorint
from artinstat.errors import DomainError, PoleAtOrigin, PoleAtPoint
from artinstat.genfun import (
    Poly,
    RationalFunction,
    StatisticKind,
    Z,
    classical_artin_factor,
    correction_factors,
    derivative_at,
    euler_factor,
    evaluate,
    taylor_coefficients,
)
from artinstat.genfun.poly import poly_gcd

from oracles import default_caps, default_support, euler_local, truncated_series

OQ, BO, OD = StatisticKind.OMEGA_QUOTIENT, StatisticKind.BIG_OMEGA_QUOTIENT, StatisticKind.OMEGA_DIFFERENCE


def rf(num, den=(1,)):
    return RationalFunction(Poly(num), Poly(den))


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(fracs, min_size=0, max_size=5).map(Poly)


# --- polynomial layer -------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(polys, polys)
def test_divmod_reconstructs(p, q):
    if q.is_zero():
        return
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@settings(max_examples=200, deadline=None)
@given(polys, polys, polys)
def test_gcd_divides(p, q, r):
    g = poly_gcd(p * r, q * r)
    if g.is_zero():
        return
    assert ((p * r) % g).is_zero() and ((q * r) % g).is_zero()
    if not r.is_zero():
        assert (g % r.monic()).is_zero()


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys, polys, fracs)
def test_rational_function_field_ops(a, b, c, d, x):
    if b.is_zero() or d.is_zero():
        return
    f, g = RationalFunction(a, b), RationalFunction(c, d)
    if b(x) == 0 or d(x) == 0:
        return
    assert (f + g).evaluate(x) == f.evaluate(x) + g.evaluate(x)
    assert (f * g).evaluate(x) == f.evaluate(x) * g.evaluate(x)
    assert (f - g).evaluate(x) == f.evaluate(x) - g.evaluate(x)
    # canonical form is idempotent and unique
    h = f * g
    again = RationalFunction(h.num, h.den)
    assert again.num == h.num and again.den == h.den
    assert h.den.lead() == 1
    assert poly_gcd(h.num, h.den).degree <= 0


def test_canonical_cancels_common_factor():
    f = rf([0, 2]) * rf([-2, 1]) / rf([1, 1]) / rf([-2, 1])
    assert f == rf([0, 2], [1, 1])
    assert f.den.c == (1, 1)


def test_taylor_examples():
    assert taylor_coefficients(rf([0, 2], [1, 1]), 3) == [0, 2, -2, 2]
    assert taylor_coefficients(RationalFunction.const(1), 2) == [1, 0, 0]
    assert taylor_coefficients(rf([20, 18, 2], [19, 20, 1]), 0) == [Fraction(20, 19)]


def test_taylor_pole_at_origin():
    with pytest.raises(PoleAtOrigin):
        taylor_coefficients(rf([1], [0, 1]), 3)


@settings(max_examples=100, deadline=None)
@given(polys, polys, st.integers(0, 8))
def test_taylor_times_denominator(num, den, N):
    if den.is_zero() or den[0] == 0:
        return
    f = RationalFunction(num, den)
    c = Poly(f.taylor(N))
    prod = c * f.den
    for k in range(N + 1):
        assert prod[k] == f.num[k]


def test_derivative_examples():
    assert derivative_at(rf([0, 2], [1, 1]), 1) == Fraction(1, 2)
    assert derivative_at(RationalFunction.const(1), 1) == 0
    assert derivative_at(rf([5, 7], [8, 4]), 1) == Fraction(1, 4)
    with pytest.raises(PoleAtPoint):
        derivative_at(rf([1], [1, 1]), -1)


def test_evaluate_examples():
    assert evaluate(rf([0, 2], [1, 1]), 1) == 1
    assert evaluate(rf([20, 18, 2], [19, 20, 1]), 0) == Fraction(20, 19)
    f = rf([-6, 1, 1], [7, 0, 1])  # (z-2)(z+3) / (z^2+7)
    assert evaluate(f, 2) == 0 and evaluate(f, -3) == 0
    with pytest.raises(PoleAtPoint):
        evaluate(rf([1], [-1, 1]), 1)


def test_to_str():
    assert rf([5, 7], [8, 4]).to_str() == "(7*z + 5)/(4*z + 8)"
    assert RationalFunction.const(Fraction(3, 2)).to_str() == "3/2"


# --- correction factors -----------------------------------------------------

CLOSED_FORMS = {
    (3, OQ): "1",
    (4, OQ): "(2*z)/(z + 1)",
    (5, OQ): "(2*z^2 + 18*z + 20)/(z^2 + 20*z + 19)",
    (3, BO): "(3*z^3 - 4*z^2 + 37*z + 60)/(2*z^2 + 34*z + 60)",
    (4, BO): "(z^3 - z^2 + 12*z)/(4*z + 8)",
    (5, BO): "(11*z^2 + 77*z + 200)/(z^2 + 97*z + 190)",
    (3, OD): "(z^2 + 20*z + 27)/(2*z^2 + 18*z + 28)",
    (4, OD): "(7*z + 5)/(4*z + 8)",
    (5, OD): "(2*z^2 + 23*z + 47)/(z^2 + 25*z + 46)",
}


def _parse(expr: str) -> RationalFunction:
    return eval(expr.replace("^", "**"), {"z": Z})


@pytest.mark.parametrize("key", list(CLOSED_FORMS))
def test_closed_form_prefactors(key):
    a, stat = key
    combined = correction_factors(a, stat).combined
    assert combined == _parse(CLOSED_FORMS[key])


def test_closed_form_text():
    # the a=3 big-Omega prefactor shares a factor 2 between numerator and denominator
    assert correction_factors(5, OQ).combined.to_str() == "(2*z^2 + 18*z + 20)/(z^2 + 20*z + 19)"
    assert correction_factors(4, OD).combined.to_str() == "(7*z + 5)/(4*z + 8)"


NORMALISATION_BASES = [2, -2, 3, -3, 4, -4, 5, 8, 9, -8, 12, 25, -27, 36]


@pytest.mark.parametrize("a", NORMALISATION_BASES)
@pytest.mark.parametrize("stat", [OQ, BO, OD])
def test_normalisation_at_one(a, stat):
    cf = correction_factors(a, stat)
    assert evaluate(cf.F, 1) == 1 and evaluate(cf.H, 1) == 1


@pytest.mark.parametrize("a", NORMALISATION_BASES + [Fraction(9, 4), Fraction(-1, 8), 72, -108])
def test_z_zero_recovers_artin(a):
    target = evaluate(classical_artin_factor(a), 0)
    assert evaluate(correction_factors(a, OQ).combined, 0) == target
    assert evaluate(correction_factors(a, BO).combined, 0) == target


def test_classical_examples():
    assert classical_artin_factor(3) == 1
    assert classical_artin_factor(5) == Fraction(20, 19)
    assert classical_artin_factor(4) == 0
    assert classical_artin_factor(9) == 0


@pytest.mark.parametrize("a", [4, 9, 36, 64, Fraction(9, 4), 3**6])
def test_squares_have_no_constant_term(a):
    for stat in (OQ, BO):
        assert taylor_coefficients(correction_factors(a, stat).combined, 0) == [0]


def test_excluded_bases():
    for a in (0, 1, -1):
        with pytest.raises(DomainError):
            correction_factors(a, OQ)


# --- the h = 1 closed forms ---------------------------------------------------


def _h1_forms(a):
    """Closed forms for bases that are not perfect powers, written independently."""
    base = decompose(a)
    assert base.h == 1
    s, b0 = base.sign, base.b0
    primes = sorted(set(factorint(2 * b0)))
    w = len(primes)
    d = discriminant(a)
    if d % 4 == 1:
        oq = 1 + math.prod(((Z - 1) / (Z + q * q - q - 1) for q in primes), start=RationalFunction.const(1))
    else:
        oq = RationalFunction.const(1)
    if (s * b0) % 4 == 1:
        dO, dD = RationalFunction.const(1), Fraction(1)
    elif (s * b0) % 4 == 3:
        dO, dD = Z / 4, Fraction(-1, 2)
    else:
        dO, dD = Z * Z / 16, Fraction(-1, 8)
    bo = 1 + dO * (Z - 1) ** w * math.prod((q / (Z + q**3 - q**2 - q) for q in primes), start=RationalFunction.const(1))
    od = 1 + dD * (Z - 1) ** w * math.prod((1 / (q * q + Z - 2) for q in primes), start=RationalFunction.const(1))
    return {OQ: oq, BO: bo, OD: od}


H1_BASES = [a for a in range(-150, 151) if abs(a) > 1 and decompose(a).h == 1]


@pytest.mark.parametrize("a", H1_BASES)
def test_h1_reconciliation(a):
    forms = _h1_forms(a)
    for stat in (OQ, BO, OD):
        cf = correction_factors(a, stat)
        assert cf.H == 1
        assert cf.combined == forms[stat], (a, stat)


# --- brute force over Kummer degrees -----------------------------------------

ORACLE_BASES = [2, 3, 5, 12, -2, -3, -5, 4, 8, -8, 9, 16, -4, -27, 36, -64, Fraction(9, 4), 7, -7]


@pytest.mark.parametrize("a", ORACLE_BASES)
def test_factors_match_degree_sums(a):
    support = default_support(a)
    caps = default_caps(a, support)
    for stat in (OQ, BO, OD):
        comb = correction_factors(a, stat).combined
        for z in (0.5, -0.35 + 0.2j):
            lhs = truncated_series(a, stat.value, z, support, caps)
            num = sum(complex(c) * z**k for k, c in enumerate(comb.num.c))
            den = sum(complex(c) * z**k for k, c in enumerate(comb.den.c))
            rhs = num / den * math.prod(euler_local(stat.value, q, z) for q in support)
            assert abs(lhs - rhs) < 1e-10, (a, stat, z)


def _case_key(a):
    b = decompose(a)
    return (b.sign, b.b0 % 4, min(b.nu2_h, 2))


def test_case_tables_reachable_and_consistent():
    """Every tau / F case reachable with |a| <= 100 is checked once against the brute force."""
    seen = {}
    for a in range(-100, 101):
        if abs(a) <= 1:
            continue
        for stat in (OQ, BO, OD):
            cf = correction_factors(a, stat)
            assert evaluate(cf.F, 1) == 1 and evaluate(cf.H, 1) == 1
        seen.setdefault(_case_key(a), a)
    for sign in (1, -1):
        # b0 = 3 mod 4 with h odd, b0 = 2 mod 4 with nu2(h) in {0, 1}, and the generic case
        assert (sign, 3, 0) in seen and (sign, 2, 0) in seen and (sign, 2, 1) in seen
        assert (sign, 1, 0) in seen and (sign, 1, 1) in seen and (sign, 2, 2) in seen
    for key, a in sorted(seen.items()):
        support = default_support(a)
        caps = default_caps(a, support, bits=36)
        for stat in (OQ, BO, OD):
            comb = correction_factors(a, stat).combined
            z = 0.4
            lhs = truncated_series(a, stat.value, z, support, caps)
            rhs = float(comb.evaluate(Fraction(2, 5))) * math.prod(euler_local(stat.value, q, z) for q in support)
            assert abs(lhs - rhs) < 1e-8, (key, a, stat)


def test_euler_factor_matches_local():
    for stat in (OQ, BO, OD):
        for q in (2, 3, 5, 7):
            assert float(euler_factor(stat, q).evaluate(Fraction(1, 3))) == pytest.approx(
                euler_local(stat.value, q, 1 / 3), rel=1e-14
            )


def test_closed_forms_fast():
    t0 = time.perf_counter()
    for (a, stat) in CLOSED_FORMS:
        correction_factors(a, stat)
    assert time.perf_counter() - t0 < 1.0
