from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from approx import (
    InconclusiveError,
    PhiCertificate,
    as_periodic_cf,
    certified_mu_sup,
    fractional_part,
    iter_mu,
    markoff_constant,
    markoff_value,
    mu_n,
    phi_certified,
    q_distance,
    verify_markoff_roots,
)
from contfrac import ContinuedFraction as CF, cf_expand, cf_value
from exact import DomainError, QuadraticIrrational as QI, qi_sqrt
from markoff import form_for, form_roots, markoff_numbers
from tests.strategies import unit_interval_cfs

SQRT2 = qi_sqrt(2)
SQRT5 = qi_sqrt(5)
ALPHA_5 = CF((0,), (2, 1, 1, 2))
FIRST_TWELVE = (1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433, 610)


def test_q_distance_examples():
    assert q_distance((SQRT5 - 1) / 2, 1) == (3 - SQRT5) / 2
    assert q_distance(SQRT2 - 1, 2) == 6 - 4 * SQRT2
    assert q_distance(Fraction(1, 3), 3) == 0
    with pytest.raises(DomainError):
        q_distance(SQRT2, 0)


def test_mu_examples():
    assert mu_n(CF((0,), (1,)), 1) == (3 + SQRT5) / 2
    assert mu_n(CF((0, 2), (1,)), 1) == (2 + SQRT5) / 2
    assert mu_n(CF((0,), (3,)), 1) > 3
    with pytest.raises(DomainError):
        mu_n(ALPHA_5, 0)
    first = list(islice(iter_mu(ALPHA_5), 3))
    assert [(n, q) for n, q, _ in first] == [(1, 2), (2, 3), (3, 5)]


def test_helpers():
    assert fractional_part(CF((3, 2), (1,))) == CF((0, 2), (1,))
    assert as_periodic_cf(SQRT2) == CF((1,), (2,))
    with pytest.raises(DomainError):
        as_periodic_cf(Fraction(3, 7))


def test_supremum_of_the_five_root():
    sup = certified_mu_sup(ALPHA_5)
    assert sup.value.reciprocal() == QI(75, -5, 2, 221)
    assert sup.attained
    assert 5 in sup.argmax_q


def test_supremum_after_a_leading_two():
    sup = certified_mu_sup(CF((0, 2), (1,)))
    assert sup.value == (7 + 3 * SQRT5) / 6
    assert sup.argmax == (2,)
    assert sup.argmax_q == (3,)


def test_supremum_budget_is_reported():
    with pytest.raises(InconclusiveError):
        certified_mu_sup(ALPHA_5, qmax=1)


@settings(max_examples=60, deadline=None)
@given(unit_interval_cfs())
def test_supremum_bounds_every_term(cf):
    sup = certified_mu_sup(cf)
    values = [mu for _, _, mu in islice(iter_mu(cf), 40)]
    assert all(mu <= sup.value for mu in values)
    if sup.attained:
        assert mu_n(cf, sup.argmax[0]) == sup.value
    else:
        assert all(mu < sup.value for mu in values)
        assert sup.limit_classes


@settings(max_examples=60, deadline=None)
@given(unit_interval_cfs())
def test_convergent_distances_are_reciprocal_mu(cf):
    x = cf_value(cf)
    for n, q, mu in islice(iter_mu(cf), 12):
        if q * mu >= 2:
            assert q_distance(x, q) == mu.reciprocal()


@pytest.mark.parametrize(
    "cf, phi, argmin",
    [
        (CF((0,), (1,)), (3 - SQRT5) / 2, 1),
        (CF((0,), (2,)), 6 - 4 * SQRT2, 2),
        (ALPHA_5, QI(75, -5, 2, 221), 5),
        (CF((0,), (3,)), QI(33, -9, 2, 13), 3),
    ],
    ids=str,
)
def test_phi_examples(cf, phi, argmin):
    cert = phi_certified(cf, 1000)
    assert isinstance(cert, PhiCertificate)
    assert cert.phi == phi
    assert cert.argmin_q == argmin
    assert cert.unique
    assert cert.status == "certified"
    assert cert.checked_upto >= 1000


def test_phi_of_the_five_root_with_full_budget():
    cert = phi_certified(ALPHA_5, 10_000)
    assert cert.phi == QI(75, -5, 2, 221)
    assert cert.argmins == (5,)
    assert cert.phi > Fraction(1, 3)


def test_phi_ignores_the_integer_part():
    assert phi_certified(CF((7,), (2, 1, 1, 2)), 500).phi == QI(75, -5, 2, 221)


def test_phi_is_inconclusive_on_a_tiny_budget():
    with pytest.raises(InconclusiveError) as info:
        phi_certified(ALPHA_5, 3)
    partial = info.value.partial
    assert partial is not None
    assert partial.status == "inconclusive"
    assert partial.argmin_q is None


def test_phi_rejects_bad_input():
    with pytest.raises(DomainError):
        phi_certified(ALPHA_5, 0)
    with pytest.raises(DomainError):
        phi_certified(CF((0, 3)), 100)


@settings(max_examples=40, deadline=None)
@given(unit_interval_cfs())
def test_phi_is_the_smallest_scaled_distance(cf):
    cert = phi_certified(cf, 10**9, brute_force_cap=60)
    x = cf_value(cf)
    distances = [q_distance(x, q) for q in range(1, 61)]
    assert cert.phi <= min(distances)
    if cert.argmin_q is not None:
        assert q_distance(x, cert.argmin_q) == cert.phi
    assert cert.phi <= markoff_value(cf)


def test_markoff_value_examples():
    assert markoff_value(CF((0,), (2,))) == QI(0, 1, 4, 2)
    assert markoff_value(CF((0,), (3,))) == QI(0, 1, 13, 13)
    assert markoff_value(CF((0,), (3,))) < Fraction(1, 3)
    assert markoff_value(CF((0,), (1,))) == SQRT5 / 5


@pytest.mark.parametrize("m", FIRST_TWELVE)
def test_markoff_value_of_alpha_roots(m):
    alpha = form_roots(form_for(m))[0]
    value = markoff_value(alpha)
    assert value == m / qi_sqrt(9 * m * m - 4)
    assert value > Fraction(1, 3)


@pytest.mark.parametrize("m", [1, 2, 5, 13, 29, 34, 89])
def test_markoff_constant_closed_form(m):
    constant = markoff_constant(m)
    assert constant == 2 / (3 + qi_sqrt(9 - Fraction(4, m * m)))
    assert constant > Fraction(1, 3)
    with pytest.raises(DomainError):
        markoff_constant(0)


@pytest.mark.parametrize("m, qmax", [(1, 100), (2, 100), (5, 10_000), (13, 1000)])
def test_markoff_roots_verify(m, qmax):
    report = verify_markoff_roots(m, qmax)
    assert report.passed
    assert report.constant == markoff_constant(m)
    assert [c.root for c in report.checks] == ["alpha", "beta_plus_3"]
    assert all(c.counterexamples == [] for c in report.checks)


def test_verify_needs_qmax_past_m():
    with pytest.raises(DomainError):
        verify_markoff_roots(5, 3)


def test_phi_of_markoff_roots_matches_the_constant():
    for m in (5, 13, 29):
        alpha, beta = form_roots(form_for(m))
        assert phi_certified(alpha, 10**7, brute_force_cap=500).phi == markoff_constant(m)
        assert phi_certified(beta + 3, 10**7, brute_force_cap=500).phi == markoff_constant(m)


@pytest.mark.parametrize("m", FIRST_TWELVE)
def test_phi_of_alpha_roots_is_the_reciprocal_supremum(m):
    alpha = form_roots(form_for(m))[0]
    cert = phi_certified(alpha, 10**60, brute_force_cap=100)
    assert cert.phi.reciprocal() == certified_mu_sup(cf_expand(alpha)).value
    assert cert.phi == markoff_constant(m)


PHI_BASES = (ALPHA_5, CF((1,), (2,)), CF((0,), (3,)), CF((0, 2), (1,)))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PHI_BASES), st.sampled_from((1, -1)), st.integers(-1000, 1000))
def test_phi_ignores_sign_and_shift(cf, sign, k):
    expected = phi_certified(cf, 10**9, brute_force_cap=50).phi
    moved = sign * cf_value(cf) + k
    assert phi_certified(moved, 10**9, brute_force_cap=50).phi == expected


@pytest.mark.slow
def test_markoff_roots_verify_up_to_a_thousand():
    for m in markoff_numbers(1000):
        assert verify_markoff_roots(m, 10_000).passed
