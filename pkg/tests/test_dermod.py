"""Solver tests: closed-form oracles, differential constraint oracles, Saito.

Oracles:
* Boolean arrangements have the explicit basis {x^a dx, y^b dy}, giving a
  closed-form graded dimension and exponent pair.
* The two independent constraint constructions ("basis" vs "division")
  must agree everywhere.
* Prime-field projections must agree with characteristic 0 on good primes.
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from multilattice.dermod import (
    delta,
    exponents,
    full_basis,
    graded_dimension,
    in_module,
    min_derivation,
    modular_consistency,
    project_arrangement,
    verify_saito,
)
from multilattice.errors import BadReduction, LengthMismatch
from multilattice.field import FieldSpec
from multilattice.poly import (
    Arrangement,
    Derivation,
    HomogPoly,
    LinearForm,
    apply_derivation,
    proportional_derivations,
    saito_determinant,
)

FS = FieldSpec.rational()


def random_arrangement(rng, n):
    forms = set()
    while len(forms) < n:
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        if (a, b) == (0, 0):
            continue
        lf = LinearForm.make(FS, a, b)
        forms.add((lf.a, lf.b))
    return Arrangement.make(FS, sorted(forms))


# -- closed-form oracles ------------------------------------------------------


@given(st.integers(0, 5), st.integers(0, 5))
def test_boolean_exponents_closed_form(a, b):
    A = Arrangement.make(FS, [(1, 0), (0, 1)])
    res = exponents(A, (a, b))
    assert res.as_pair() == tuple(sorted((a, b)))
    assert res.delta == abs(a - b)


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 7))
def test_boolean_graded_dimension_closed_form(a, b, d):
    A = Arrangement.make(FS, [(1, 0), (0, 1)])
    want = max(0, d - a + 1) + max(0, d - b + 1)
    assert graded_dimension(A, (a, b), d) == want


@given(st.integers(0, 5), st.integers(0, 7))
def test_single_line_graded_dimension(m, d):
    A = Arrangement.make(FS, [(1, 0)])
    # theta(x) = P in (x^m): P has max(0, d-m+1) free coefficients, Q all d+1
    assert graded_dimension(A, (m,), d) == max(0, d - m + 1) + (d + 1)


def test_boolean_min_derivation_is_monomial():
    A = Arrangement.make(FS, [(1, 0), (0, 1)])
    t = min_derivation(A, (2, 3))
    x2 = HomogPoly.make([FS.zero(), FS.zero(), FS.one()])
    assert proportional_derivations(t, Derivation(x2, HomogPoly.zero()))


# -- differential oracle: the two constraint constructions --------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_constraint_construction_oracle_equivalence(seed):
    rng = random.Random(seed)
    A = random_arrangement(rng, rng.randint(1, 5))
    mu = tuple(rng.randint(0, 4) for _ in range(len(A)))
    d = rng.randint(0, max(1, sum(mu) // 2 + 1))
    assert graded_dimension(A, mu, d, "basis") == graded_dimension(A, mu, d, "division")


# -- exponent invariants ------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_exponent_invariants_random(seed):
    rng = random.Random(seed)
    A = random_arrangement(rng, rng.randint(2, 4))
    mu = tuple(rng.randint(0, 3) for _ in range(len(A)))
    res = exponents(A, mu)
    assert res.d1 + res.d2 == sum(mu)
    assert res.d1 <= res.d2
    assert res.delta % 2 == sum(mu) % 2
    if mu and sum(mu) > 0:
        assert res.d1 <= sum(mu) - max(mu)
    assert in_module(A, mu, res.theta_min)
    assert res.non_unique == (res.delta == 0)


def test_exponents_permutation_invariance():
    rng = random.Random(7)
    A = random_arrangement(rng, 4)
    mu = (2, 0, 3, 1)
    perm = [2, 0, 3, 1]
    B = Arrangement(FS, tuple(A.forms[i] for i in perm))
    nu = tuple(mu[i] for i in perm)
    assert exponents(A, mu).as_pair() == exponents(B, nu).as_pair()


def test_exponents_zero_multiplicity():
    A = Arrangement.make(FS, [(1, 0), (0, 1), (1, 1)])
    res = exponents(A, (0, 0, 0))
    assert res.as_pair() == (0, 0)
    assert res.non_unique


def test_exponents_length_mismatch():
    A = Arrangement.make(FS, [(1, 0), (0, 1)])
    with pytest.raises(LengthMismatch):
        exponents(A, (1, 2, 3))


def test_delta_monotone_steps(B2, session_cache):
    # covering steps change delta by exactly one (spot check off the scan path)
    base = (2, 1, 2, 1)
    d0 = delta(B2, base, cache=session_cache)
    for i in range(4):
        up = base[:i] + (base[i] + 1,) + base[i + 1:]
        assert abs(delta(B2, up, cache=session_cache) - d0) == 1


# -- membership and Saito verification ---------------------------------------


def test_theta_min_membership_b2(B2):
    for mu in [(1, 1, 1, 1), (2, 1, 0, 3), (0, 2, 2, 1)]:
        res = exponents(B2, mu)
        assert in_module(B2, mu, res.theta_min)
        for lf, m in zip(B2.forms, mu):
            f = apply_derivation(res.theta_min, lf)
            assert f.is_zero or True  # exercised through in_module above


def test_full_basis_saito_accepted(B2, G2):
    for A, mu in [(B2, (1, 1, 1, 1)), (B2, (2, 1, 2, 1)), (B2, (0, 3, 1, 2)),
                  (G2, (1, 1, 1, 1, 1, 1)), (G2, (2, 1, 1, 0, 2, 1))]:
        t1, t2 = full_basis(A, mu)
        v = verify_saito(A, mu, t1, t2)
        assert v.accepted, v.reason
        assert v.scalar


def test_verify_saito_rejections(B2):
    mu = (1, 1, 1, 1)
    t1, t2 = full_basis(B2, mu)
    # dependent pair
    assert not verify_saito(B2, mu, t1, t1).accepted
    # degree-sum violation
    e = Derivation.euler(B2.field)
    assert "degree" in verify_saito(B2, mu, e, e.mul_poly(
        HomogPoly.make([FS.zero(), FS.one()]))).reason
    # non-member
    bad = Derivation(HomogPoly.one(FS), HomogPoly.zero())
    assert "membership" in verify_saito(B2, mu, bad, t2).reason
    # zero derivation
    assert "zero" in verify_saito(B2, mu, Derivation.zero(), t2).reason


def test_saito_determinant_matches_defining_polynomial(B2):
    from multilattice.poly import defining_polynomial
    mu = (2, 1, 1, 2)
    t1, t2 = full_basis(B2, mu)
    det = saito_determinant(t1, t2)
    q = defining_polynomial(B2, mu)
    assert det.degree == q.degree == sum(mu)


# -- modular projection -------------------------------------------------------


def test_project_arrangement_bad_reduction():
    A = Arrangement.make(FS, [(1, 0), (1, 7)])
    with pytest.raises(BadReduction):
        project_arrangement(A, 7)  # the two forms collide mod 7


def test_modular_consistency_b2_g2(B2, G2, session_cache):
    rng = random.Random(0)
    report = modular_consistency(B2, [(1, 1, 1, 1), (2, 1, 2, 1)], rng,
                                 cache=session_cache)
    assert report["matches"] == report["total"], report["mismatches"]
    report = modular_consistency(G2, [(1, 1, 1, 1, 1, 1)], rng, cache=session_cache)
    assert report["matches"] == report["total"], report["mismatches"]


def test_cache_hit_returns_same_result(B2, session_cache):
    mu = (1, 2, 1, 0)
    first = exponents(B2, mu, cache=session_cache)
    again = exponents(B2, mu, cache=session_cache)
    assert first == again
