from __future__ import annotations

import itertools

import numpy as np
import pytest

from multisidon.construct import (MonomialParams, find_monomial_params, mixed_inequivalence_check,
                                  monomial_equivalence, monomial_family, monomial_field,
                                  outside_power_image, roth_code_params, subfield_family_equivalence)
from multisidon.errors import ParameterError
from multisidon.sidon import family_equivalence, is_multi_sidon, is_sidon


def test_find_is_deterministic():
    P = find_monomial_params(3, 2, 1, 2)
    Q = find_monomial_params(3, 2, 1, 2)
    assert P == Q and (P.xi, P.mus) == (3, (1, 16))


def test_all_valid_parameters_give_multi_sidon_q3_t2():
    ext = monomial_field(3, 2)
    units = [int(x) for x in ext.subfield(2) if x]
    xis = [x for x in range(ext.order) if not ext.in_subfield(x, 2)]
    checked = 0
    for xi in xis[::7]:
        for mus in itertools.combinations(units, 2):
            P = MonomialParams(ext, 2, 1, xi, mus)
            if P.violations():
                continue
            assert is_multi_sidon(monomial_family(P))
            checked += 1
    assert checked > 20


def test_violations_name_the_condition():
    ext = monomial_field(3, 2)
    P = MonomialParams(ext, 2, 1, 3, (1, 1))
    names = {v[0] for v in P.violations()}
    assert "norm-distinct" in names
    with pytest.raises(ParameterError, match="norm-distinct"):
        P.validate()
    assert MonomialParams(ext, 2, 1, 1, (1,)).violations() == [("xi-in-subfield", -1, -1)]
    assert ("too-many", -1, -1) in MonomialParams(ext, 2, 1, 3, (1, 2, 4)).violations()
    assert ("gcd", -1, -1) in MonomialParams(ext, 2, 2, 3, (1,)).violations()


def test_diagonal_condition_is_needed_from_t3():
    # single members with N(mu^2 xi^(q^t+1)) = 1 fail the Sidon test when t >= 3
    ext = monomial_field(3, 3)
    F = ext.field
    units = [int(x) for x in ext.subfield(3) if x]
    seen = {True: 0, False: 0}
    for xi in [x for x in range(ext.order) if not ext.in_subfield(x, 3)][:40]:
        mu = units[xi % len(units)]
        P = MonomialParams(ext, 3, 1, xi, (mu,))
        diag = P.norm(F.mul(F.mul(mu, mu), F.mul(xi, ext.frobenius(xi, 3)))) == 1
        U = monomial_family(P, validate=False)[0]
        assert bool(is_sidon(U)) == (not diag)
        seen[diag] += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("q,t,s", [(3, 2, 1), (5, 2, 1), (4, 3, 2), (3, 5, 1), (3, 5, 2), (7, 2, 1)])
def test_roth_families_are_multi_sidon(q, t, s):
    R = roth_code_params(q, t, s)
    assert R.orbit_count == (q - 1) // 2
    F = R.ext.field
    assert F.pow(R.gamma0, q**t + 1) == R.w
    assert outside_power_image(R.ext, R.w, t, s)
    assert is_multi_sidon(R.family())


def test_roth_rejects_bad_input():
    with pytest.raises(ParameterError):
        roth_code_params(2, 3, 1)
    with pytest.raises(ParameterError):
        roth_code_params(3, 4, 2)


def test_monomial_equivalence_identity_and_t_guard():
    P = find_monomial_params(5, 3, 1, 2)
    eq = monomial_equivalence(P, P)
    assert eq is not None and eq.clauses[0] == 1 and eq.rho == 0
    Q = find_monomial_params(3, 2, 1, 2)
    with pytest.raises(ParameterError, match="t >= 3"):
        monomial_equivalence(Q, Q)


def test_clause_two_via_opposite_twist():
    # s' = t - s: the conjugate-swapped family is equivalent through the second clause
    P = find_monomial_params(5, 3, 1, 1)
    hits = 0
    ext = P.ext
    units = [int(x) for x in ext.subfield(3) if x]
    for mu in units[:40]:
        Q = MonomialParams(ext, 3, 2, P.xi, (mu,))
        if Q.violations():
            continue
        a = monomial_equivalence(P, Q)
        b = family_equivalence(monomial_family(P), monomial_family(Q))
        assert (a is None) == (b is None)
        if a is not None:
            assert 2 in a.clauses
            hits += 1
    assert hits > 0


@pytest.mark.parametrize("q,t", [(3, 3), (4, 3), (5, 3), (3, 4), (3, 5)])
def test_monomial_equivalence_matches_generic(q, t):
    ext = monomial_field(q, t)
    F = ext.field
    rng = np.random.default_rng(q * 10 + t)
    units = [int(x) for x in ext.subfield(t) if x]
    xis = [x for x in range(ext.order) if not ext.in_subfield(x, t)]
    twists = [s for s in range(1, t) if np.gcd(s, t) == 1]
    done = 0
    while done < 6:
        xi = int(rng.choice(xis))
        P = MonomialParams(ext, t, int(rng.choice(twists)), xi, (int(rng.choice(units)),))
        xi2 = xi if rng.random() < 0.6 else F.frobenius(xi, int(rng.integers(F.m)))
        Q = MonomialParams(ext, t, int(rng.choice(twists)), xi2, (int(rng.choice(units)),))
        if P.violations() or Q.violations():
            continue
        a = monomial_equivalence(P, Q)
        b = family_equivalence(monomial_family(P), monomial_family(Q))
        assert (a is None) == (b is None)
        done += 1


def test_mixed_families_inequivalent():
    P = find_monomial_params(5, 2, 1, 2)
    Q = find_monomial_params(5, 2, 1, 1, append_subfield=True)
    v = mixed_inequivalence_check(P, Q)
    assert v.result and v.witness["stabilizer_degree"] == 2


def test_subfield_family_equivalence_self():
    P = find_monomial_params(5, 3, 1, 1, append_subfield=True)
    assert subfield_family_equivalence(P, P) is not None


def test_s1_vs_s2_codes_inequivalent_q3_t5():
    A = roth_code_params(3, 5, 1)
    B = roth_code_params(3, 5, 2)
    assert monomial_equivalence(A.as_monomial(), B.as_monomial()) is None
    assert family_equivalence(A.family(), B.family()) is None


@pytest.mark.parametrize("q,t", [(4, 3), (5, 3), (3, 4)])
def test_subfield_augmented_clause_test_matches_generic(q, t):
    ext = monomial_field(q, t)
    F = ext.field
    rng = np.random.default_rng(q + 7 * t)
    units = [int(x) for x in ext.subfield(t) if x]
    xis = np.setdiff1d(np.arange(ext.order), ext.subfield(t))
    twists = [s for s in range(1, t) if np.gcd(s, t) == 1]

    def draw(xi=None):
        # for q = 3 the diagonal condition depends on xi alone, so redraw xi too
        while True:
            x = int(rng.choice(xis)) if xi is None else xi
            P = MonomialParams(ext, t, int(rng.choice(twists)), x, (int(rng.choice(units)),), True)
            if not P.violations():
                return P

    for _ in range(5):
        P = draw()
        Q = draw(P.xi if rng.random() < 0.5 else F.frobenius(P.xi, int(rng.integers(F.m))))
        # raises InvariantError on any disagreement
        subfield_family_equivalence(P, Q)
