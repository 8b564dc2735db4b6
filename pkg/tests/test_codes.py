from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multisidon.codes import (ChannelParams, build_code, code_equivalence, codeword_distances,
                              decode_min_distance, distance_profile, min_distance,
                              min_distance_bruteforce, simulate, subspace_distance, transmit)
from multisidon.construct import find_monomial_params, monomial_family, roth_code_params
from multisidon.errors import FieldError, OrbitOverlapError, ParameterError
from multisidon.field import Extension, make_field
from multisidon.sidon import EquivalenceWitness, SubspaceFamily
from multisidon.subspace import (frobenius_image, intersect_dim, random_subspace, scalar_mul,
                                 span_canonical, subfield_subspace)

E81 = Extension(make_field(3, 4), 3)
E64 = Extension(make_field(2, 6), 2)


@pytest.fixture(scope="module")
def code80():
    return build_code(monomial_family(find_monomial_params(3, 2, 1, 2)))


@pytest.fixture(scope="module")
def roth33():
    return build_code(roth_code_params(3, 3, 1).family())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_subspace_distance_is_a_metric(seed, a, b, c):
    rng = np.random.default_rng(seed)
    U, V, W = (random_subspace(E81, k, rng) for k in (a, b, c))
    assert subspace_distance(U, U) == 0
    assert subspace_distance(U, V) == subspace_distance(V, U) >= 0
    assert (subspace_distance(U, V) == 0) == (U == V)
    assert subspace_distance(U, W) <= subspace_distance(U, V) + subspace_distance(V, W)


def test_distance_rejects_mixed_fields():
    with pytest.raises(FieldError):
        subspace_distance(span_canonical(E81, [1]), span_canonical(E64, [1]))


def test_monomial_code_size_and_distance(code80):
    assert code80.size == 80 and code80.orbit_sizes == (40, 40)
    assert code80.min_distance() == 2 == min_distance_bruteforce(code80)
    assert all(code80.find(code80.codeword(i)) == i for i in range(0, 80, 7))


@pytest.mark.parametrize("append,size", [(False, 312), (True, 338)])
def test_roth_q5_code(append, size):
    R = roth_code_params(5, 2, 1)
    C = build_code(monomial_family(R.as_monomial(append_subfield=append)) if append else R.family())
    assert C.size == size and C.min_distance() == 2
    if append:
        assert distance_profile(C)[(2, 2)] == 0


def test_roth_q3_t3_code(roth33):
    assert roth33.size == 364 and roth33.orbit_sizes == (364,)
    assert roth33.min_distance() == 4


def test_single_subfield_orbit_has_full_distance():
    S = subfield_subspace(E81, 2)
    C = build_code(SubspaceFamily.of([S]))
    assert C.size == 10 and C.min_distance() == 4 == min_distance_bruteforce(C)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fast_distance_matches_bruteforce(seed):
    rng = np.random.default_rng(seed)
    fam = SubspaceFamily.of([random_subspace(E81, 2, rng) for _ in range(2)])
    try:
        C = build_code(fam)
    except OrbitOverlapError:
        return
    assert min_distance(C) == min_distance_bruteforce(C)


def test_overlap_is_reported():
    U = random_subspace(E81, 2, np.random.default_rng(5))
    with pytest.raises(OrbitOverlapError) as err:
        build_code(SubspaceFamily.of([U, scalar_mul(7, U)]))
    i, j, alpha = err.value.i, err.value.j, err.value.alpha
    gens = [U, scalar_mul(7, U)]
    assert {i, j} == {0, 1} and gens[i] == scalar_mul(alpha, gens[j])


def test_mixed_dimensions_rejected():
    rng = np.random.default_rng(1)
    with pytest.raises(ParameterError):
        build_code(SubspaceFamily.of([random_subspace(E81, 2, rng), random_subspace(E81, 3, rng)]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 3), st.integers(0, 3))
def test_transmit_has_the_requested_shape(seed, rho, e):
    rng = np.random.default_rng(seed)
    U = random_subspace(E64, 3, rng)
    R = transmit(U, ChannelParams(rho, e), rng)
    assert R.dim == 3 - rho + e
    assert intersect_dim(R, U) == 3 - rho
    assert subspace_distance(R, U) == rho + e


def test_transmit_is_seeded():
    U = random_subspace(E64, 3, np.random.default_rng(0))
    a = transmit(U, ChannelParams(1, 1, seed=42))
    b = transmit(U, ChannelParams(1, 1, seed=42))
    assert a == b


def test_channel_checks():
    U = random_subspace(E81, 2, np.random.default_rng(0))
    with pytest.raises(ParameterError):
        transmit(U, ChannelParams(3, 0))
    with pytest.raises(ParameterError):
        transmit(U, ChannelParams(0, 3))


def test_codeword_distances_match_rank(code80):
    rng = np.random.default_rng(2)
    R = random_subspace(E81, 2, rng)
    d = codeword_distances(code80, R)
    for i in range(0, 80, 9):
        assert d[i] == subspace_distance(code80.codeword(i), R)


def test_decoder_verdicts(roth33):
    rng = np.random.default_rng(3)
    sent = roth33.codeword(17)
    dec = decode_min_distance(roth33, sent)
    assert dec.verdict == "unique" and dec.index == 17 and dec.distance == 0
    R = transmit(sent, ChannelParams(1, 0), rng)
    dec = decode_min_distance(roth33, R)
    assert dec.verdict == "unique" and dec.index == 17 and dec.distance == 1
    R = transmit(sent, ChannelParams(1, 1), rng)
    dec = decode_min_distance(roth33, R)
    assert dec.verdict in ("ambiguous", "nearest")
    if dec.verdict == "ambiguous":
        assert 17 in dec.candidates and list(dec.candidates) == sorted(
            dec.candidates, key=lambda i: tuple(roth33.keys[i]))


def test_simulation_is_thread_independent(roth33):
    a = simulate(roth33, 1, 0, 20, seed=5, audit=5, threads=1)
    b = simulate(roth33, 1, 0, 20, seed=5, audit=5, threads=2)
    assert a == b and a.successes == 20 and a.wrong_unique == 0


def test_simulation_beyond_radius(roth33):
    rep = simulate(roth33, 2, 1, 30, seed=7, audit=30)
    # every trial is a success, an ambiguous list, or a single wrong answer
    assert rep.successes + rep.ambiguous <= rep.trials <= rep.successes + rep.ambiguous + rep.failures
    assert rep.miscorrections <= rep.failures and rep.wrong_unique == 0


def test_frobenius_shift_is_code_equivalent():
    fam = monomial_family(find_monomial_params(3, 2, 1, 2))
    C1 = build_code(fam)
    shifted = SubspaceFamily.of([frobenius_image(U, 1) for U in fam])
    C2 = build_code(shifted)
    sl = code_equivalence(C1, C2, "semilinear")
    assert sl and sl.witness.validates(fam, shifted)
    w = EquivalenceWitness((1, 0), (5, 11), 0)
    C3 = build_code(w.apply(fam))
    lin = code_equivalence(C1, C3, "linear")
    assert lin and lin.witness.rho == 0
