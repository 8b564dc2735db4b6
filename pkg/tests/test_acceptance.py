"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances are exact (all quantities are integers) except the pinned
runtime ceilings below, measured single-threaded.
"""

from __future__ import annotations

import itertools
import time
from math import gcd

import numpy as np
import pytest

from conftest import ACCEPTANCE
from multisidon.codes import (build_code, distance_profile, min_distance_bruteforce,
                              simulate)
from multisidon.construct import (MonomialParams, find_monomial_params, monomial_equivalence,
                                  monomial_family, monomial_field, roth_code_params)
from multisidon.errors import OrbitOverlapError, ParameterError
from multisidon.field import Extension, make_field
from multisidon.linearized import (LinearizedPoly, lp_compose, lp_kernel_dim, lp_veval,
                                   projection_polys, relative_norm)
from multisidon.linset import (characterization_conditions, hyperplane_weights,
                               max_rank_spectrum_formula, product_space, sidon_linearset_size,
                               spectrum_identities, weight_spectrum)
from multisidon.sidon import (EquivalenceWitness, SubspaceFamily, canonical_form,
                              family_equivalence, is_multi_sidon, is_sidon, poly_criterion)
from multisidon.subspace import random_subspace, span_canonical
from oracles import (hyperplane_spectrum, matrix_nullity, max_kernel_poly, multi_sidon_bruteforce,
                     spectrum_by_points)

# runtime ceilings in seconds
LIMIT_1 = 10.0
LIMIT_2 = 60.0
LIMIT_3 = 30.0
LIMIT_4 = 5.0

E81 = Extension(make_field(3, 4), 3)
E64 = Extension(make_field(2, 6), 2)


def report(n: int, checks: dict, detail: str) -> None:
    ok = all(checks.values())
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)
    assert ok, [k for k, v in checks.items() if not v]


@pytest.fixture(autouse=True)
def _mark_incomplete(request):
    n = int(request.node.name.split("_")[1])
    ACCEPTANCE[n] = f"criterion {n:2d}: FAIL  did not complete"
    yield


def test_01_prop_instance_q3_t2():
    t0 = time.perf_counter()
    fam = monomial_family(find_monomial_params(3, 2, 1, 2))
    brute = multi_sidon_bruteforce(fam)
    fast = bool(is_multi_sidon(fam))
    poly = bool(poly_criterion(canonical_form(fam)))
    dt = time.perf_counter() - t0
    report(1, {"brute": brute, "agree": brute == fast == poly, "time": dt < LIMIT_1},
           f"brute-force={brute} orbit={fast} poly_criterion={poly} ({dt:.2f}s < {LIMIT_1}s)")


def test_02_roth_codes_q5_t2():
    t0 = time.perf_counter()
    R = roth_code_params(5, 2, 1)
    C = build_code(R.family())
    C2 = build_code(monomial_family(R.as_monomial(append_subfield=True)))
    d1, d2 = C.min_distance(), C2.min_distance()
    d2_brute = min_distance_bruteforce(C2)
    prof = distance_profile(C2)
    dt = time.perf_counter() - t0
    t = 2
    report(2, {"size": C.size == 2 * (5**4 - 1) // 4 == 312, "d": d1 == 2 * t - 2,
               "size_sub": C2.size == 338, "d_sub_exact": d2 == d2_brute,
               "d_sub_statement": d2 == 2 * t - 2, "time": dt < LIMIT_2},
           f"|C|={C.size} d={d1}; with subfield |C|={C2.size} d={d2} (statement 2t-2={2 * t - 2}, "
           f"subfield orbit self-profile {prof[(2, 2)]}) ({dt:.1f}s < {LIMIT_2}s)")


def _code_verdict(fam, t):
    """(code has full size and d >= 2t - 2, detail) from the code side alone."""
    ext = fam.ext
    full = fam.r * (ext.order - 1) // (ext.q - 1)
    try:
        C = build_code(fam)
    except OrbitOverlapError as exc:
        return False, f"overlap alpha={exc.alpha} (d=0)"
    d = C.min_distance()
    return C.size == full and d >= 2 * t - 2, f"|C|={C.size} d={d}"


def test_03_monomial_code_q3_t2():
    t0 = time.perf_counter()
    P = find_monomial_params(3, 2, 1, 2)
    C = build_code(monomial_family(P))
    ext = P.ext
    units = [int(x) for x in ext.subfield(2) if x]
    # plant families that break one of the norm conditions
    planted = agree = verified = witnessed = 0
    for xi in [x for x in range(ext.order) if not ext.in_subfield(x, 2)][:30]:
        for mus in itertools.combinations(units, 2):
            Q = MonomialParams(ext, 2, 1, xi, mus)
            if not {v[0] for v in Q.violations()} - {"too-many"}:
                continue
            fam = monomial_family(Q, validate=False)
            v = bool(is_multi_sidon(fam))
            c, _ = _code_verdict(fam, 2)
            planted += 1
            agree += v == c
            verified += v
            witnessed += not c
            if planted >= 60:
                break
        if planted >= 60:
            break
    dt = time.perf_counter() - t0
    report(3, {"size": C.size == 80, "d": C.min_distance() == 2 == min_distance_bruteforce(C),
               "planted": planted >= 60, "agree": agree == planted, "time": dt < LIMIT_3},
           f"|C|={C.size} d={C.min_distance()}; {planted} norm-violating families: "
           f"{verified} still verify, {witnessed} give a d<2t-2 witness, verifier/code agree "
           f"{agree}/{planted} ({dt:.1f}s < {LIMIT_3}s)")


def test_04_spectrum_q3_n4_r2():
    t0 = time.perf_counter()
    fam = monomial_family(find_monomial_params(3, 2, 1, 2))
    V = product_space(list(fam))
    spec = weight_spectrum(V)
    ids = spectrum_identities(3, V.rank, spec.counts, spec.size)
    hw = hyperplane_weights(V)
    dt = time.perf_counter() - t0
    formula = max_rank_spectrum_formula(3, 4, 2)
    oracle_pts = spectrum_by_points(fam.ext, V.basis, 2)
    oracle_hyp = hyperplane_spectrum(fam.ext, V.basis, 2)
    report(4, {"spectrum": spec.counts == {1: 32, 2: 2} == oracle_pts, "size": spec.size == 34,
               "formula": (formula["N1"], formula["Nh"], formula["size"]) == (32, 2, 34),
               "identities": all(ids.values()),
               "hyperplanes": hw.counts == {0: 48, 1: 32, 2: 2} == oracle_hyp and hw.total == 82,
               "time": dt < LIMIT_4},
           f"N1={spec.counts.get(1)} N2={spec.counts.get(2)} |L|={spec.size} identities={ids}; "
           f"hyperplanes {dict(sorted(hw.counts.items()))} of {hw.total} ({dt:.2f}s < {LIMIT_4}s)")


def test_05_sidon_linear_set_size():
    rng = np.random.default_rng(5)
    while True:
        U = random_subspace(E81, 2, rng)
        if is_sidon(U) and is_sidon(U, route="definitional"):
            break
    size = sidon_linearset_size(U)
    oracle = sum(spectrum_by_points(E81, product_space([U, U]).basis, 2).values())
    q, k = 3, 2
    closed = (q**k - 1) // (q - 1) * (q**k - q) + q + 1
    report(5, {"size": size == 28 == closed, "oracle": oracle == 28},
           f"|L_(UxU)|={size} (point oracle {oracle}, closed form {closed}) for U={list(U.rows)}")


FIELDS_6 = [(2, 4, 2), (2, 6, 2), (3, 4, 3), (2, 6, 4), (3, 4, 9), (5, 2, 5), (2, 6, 8), (3, 6, 3),
            (3, 2, 3), (2, 8, 2)]


def _norm_identity(f):
    ext = f.ext
    a = f.coeffs
    lhs = relative_norm(ext, a[0], ext.n)
    rhs = relative_norm(ext, a[-1], ext.n)
    if (ext.n * f.degree) % 2:
        rhs = ext.field.neg(rhs)
    return lhs == rhs


def test_06_kernel_bound_suite():
    rng = np.random.default_rng(6)
    exts = [Extension(make_field(p, m), q) for p, m, q in FIELDS_6]
    polys = []
    while len(polys) < 1000:
        ext = exts[len(polys) % len(exts)]
        s = int(rng.choice([s for s in range(1, ext.n + 1) if gcd(s, ext.n) == 1]))
        coeffs = [int(x) for x in rng.integers(0, ext.order, int(rng.integers(1, 5)))]
        f = LinearizedPoly(ext, coeffs, s)
        if not f.is_zero():
            polys.append(f)
    # planted equality cases: maximum kernels through composed linear factors
    planted = []
    for ext in exts:
        for s in [s for s in range(1, ext.n + 1) if gcd(s, ext.n) == 1][:2]:
            for ell in (1, 2, 3):
                if ell < ext.n:
                    planted.append(max_kernel_poly(ext, s, random_subspace(ext, ell, rng).rows))
    bound = roots = equal = equal_ok = proper = 0
    for f in polys + planted:
        ext = f.ext
        k = matrix_nullity(f)
        nroots = int((lp_veval(f, ext.field.elements()) == 0).sum())
        roots += nroots == ext.q**k == ext.q ** lp_kernel_dim(f, check=False)
        bound += k <= f.degree
        if k == f.degree:
            equal += 1
            equal_ok += _norm_identity(f)
            proper += f.degree >= 1
    total = len(polys) + len(planted)
    report(6, {"bound": bound == total, "roots": roots == total, "norm": equal_ok == equal,
               "planted": all(matrix_nullity(f) == f.degree for f in planted)},
           f"{len(polys)} random + {len(planted)} planted: kernel<=degree {bound}/{total}, "
           f"roots==nullity {roots}/{total}, equality cases with norm identity {equal_ok}/{equal} "
           f"({proper} of degree >= 1)")


def test_07_three_way_characterization():
    rng = np.random.default_rng(7)
    counts = {"agree_ii_iii": 0, "agree_i": 0, "true": 0, "total": 0}
    for ext in (E81, E64):
        for _ in range(100):
            r = int(rng.integers(2, 4))
            fam = SubspaceFamily.of([random_subspace(ext, int(rng.integers(2, 4)), rng) for _ in range(r)])
            c = characterization_conditions(fam)
            counts["total"] += 1
            counts["agree_ii_iii"] += c["ii"] == c["iii"]
            counts["agree_i"] += c["i"] == c["iii"]
            counts["true"] += c["iii"]
    n = counts["total"]
    report(7, {"n": n >= 200, "ii_iii": counts["agree_ii_iii"] == n, "i": counts["agree_i"] == n,
               "both_sides": 0 < counts["true"] < n},
           f"{n} families over F_(3^4), F_(2^6): ii==iii {counts['agree_ii_iii']}/{n}, "
           f"i==iii {counts['agree_i']}/{n} ({counts['true']} satisfy all three)")


def _random_valid(ext, t, s, r, rng, pools, xi=None):
    if ext not in pools:
        sub = ext.subfield(t)
        pools[ext] = ([int(x) for x in sub if x], np.setdiff1d(np.arange(ext.order), sub))
    units, xis = pools[ext]
    for _ in range(2000):
        x = xi if xi is not None else int(rng.choice(xis))
        P = MonomialParams(ext, t, s, x, tuple(int(u) for u in rng.choice(units, r, replace=False)))
        if not P.violations():
            return P
    return None


def test_08_equivalence_suite():
    rng = np.random.default_rng(8)
    # planted witnesses
    bases = [monomial_family(find_monomial_params(3, 2, 1, 2)),
             monomial_family(find_monomial_params(5, 3, 1, 2))]
    while len(bases) < 4:
        fam = SubspaceFamily.of([random_subspace(E64, 2, rng) for _ in range(2)])
        if is_multi_sidon(fam):
            bases.append(fam)
    trips = 0
    for k in range(100):
        fam = bases[k % len(bases)]
        ext = fam.ext
        w = EquivalenceWitness(tuple(int(x) for x in rng.permutation(fam.r)),
                               tuple(int(x) for x in rng.integers(1, ext.order, fam.r)),
                               int(rng.integers(ext.field.m)))
        target = w.apply(fam)
        found = family_equivalence(fam, target)
        trips += found is not None and found.validates(fam, target) and found.inverse(ext).validates(target, fam)
    # monomial clause test against the generic search, 3 <= t <= 5, q <= 5
    grid = [(3, 3), (4, 3), (5, 3), (3, 4), (4, 4), (5, 4), (3, 5), (4, 5)]
    pairs = agree = equivalent = 0
    pools = {}
    for q, t in grid:
        ext = monomial_field(q, t)
        F = ext.field
        twists = [s for s in range(1, t) if gcd(s, t) == 1]
        done = 0
        while done < 6:
            r = int(rng.integers(1, min(q - 1, 2) + 1))
            P = _random_valid(ext, t, int(rng.choice(twists)), r, rng, pools)
            if P is None:
                continue
            mode = rng.random()
            xi = P.xi if mode < 0.4 else (F.frobenius(P.xi, int(rng.integers(F.m))) if mode < 0.7 else None)
            Q = _random_valid(ext, t, int(rng.choice(twists)), r, rng, pools, xi)
            if Q is None:
                continue
            a = monomial_equivalence(P, Q)
            b = family_equivalence(monomial_family(P), monomial_family(Q))
            pairs += 1
            done += 1
            agree += (a is None) == (b is None)
            equivalent += b is not None
    # the clause test refuses t = 2, where it is not a characterization
    guarded = 0
    for q in (3, 4, 5):
        P = find_monomial_params(q, 2, 1, 1)
        try:
            monomial_equivalence(P, P)
        except ParameterError:
            guarded += 1
    # two twists for q = 3, t = 5
    A, B = roth_code_params(3, 5, 1), roth_code_params(3, 5, 2)
    ineq_clause = monomial_equivalence(A.as_monomial(), B.as_monomial()) is None
    ineq_generic = family_equivalence(A.family(), B.family()) is None
    report(8, {"round_trips": trips == 100, "agree": agree == pairs, "guard": guarded == 3,
               "s1_s2": ineq_clause and ineq_generic},
           f"round trips {trips}/100; clause test == generic search {agree}/{pairs} "
           f"({equivalent} equivalent) over q<=5, 3<=t<=5; t=2 guarded {guarded}/3; "
           f"q=3 t=5 s=1 vs s=2 inequivalent: clause={ineq_clause} generic={ineq_generic}")


def test_09_decoder_guarantee():
    C = build_code(roth_code_params(3, 3, 1).family())
    d = C.min_distance()
    runs = {}
    for rho, e, trials, audit in [(1, 0, 500, 100), (0, 1, 500, 100), (1, 1, 200, 200), (2, 0, 200, 200),
                                  (0, 2, 200, 200), (2, 1, 200, 200), (0, 0, 100, 100)]:
        runs[(rho, e)] = simulate(C, rho, e, trials, seed=9, audit=audit)
    exact = all(runs[k].successes == runs[k].trials for k in [(1, 0), (0, 1)])
    wrong = sum(r.wrong_unique for r in runs.values())
    mis_inside = sum(runs[k].miscorrections for k in [(1, 0), (0, 1), (0, 0)])
    summary = " ".join(f"{k[0]}+{k[1]}:{r.successes}/{r.trials}(amb {r.ambiguous})" for k, r in runs.items())
    report(9, {"code": C.size == 364 and d == 4 == min_distance_bruteforce(C) and C.ext.n == 6,
               "exact": exact, "wrong_unique": wrong == 0, "miscorrections": mis_inside == 0},
           f"|C|={C.size} n=6 d={d}; successes by rho+e {summary}; wrong-unique {wrong}")


def _decompositions(ext, count, rng):
    out = []
    while len(out) < count:
        r = int(rng.integers(2, min(ext.n, 4) + 1))
        cuts = sorted(int(x) for x in rng.choice(np.arange(1, ext.n), r - 1, replace=False))
        dims = [b - a for a, b in zip([0] + cuts, cuts + [ext.n])]
        parts = [random_subspace(ext, k, rng) for k in dims]
        if span_canonical(ext, [x for P in parts for x in P.rows]).dim == ext.n:
            out.append(parts)
    return out


def test_10_projection_maps():
    rng = np.random.default_rng(10)
    ok = total = 0
    for ext in (E81, E64):
        xs = ext.field.elements()
        for parts in _decompositions(ext, 50, rng):
            total += 1
            polys = projection_polys(ext, [list(P.rows) for P in parts])
            imgs = [lp_veval(p, xs) for p in polys]
            acc = np.zeros_like(xs)
            for img in imgs:
                acc = ext.field.vadd(acc, img)
            good = np.array_equal(acc, xs)
            for i, p in enumerate(polys):
                good &= np.array_equal(np.unique(imgs[i]), np.sort(parts[i].elements))
                for j, p2 in enumerate(polys):
                    comp = lp_veval(lp_compose(p, p2), xs)
                    good &= np.array_equal(comp, imgs[i] if i == j else np.zeros_like(xs))
            ok += bool(good)
    report(10, {"all": ok == total == 100},
           f"{ok}/{total} decompositions: sum p_i = id, p_i p_j = delta_ij p_i, image p_i = U_i "
           f"on every field element")
