"""Explicit families: monomial multi-Sidon spaces, the Roth-style code data,
subfield-augmented variants, and equivalence tests specialized to them.

A monomial family lives in F_{q^(2t)} and consists of the subspaces
``W_{mu_i x^(q^s), xi} = {u + xi mu_i u^(q^s) : u in F_{q^t}}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import InvariantError, ParameterError
from .field import Extension, make_field, prime_power
from .linearized import LinearizedPoly, relative_norm
from .sidon import (
    SubspaceFamily,
    Verdict,
    _match,
    family_equivalence,
    is_multi_sidon,
    structure_constants,
    w_subspace,
)
from .subspace import orbit_stabilizer, subfield_subspace


@lru_cache(maxsize=None)
def monomial_field(q: int, t: int) -> Extension:
    """F_{q^(2t)} over F_q with the default modulus."""
    p, e = prime_power(q)
    return Extension(make_field(p, 2 * t * e), q)


@dataclass(frozen=True)
class MonomialParams:
    ext: Extension
    t: int
    s: int
    xi: int
    mus: tuple[int, ...]
    append_subfield: bool = False

    @property
    def q(self) -> int:
        return self.ext.q

    @property
    def r(self) -> int:
        """Number of subspaces in the family, the subfield included."""
        return len(self.mus) + int(self.append_subfield)

    def norm(self, x: int) -> int:
        return relative_norm(self.ext, x, self.t)

    def violations(self) -> list[tuple]:
        """Every failed hypothesis as ``(name, i, j)`` (indices -1 when unused)."""
        ext, F, t, q = self.ext, self.ext.field, self.t, self.q
        out = []
        if ext.n != 2 * t:
            out.append(("field-degree", -1, -1))
        if gcd(self.s, t) != 1:
            out.append(("gcd", -1, -1))
        if ext.in_subfield(self.xi, t):
            out.append(("xi-in-subfield", -1, -1))
        for i, mu in enumerate(self.mus):
            if not mu or not ext.in_subfield(mu, t):
                out.append(("mu-not-in-subfield", i, -1))
        if len(self.mus) > q - 1:
            out.append(("too-many", -1, -1))
        if out:
            return out
        conj = F.mul(self.xi, ext.frobenius(self.xi, t))
        for i, j in itertools.combinations(range(len(self.mus)), 2):
            mi, mj = self.mus[i], self.mus[j]
            if self.norm(mi) == self.norm(mj):
                out.append(("norm-distinct", i, j))
            if self.norm(F.mul(F.mul(mi, mj), conj)) == 1:
                out.append(("product-norm", i, j))
        if t >= 3:
            # for t = 2 the criterion polynomial drops to q-degree 1 and needs no
            # diagonal condition; from t = 3 on each member needs it to be Sidon
            for i, mi in enumerate(self.mus):
                if self.norm(F.mul(F.mul(mi, mi), conj)) == 1:
                    out.append(("product-norm-diagonal", i, i))
        return out

    def validate(self) -> None:
        bad = self.violations()
        if bad:
            name, i, j = bad[0]
            where = f" for pair ({i}, {j})" if j >= 0 else (f" at index {i}" if i >= 0 else "")
            raise ParameterError(f"monomial parameters violate {name}{where}")

    def polys(self) -> list[LinearizedPoly]:
        return [LinearizedPoly(self.ext, [0, mu], self.s, self.t) for mu in self.mus]

    def to_dict(self) -> dict:
        return {"field": self.ext.field.spec, "q": self.q, "t": self.t, "s": self.s, "xi": self.xi,
                "mus": list(self.mus), "append_subfield": self.append_subfield}


def monomial_family(P: MonomialParams, validate: bool = True) -> SubspaceFamily:
    """``[W_{mu_i x^(q^s), xi}]``, followed by F_{q^t} when ``append_subfield``."""
    if validate:
        P.validate()
    members = [w_subspace(P.ext, f, P.xi) for f in P.polys()]
    if P.append_subfield:
        members.append(subfield_subspace(P.ext, P.t))
    return SubspaceFamily.of(members)


def find_monomial_params(q: int, t: int, s: int, r: int, append_subfield: bool = False,
                         xi: int | None = None, verify: bool = True) -> MonomialParams:
    """Deterministic search for valid parameters.

    xi runs over elements outside F_{q^t} in increasing order (or is fixed),
    and the mus over increasing tuples of F_{q^t}^*. With ``verify`` the
    resulting family must also pass :func:`is_multi_sidon`.
    """
    ext = monomial_field(q, t)
    if gcd(s, t) != 1:
        raise ParameterError("s must be coprime to t")
    if r > q - 1 or r < 1:
        raise ParameterError(f"need 1 <= r <= q-1 = {q - 1}")
    units = [int(x) for x in ext.subfield(t) if x]
    xis = [xi] if xi is not None else [x for x in range(ext.order) if not ext.in_subfield(x, t)]
    for x in xis:
        for mus in itertools.combinations(units, r):
            P = MonomialParams(ext, t, s, x, mus, append_subfield)
            if P.violations():
                continue
            if verify and not is_multi_sidon(monomial_family(replace(P, append_subfield=False))):
                continue
            return P
    raise ParameterError(f"no valid monomial parameters for q={q}, t={t}, s={s}, r={r}")


# -- Roth-style code data ----------------------------------------------------

@dataclass(frozen=True)
class RothCodeParams:
    ext: Extension
    t: int
    s: int
    w: int
    b: int
    gamma0: int
    orbit_count: int

    @property
    def q(self) -> int:
        return self.ext.q

    @property
    def gammas(self) -> list[int]:
        F = self.ext.field
        return [F.mul(F.pow(self.w, i), self.gamma0) for i in range(self.orbit_count)]

    def as_monomial(self, append_subfield: bool = False) -> MonomialParams:
        F = self.ext.field
        mus = tuple(F.pow(self.w, i) for i in range(self.orbit_count))
        return MonomialParams(self.ext, self.t, self.s, self.gamma0, mus, append_subfield)

    def family(self, append_subfield: bool = False) -> SubspaceFamily:
        return monomial_family(self.as_monomial(append_subfield))

    def to_dict(self) -> dict:
        return {"field": self.ext.field.spec, "q": self.q, "t": self.t, "s": self.s, "w": self.w,
                "b": self.b, "gamma0": self.gamma0, "orbit_count": self.orbit_count}


def outside_power_image(ext: Extension, w: int, t: int, s: int) -> bool:
    """Whether w in F_{q^t}^* avoids ``{y^(q^s - 1) : y in F_{q^t}^*}``.

    The image is the subgroup of index ``gcd(q^s - 1, q^t - 1)``, so membership
    is a congruence on the discrete log relative to a generator of F_{q^t}^*.
    """
    F = ext.field
    q = ext.q
    step = (F.order - 1) // (q**t - 1)
    k = F.log(w) // step
    return k % gcd(q**s - 1, q**t - 1) != 0


def roth_code_params(q: int, t: int, s: int, w: int | None = None, b: int | None = None) -> RothCodeParams:
    """Deterministic parameters: w the smallest primitive element of F_{q^t}
    outside the (q^s - 1)-th powers, b the smallest making ``x^2 + bx + w``
    irreducible over F_{q^t}, gamma0 its smallest root in F_{q^(2t)}."""
    if q < 3:
        raise ParameterError("the construction needs q >= 3")
    if gcd(s, t) != 1:
        raise ParameterError("s must be coprime to t")
    ext = monomial_field(q, t)
    F = ext.field
    sub = np.array([int(x) for x in ext.subfield(t)], dtype=np.int64)
    order_t = q**t - 1
    if w is None:
        for x in sub[1:]:
            x = int(x)
            if _order_in(F, x) == order_t and outside_power_image(ext, x, t, s):
                w = x
                break
        else:
            raise ParameterError("no primitive w outside the power image")
    else:
        if _order_in(F, w) != order_t or not ext.in_subfield(w, t):
            raise ParameterError("w must be a primitive element of F_{q^t}")
        if not outside_power_image(ext, w, t, s):
            raise ParameterError("w lies in the image of y -> y^(q^s-1)")

    def roots(bb: int, xs: np.ndarray) -> np.ndarray:
        val = F.vadd(F.vadd(F.vmul(xs, xs), F.vmul(bb, xs)), w)
        return xs[val == 0]

    if b is None:
        b = next((int(x) for x in sub if roots(int(x), sub).size == 0), None)
        if b is None:
            raise ParameterError("no b makes x^2 + bx + w irreducible")  # pragma: no cover
    elif roots(b, sub).size:
        raise ParameterError("x^2 + bx + w has a root in F_{q^t}")
    gamma0 = int(roots(b, F.elements()).min())
    if F.pow(gamma0, q**t + 1) != w:
        raise InvariantError("gamma0^(q^t+1) != w")
    return RothCodeParams(ext, t, s, w, b, gamma0, (q - 1) // 2)


def _order_in(F, x: int) -> int:
    return F.mult_order(x)


# -- equivalence of monomial families ----------------------------------------

@dataclass(frozen=True)
class MonomialEquivalence:
    rho: int
    sigma: tuple[int, ...]
    clauses: tuple[int, ...]
    A: int
    B: int

    def to_dict(self) -> dict:
        return {"rho": self.rho, "sigma": list(self.sigma), "clauses": list(self.clauses),
                "A": self.A, "B": self.B}


def _clause_table(P: MonomialParams, Q: MonomialParams, rho: int):
    """For automorphism x -> x^(p^rho): ``(A, B, table)`` where table[i][k] is
    the first clause (1 or 2) relating mu_i of P to mubar_k of Q, or 0."""
    ext, F, t = P.ext, P.ext.field, P.t
    xi, eta = P.xi, Q.xi
    zeta = F.frobenius(eta, rho)
    xc, zc = ext.frobenius(xi, t), ext.frobenius(zeta, t)
    A = F.div(F.sub(zeta, zc), F.sub(xi, xc))
    B = F.sub(zeta, F.mul(A, xi))
    a, b = structure_constants(ext, xi)
    same = (P.s - Q.s) % t == 0
    opposite = (P.s + Q.s) % t == 0
    c1 = same and B == 0
    c2 = opposite and B == F.neg(F.mul(A, a))
    table = []
    for mu in P.mus:
        row = []
        for mubar in Q.mus:
            nu = F.frobenius(mubar, rho)
            if c1 and P.norm(F.div(mu, F.mul(A, nu))) == 1:
                row.append(1)
            elif c2 and P.norm(F.mul(F.mul(nu, mu), F.mul(A, b))) == 1:
                row.append(2)
            else:
                row.append(0)
        table.append(row)
    return A, B, table


def monomial_equivalence(P: MonomialParams, Q: MonomialParams) -> MonomialEquivalence | None:
    """Decide equivalence of two monomial families through the clause tests.

    Only the monomial members are compared; an appended subfield on both
    sides is matched to itself.
    """
    if P.ext != Q.ext or P.t != Q.t:
        raise ParameterError("parameter sets live in different fields")
    if len(P.mus) != len(Q.mus) or P.append_subfield != Q.append_subfield:
        raise ParameterError("parameter sets have different shapes")
    if P.t < 3:
        # the clause characterization needs t >= 3; for t = 2 it misses equivalences
        raise ParameterError("the clause test needs t >= 3; use family_equivalence")
    P.validate()
    Q.validate()
    r = len(P.mus)
    for rho in P.ext.automorphisms():
        A, B, table = _clause_table(P, Q, rho)
        options = [{k: c for k, c in enumerate(row) if c} for row in table]
        sigma = _match(options, r)
        if sigma is not None:
            clauses = tuple(options[i][k] for i, k in enumerate(sigma))
            return MonomialEquivalence(rho, tuple(sigma), clauses, A, B)
    return None


def mixed_inequivalence_check(P: MonomialParams, Q: MonomialParams, cross_check: bool = True) -> Verdict:
    """Pure monomial family versus one ending in F_{q^t}: always inequivalent.

    The subfield is stabilized by F_{q^t}^*, while every monomial member
    has ``dim(W cap alpha W) <= 1`` for alpha outside F_q, a property kept
    by ``lambda W^rho``. ``result`` is True for "inequivalent".
    """
    if P.append_subfield or not Q.append_subfield:
        raise ParameterError("expected a pure family and a subfield-augmented one")
    if len(P.mus) != len(Q.mus) + 1:
        raise ParameterError("families must have the same number of members")
    if P.t < 2:
        raise ParameterError("need t >= 2")
    P.validate()
    Q.validate()
    A, B = monomial_family(P), monomial_family(Q)
    degrees = [orbit_stabilizer(U).degree for U in A]
    sub_degree = orbit_stabilizer(B[-1]).degree
    if any(d != 1 for d in degrees) or sub_degree != P.t:
        raise InvariantError("stabilizer degrees do not match the obstruction")
    witness = {"member": B.r - 1, "stabilizer_degree": sub_degree, "pure_degrees": degrees}
    if cross_check:
        found = family_equivalence(A, B)
        witness["generic_search"] = "absent" if found is None else found.to_dict()
        if found is not None:
            raise InvariantError("generic search found an equivalence across the obstruction")
    return Verdict(True, "subfield-obstruction", witness)


def subfield_family_equivalence(P: MonomialParams, Q: MonomialParams,
                                cross_check: bool = True) -> MonomialEquivalence | None:
    """Equivalence of two subfield-augmented families via the clause tests on
    the monomial members, optionally compared with the generic search.

    A disagreement raises :class:`InvariantError` with both answers.
    """
    if not (P.append_subfield and Q.append_subfield):
        raise ParameterError("both families must end in the subfield")
    ans = monomial_equivalence(P, Q)
    if cross_check:
        generic = family_equivalence(monomial_family(P), monomial_family(Q))
        if (ans is None) != (generic is None):
            raise InvariantError(f"clause test says {ans}, generic search says {generic}")
    return ans
