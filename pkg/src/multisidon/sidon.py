"""Sidon, multi-Sidon and weak multi-Sidon verification, canonical forms and
family equivalence.

Every verifier returns a :class:`Verdict` that is truthy when the property
holds and otherwise carries a witness naming the reason. Witnesses are
always the smallest failure in scan order (subspace indices first, then
ascending class representative of the scalar), so results do not depend on
how the scans are chunked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import fqlinalg
from .errors import FieldError, HypothesisError, InvariantError, ParameterError
from .field import Extension
from .linearized import LinearizedPoly, interpolate, lp_compose, lp_eval
from .subspace import (
    Subspace,
    alpha_intersection_dims,
    frobenius_image,
    orbit_stabilizer,
    product_span,
    span_canonical,
    subfield_subspace,
)


@dataclass(frozen=True)
class Verdict:
    result: bool
    route: str
    witness: dict | None = None

    def __bool__(self):
        return self.result

    def to_dict(self, with_witness: bool = True) -> dict:
        out = {"result": self.result, "route": self.route}
        if with_witness and self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class SubspaceFamily:
    ext: Extension
    members: tuple[Subspace, ...]

    def __post_init__(self):
        if any(U.ext != self.ext for U in self.members):
            raise FieldError("family members live in different fields")

    @classmethod
    def of(cls, subspaces) -> "SubspaceFamily":
        subspaces = tuple(subspaces)
        if not subspaces:
            raise ParameterError("a family needs at least one subspace")
        return cls(subspaces[0].ext, subspaces)

    @property
    def r(self) -> int:
        return len(self.members)

    @property
    def dims(self) -> list[int]:
        return [U.dim for U in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]


def _require_dims(fam: SubspaceFamily, least: int = 2) -> None:
    bad = [i for i, k in enumerate(fam.dims) if k < least]
    if bad:
        raise ParameterError(f"subspace {bad[0]} has dimension {fam.dims[bad[0]]} < {least}")


# -- Sidon -----------------------------------------------------------------

def is_sidon(U: Subspace, route: str = "orbit") -> Verdict:
    """Sidon test via orbit intersections (``route="orbit"``) or via unique
    factorization of products (``route="definitional"``)."""
    if U.dim < 2:
        raise ParameterError("Sidon tests need dimension at least 2")
    if route == "orbit":
        return _sidon_orbit(U)
    if route == "definitional":
        return _sidon_definitional(U)
    raise ValueError(f"unknown route {route!r}")


def _sidon_orbit(U: Subspace) -> Verdict:
    info = orbit_stabilizer(U)
    if info.degree != 1:
        gamma = U.ext.subfield_generator(info.degree)
        return Verdict(False, "orbit", {"reason": "short-orbit", "degree": info.degree, "alpha": gamma})
    reps = U.ext.coset_reps()
    dims = alpha_intersection_dims(U, U, reps)
    dims[0] = 0  # alpha = 1 stands for F_q^*
    bad = np.nonzero(dims >= 2)[0]
    if bad.size:
        k = int(bad[0])
        return Verdict(False, "orbit", {"reason": "large-intersection", "alpha": int(reps[k]),
                                        "dim": int(dims[k])})
    return Verdict(True, "orbit")


def _product_classes(ext: Extension, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """F_q^*-class index (log mod M) of each product ``a*b``."""
    return ext.field.vlog(ext.field.vmul(a, b)) % ext.class_count


def _sidon_definitional(U: Subspace) -> Verdict:
    ext, F = U.ext, U.field
    reps = U.class_reps
    ia, ib = np.triu_indices(reps.size)
    a, b = reps[ia], reps[ib]
    cls = _product_classes(ext, a, b)
    hit = _first_collision(cls)
    if hit is None:
        return Verdict(True, "definitional")
    first, second = hit
    A, B, C, D = int(a[first]), int(b[first]), int(a[second]), int(b[second])
    # rescale c so that ab = cd exactly
    lam = F.div(F.mul(A, B), F.mul(C, D))
    return Verdict(False, "definitional", {"reason": "non-unique-factorization",
                                           "a": A, "b": B, "c": F.mul(lam, C), "d": D})


def _first_collision(keys: np.ndarray):
    """Positions (i, j), i < j, with keys[i] == keys[j] and j minimal; else None."""
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    dup = np.nonzero(sk[1:] == sk[:-1])[0]
    if dup.size == 0:
        return None
    # for each duplicated key, the earliest occurrence and the second one
    starts = {}
    best = None
    for d in dup:
        key = int(sk[d + 1])
        i0 = starts.setdefault(key, int(order[d]))
        j = int(order[d + 1])
        cand = (min(i0, j), max(i0, j))
        if best is None or cand[1] < best[1]:
            best = cand
    return best


# -- multi-Sidon -------------------------------------------------------------

def is_multi_sidon(fam: SubspaceFamily) -> Verdict:
    """Full orbits (a), disjoint orbits (b), and ``dim(U_i cap alpha U_j) <= 1``
    whenever ``U_i != alpha U_j`` (c)."""
    _require_dims(fam)
    ext = fam.ext
    for i, U in enumerate(fam):
        info = orbit_stabilizer(U)
        if info.degree != 1:
            return Verdict(False, "clause-a", {"i": i, "degree": info.degree,
                                               "alpha": ext.subfield_generator(info.degree)})
    reps = ext.coset_reps()
    scans = {}
    for i, j in itertools.combinations_with_replacement(range(fam.r), 2):
        d = alpha_intersection_dims(fam[i], fam[j], reps)
        if i == j:
            d[0] = 0
        scans[i, j] = d
    for i, j in itertools.combinations(range(fam.r), 2):
        if fam[i].dim == fam[j].dim:
            hit = np.nonzero(scans[i, j] == fam[i].dim)[0]
            if hit.size:
                return Verdict(False, "clause-b", {"i": i, "j": j, "alpha": int(reps[hit[0]])})
    for (i, j), d in scans.items():
        hit = np.nonzero(d >= 2)[0]
        if hit.size:
            k = int(hit[0])
            return Verdict(False, "clause-c", {"i": i, "j": j, "alpha": int(reps[k]), "dim": int(d[k])})
    return Verdict(True, "orbit-intersection")


def pairwise_intersection_ok(fam: SubspaceFamily):
    """First ``(i, j, alpha)`` with i != j and ``dim(U_i cap alpha U_j) >= 2``, else None."""
    reps = fam.ext.coset_reps()
    for i, j in itertools.combinations(range(fam.r), 2):
        d = alpha_intersection_dims(fam[i], fam[j], reps)
        hit = np.nonzero(d >= 2)[0]
        if hit.size:
            return (i, j, int(reps[hit[0]]))
    return None


def is_weak_multi_sidon(fam: SubspaceFamily) -> Verdict:
    """For all i, j: ``ab = cd`` with a, c in U_i and b, d in U_j forces
    ``{aF_q, bF_q} = {cF_q, dF_q}``. Brute force over class representatives."""
    ext, F = fam.ext, fam.ext.field
    N = ext.order
    for i, j in itertools.combinations(range(fam.r), 2):
        if fam[i] == fam[j]:
            # the members must be distinct; a repeat passes the products test vacuously
            return Verdict(False, "weak", {"reason": "repeated-member", "i": i, "j": j})
    for i, j in itertools.product(range(fam.r), repeat=2):
        Ri, Rj = fam[i].class_reps, fam[j].class_reps
        if Ri.size == 0 or Rj.size == 0:
            continue
        a = np.repeat(Ri, Rj.size)
        b = np.tile(Rj, Ri.size)
        cls = _product_classes(ext, a, b)
        pair = np.minimum(a, b) * N + np.maximum(a, b)
        order = np.lexsort((pair, cls))
        cls_s, pair_s = cls[order], pair[order]
        starts = np.concatenate([[0], np.nonzero(cls_s[1:] != cls_s[:-1])[0] + 1])
        lo = np.minimum.reduceat(pair_s, starts)
        hi = np.maximum.reduceat(pair_s, starts)
        bad = np.nonzero(lo != hi)[0]
        if bad.size:
            # report the violating group with the smallest product class
            g = int(bad[np.argmin(cls_s[starts[bad]])])
            s0 = starts[g]
            s1 = starts[g + 1] if g + 1 < starts.size else cls_s.size
            grp = order[s0:s1]
            first = int(grp[0])
            other = next(int(x) for x in grp if pair[x] != pair[first])
            A, B, C, D = (int(a[first]), int(b[first]), int(a[other]), int(b[other]))
            lam = F.div(F.mul(A, B), F.mul(C, D))
            return Verdict(False, "weak", {"i": i, "j": j, "a": A, "b": B, "c": F.mul(lam, C), "d": D})
    return Verdict(True, "weak")


# -- span -------------------------------------------------------------------

@dataclass(frozen=True)
class SpanReport:
    label: str
    total: int
    lower: int
    upper: int
    square_dims: tuple[int, ...]
    bounds_checked: bool


def span_class(fam: SubspaceFamily, check_bounds: bool = True) -> SpanReport:
    """Classify ``D = sum dim<U_i^2>`` against ``2 sum k_i`` and ``sum C(k_i+1, 2)``.

    When every k_i >= 3 and the family is multi-Sidon, the bounds
    ``2 sum k_i <= D <= sum C(k_i+1, 2)`` and ``k_i <= n/2`` are asserted.
    """
    sq = tuple(product_span(U, U).dim for U in fam)
    total = sum(sq)
    lower = 2 * sum(fam.dims)
    upper = sum(comb(k + 1, 2) for k in fam.dims)
    if total == lower:
        label = "minimum-span"
    elif total == upper:
        label = "maximum-span"
    else:
        label = "neither"
    checked = False
    if check_bounds and min(fam.dims) >= 3 and is_multi_sidon(fam):
        checked = True
        if not lower <= total <= upper:
            raise InvariantError(f"span {total} outside [{lower}, {upper}] for a multi-Sidon family")
        if max(fam.dims) > fam.ext.n // 2:
            raise InvariantError("a multi-Sidon member exceeds dimension n/2")
    return SpanReport(label, total, lower, upper, sq, checked)


# -- canonical form ---------------------------------------------------------

@dataclass
class CanonicalForm:
    """``lambda_i U_i = W_{f_i, eta_i} = {x + eta_i f_i(x) : x in F_{q^t}}``.

    ``a[i], b[i]`` satisfy ``eta_i^2 = a_i eta_i + b_i``; ``A[i][j], B[i][j]``
    satisfy ``eta_i = A_ij eta_j + B_ij``; all lie in F_{q^t}.
    """

    ext: Extension
    t: int
    polys: list[LinearizedPoly]
    etas: list[int]
    lambdas: list[int]
    a: list[int]
    b: list[int]
    A: list[list[int]] = field(default_factory=list)
    B: list[list[int]] = field(default_factory=list)

    @property
    def r(self) -> int:
        return len(self.polys)

    def subspace(self, i: int) -> Subspace:
        return w_subspace(self.ext, self.polys[i], self.etas[i])


def w_subspace(ext: Extension, f: LinearizedPoly, eta: int) -> Subspace:
    """``W_{f, eta} = {x + eta f(x) : x in F_{q^t}}``."""
    F = ext.field
    basis = ext.subfield_basis(f.t)
    return span_canonical(ext, [F.add(x, F.mul(eta, lp_eval(f, x))) for x in basis])


def default_eta(ext: Extension) -> int:
    """Smallest element outside F_{q^t}, t = n/2."""
    t = ext.n // 2
    return next(x for x in range(2, ext.order) if not ext.in_subfield(x, t))


def structure_constants(ext: Extension, eta: int) -> tuple[int, int]:
    """``(a, b)`` with ``eta^2 = a eta + b``."""
    F = ext.field
    t = ext.n // 2
    conj = ext.frobenius(eta, t)
    return F.add(eta, conj), F.neg(F.mul(eta, conj))


def split_over(ext: Extension, w: int, eta: int) -> tuple[int, int]:
    """``(x, y)`` in F_{q^t}^2 with ``w = x + eta y``."""
    F = ext.field
    t = ext.n // 2
    y = F.div(F.sub(w, ext.frobenius(w, t)), F.sub(eta, ext.frobenius(eta, t)))
    return F.sub(w, F.mul(eta, y)), y


def canonical_form(fam: SubspaceFamily, etas=None) -> CanonicalForm:
    ext, F = fam.ext, fam.ext.field
    if ext.n % 2:
        raise ParameterError("canonical forms need even n")
    t = ext.n // 2
    if any(k != t for k in fam.dims):
        raise ParameterError(f"every subspace must have dimension n/2 = {t}")
    if etas is None:
        etas = [default_eta(ext)] * fam.r
    elif isinstance(etas, int):
        etas = [etas] * fam.r
    etas = [int(e) for e in etas]
    if any(ext.in_subfield(e, t) for e in etas):
        raise ParameterError("eta must lie outside F_{q^t}")
    sub_t = subfield_subspace(ext, t)
    reps = ext.coset_reps()
    polys, lambdas, avals, bvals = [], [], [], []
    for U, eta in zip(fam, etas):
        eta_line = span_canonical(ext, [F.mul(eta, x) for x in sub_t.rows])
        dims = alpha_intersection_dims(eta_line, U, reps)
        ok = np.nonzero(dims == 0)[0]
        if ok.size == 0:
            raise InvariantError("no scalar moves the subspace off eta F_{q^t}")
        lam = int(reps[ok[0]])
        xs, ys = [], []
        for row in U.rows:
            x, y = split_over(ext, F.mul(lam, row), eta)
            xs.append(x)
            ys.append(y)
        polys.append(interpolate(ext, xs, ys, t))
        lambdas.append(lam)
        a, b = structure_constants(ext, eta)
        avals.append(a)
        bvals.append(b)
    A = [[0] * fam.r for _ in range(fam.r)]
    B = [[0] * fam.r for _ in range(fam.r)]
    for i, j in itertools.product(range(fam.r), repeat=2):
        A[i][j], B[i][j] = _relate(ext, etas[i], etas[j])
    return CanonicalForm(ext, t, polys, etas, lambdas, avals, bvals, A, B)


def _relate(ext: Extension, eta_i: int, eta_j: int) -> tuple[int, int]:
    """``(A, B)`` in F_{q^t} with ``eta_i = A eta_j + B``."""
    F = ext.field
    t = ext.n // 2
    A = F.div(F.sub(eta_i, ext.frobenius(eta_i, t)), F.sub(eta_j, ext.frobenius(eta_j, t)))
    return A, F.sub(eta_i, F.mul(A, eta_j))


def criterion_poly(C: CanonicalForm, i: int, j: int, a0: int, a1: int) -> LinearizedPoly:
    """The q-polynomial on F_{q^t} whose roots parametrize ``W_i cap alpha W_j``,
    ``alpha = a0 + a1 eta_i``:

    ``f_i(a0 x + kappa f_j(x)) - a1 x - lambda f_j(x)`` with
    ``kappa = a1 A b_i + a0 B`` and ``lambda = a0 A + a1 A a_i + a1 B``,
    ``(A, B) = (A_ji, B_ji)``.
    """
    ext, F, t = C.ext, C.ext.field, C.t
    A, B = C.A[j][i], C.B[j][i]
    kappa = F.add(F.mul(F.mul(a1, A), C.b[i]), F.mul(a0, B))
    lam = F.add(F.add(F.mul(a0, A), F.mul(F.mul(a1, A), C.a[i])), F.mul(a1, B))
    inner = LinearizedPoly(ext, [a0], 1, t) + _lcompose_scalar(C.polys[j], kappa)
    out = lp_compose(C.polys[i], inner)
    out = out - LinearizedPoly(ext, [a1], 1, t) - _lcompose_scalar(C.polys[j], lam)
    return out


def _lcompose_scalar(f: LinearizedPoly, c: int) -> LinearizedPoly:
    return LinearizedPoly.from_terms(f.ext, [f.ext.field.mul(c, a) for a in f.terms], 1, f.t)


def poly_criterion(C: CanonicalForm) -> Verdict:
    """Multi-Sidon test through kernels of the criterion polynomials.

    For each pair i <= j and each ``(a0, a1)`` in F_{q^t}^2 except (0, 0), the
    kernel on F_{q^t} must have dimension at most 1; the zero polynomial is
    allowed only for i = j, a1 = 0, a0 in F_q.
    """
    ext, F, t = C.ext, C.ext.field, C.t
    sub = [int(x) for x in ext.subfield(t)]
    basis = ext.subfield_basis(t)
    fvals = [[lp_eval(f, x) for x in basis] for f in C.polys]
    for i, j in itertools.combinations_with_replacement(range(C.r), 2):
        A, B = C.A[j][i], C.B[j][i]
        ai, bi = C.a[i], C.b[i]
        fi, fj = C.polys[i], fvals[j]
        for a0, a1 in itertools.product(sub, repeat=2):
            if not a0 and not a1:
                continue
            kappa = F.add(F.mul(F.mul(a1, A), bi), F.mul(a0, B))
            lam = F.add(F.add(F.mul(a0, A), F.mul(F.mul(a1, A), ai)), F.mul(a1, B))
            images = []
            for x, fx in zip(basis, fj):
                v = lp_eval(fi, F.add(F.mul(a0, x), F.mul(kappa, fx)))
                v = F.sub(F.sub(v, F.mul(a1, x)), F.mul(lam, fx))
                images.append(v)
            kdim = t - fqlinalg.rank(ext.coords_array(images), ext)
            if kdim <= 1:
                continue
            if kdim == t and i == j and not a1 and ext.in_fq(a0):
                continue
            alpha = F.add(a0, F.mul(a1, C.etas[i]))
            return Verdict(False, "poly-criterion", {"i": i, "j": j, "a0": a0, "a1": a1,
                                                     "alpha": alpha, "kernel_dim": kdim})
    return Verdict(True, "poly-criterion")


# -- equivalence ------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceWitness:
    """``W_i = lambdas[i] * (U_{sigma[i]})^rho`` with rho: x -> x^(p^rho)."""

    sigma: tuple[int, ...]
    lambdas: tuple[int, ...]
    rho: int

    def to_dict(self) -> dict:
        return {"sigma": list(self.sigma), "lambdas": list(self.lambdas), "rho": self.rho}

    def apply(self, fam: SubspaceFamily) -> SubspaceFamily:
        """The family ``[lambda_i U_{sigma(i)}^rho]``."""
        F = fam.ext.field
        out = []
        for i, k in enumerate(self.sigma):
            img = frobenius_image(fam[k], self.rho)
            out.append(span_canonical(fam.ext, [F.mul(self.lambdas[i], x) for x in img.rows]))
        return SubspaceFamily.of(out)

    def validates(self, A: SubspaceFamily, B: SubspaceFamily) -> bool:
        return list(self.apply(A)) == list(B)

    def inverse(self, ext: Extension) -> "EquivalenceWitness":
        """Witness mapping W back to U."""
        F = ext.field
        m = F.m
        back = (m - self.rho) % m
        r = len(self.sigma)
        sigma_inv = [0] * r
        lams = [0] * r
        for i, k in enumerate(self.sigma):
            sigma_inv[k] = i
            lams[k] = F.frobenius(F.inv(self.lambdas[i]), back)
        return EquivalenceWitness(tuple(sigma_inv), tuple(lams), back)


def family_equivalence(A: SubspaceFamily, B: SubspaceFamily, automorphisms=None,
                       check_hypothesis: bool = True) -> EquivalenceWitness | None:
    """Search ``W_i = lambda_i U_{sigma(i)}^rho`` with U in A and W in B.

    ``automorphisms`` lists exponents j of ``x -> x^(p^j)`` (default: all of
    Gal(F_{q^n}/F_p)). Scalars are drawn from ``w_0 / v`` for a fixed nonzero
    ``w_0 in W_i`` and v over class representatives of ``U_{sigma(i)}^rho``.
    """
    if A.ext != B.ext:
        raise FieldError("families live in different fields")
    if A.r != B.r:
        return None
    if check_hypothesis:
        for name, fam in (("first", A), ("second", B)):
            hit = pairwise_intersection_ok(fam)
            if hit is not None:
                i, j, alpha = hit
                raise HypothesisError(f"{name} family: dim(U_{i} cap alpha U_{j}) >= 2 at alpha={alpha}")
    if sorted(A.dims) != sorted(B.dims):
        return None
    ext = A.ext
    if automorphisms is None:
        automorphisms = ext.automorphisms()
    r = A.r
    for rho in automorphisms:
        images = [frobenius_image(U, rho) for U in A]
        options = []
        for W in B:
            w0 = W.rows[0]
            opts = {}
            for k, V in enumerate(images):
                if V.dim != W.dim:
                    continue
                lam = _scalar_candidates(ext, w0, V, W)
                if lam is not None:
                    opts[k] = lam
            options.append(opts)
        sigma = _match(options, r)
        if sigma is not None:
            lams = tuple(options[i][k] for i, k in enumerate(sigma))
            return EquivalenceWitness(tuple(sigma), lams, rho)
    return None


def _scalar_candidates(ext: Extension, w0: int, V: Subspace, W: Subspace) -> int | None:
    """Smallest lambda with ``lambda V = W`` among ``w0 / v``, or None."""
    F = ext.field
    reps = V.class_reps
    lams = F.vmul(w0, F.vinv(reps))
    rows = np.array(V.rows, dtype=np.int64)
    ok = W.mask[F.vmul(lams[:, None], rows[None, :])].all(axis=1)
    if not ok.any():
        return None
    return int(lams[ok].min())


def _match(options: list[dict], r: int):
    """Lexicographically smallest permutation with sigma[i] in options[i]."""
    used = [False] * r
    sigma = []

    def go(i):
        if i == r:
            return True
        for k in sorted(options[i]):
            if not used[k]:
                used[k] = True
                sigma.append(k)
                if go(i + 1):
                    return True
                sigma.pop()
                used[k] = False
        return False

    return sigma if go(0) else None
