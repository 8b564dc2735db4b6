"""Linear sets ``L_U`` in PG(r-1, q^n) defined by F_q-subspaces of F_{q^n}^r.

Point weights come from vector multiplicities: a point P of weight w is hit
by exactly ``q^w - 1`` nonzero vectors of U, so enumerating the ``q^k``
vectors of U is enough and the points of PG(r-1, q^n) are never listed.
A point is keyed by its representative whose first nonzero coordinate is 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import fqlinalg
from .errors import CapExceededError, InvariantError, ParameterError
from .field import Extension
from .linearized import lp_veval, projection_polys
from .sidon import SubspaceFamily, is_multi_sidon, is_sidon, pairwise_intersection_ok
from .subspace import Subspace, alpha_intersection_dims, quotient_set, span_canonical

DEFAULT_CAP = 3**16
# vectors per enumeration block
BLOCK = 1 << 18


@dataclass(frozen=True)
class VectorSpace:
    """F_q-subspace of F_{q^n}^r; ``basis`` rows are r-tuples of field elements
    in reduced row-echelon form over F_q (coordinates block by block)."""

    ext: Extension
    r: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coord_matrix(self) -> np.ndarray:
        return _coords(self.ext, self.basis, self.r)

    def iter_vectors(self, block: int = BLOCK):
        """Yield every vector (zero included) as arrays of shape ``(m, r)``."""
        yield from _enumerate(self.ext, self.basis, self.r, block)


@dataclass(frozen=True)
class ProductSpace(VectorSpace):
    factors: tuple[Subspace, ...] = ()

    def iter_vectors(self, block: int = BLOCK):
        els = [U.elements for U in self.factors]
        # enumerate the last factors in full and loop over the first ones
        sizes = [e.size for e in els]
        split = len(els)
        inner = 1
        while split > 0 and inner * sizes[split - 1] <= max(block, sizes[-1]):
            split -= 1
            inner *= sizes[split]
        tail = np.array(list(itertools.product(*els[split:])), dtype=np.int64).reshape(-1, self.r - split)
        for head in itertools.product(*els[:split]):
            out = np.empty((tail.shape[0], self.r), dtype=np.int64)
            out[:, :split] = head
            out[:, split:] = tail
            yield out


def _coords(ext: Extension, vectors, r: int) -> np.ndarray:
    if not len(vectors):
        return np.zeros((0, r * ext.n), dtype=np.int64)
    arr = np.asarray(vectors, dtype=np.int64).reshape(-1, r)
    return np.concatenate([ext.coords_array(arr[:, i]) for i in range(r)], axis=1)


def _from_coords(ext: Extension, M: np.ndarray, r: int) -> tuple[tuple[int, ...], ...]:
    n = ext.n
    cols = [ext.elements_from_coords(M[:, i * n:(i + 1) * n]) for i in range(r)]
    return tuple(tuple(int(c[j]) for c in cols) for j in range(M.shape[0]))


def vector_span(ext: Extension, vectors, r: int) -> VectorSpace:
    """Canonical F_q-span of vectors in F_{q^n}^r."""
    R, _ = fqlinalg.rref(_coords(ext, vectors, r), ext)
    return VectorSpace(ext, r, _from_coords(ext, R, r))


def product_space(factors) -> ProductSpace:
    factors = tuple(factors)
    if not factors:
        raise ParameterError("need at least one factor")
    ext = factors[0].ext
    r = len(factors)
    rows = []
    for i, U in enumerate(factors):
        for x in U.rows:
            v = [0] * r
            v[i] = x
            rows.append(tuple(v))
    return ProductSpace(ext, r, tuple(rows), factors)


def _enumerate(ext: Extension, basis, r: int, block: int):
    F = ext.field
    fq = np.array(ext.fq, dtype=np.int64)
    basis = [np.array(b, dtype=np.int64) for b in basis]
    low = 0
    while low < len(basis) and ext.q ** (low + 1) <= max(block, ext.q):
        low += 1
    table = np.zeros((1, r), dtype=np.int64)
    for b in basis[:low]:
        mult = F.vmul(fq[:, None], b[None, :])
        table = F.vadd(mult[:, None, :], table[None, :, :]).reshape(-1, r)
    high = basis[low:]
    for coeffs in itertools.product(range(ext.q), repeat=len(high)):
        shift = np.zeros(r, dtype=np.int64)
        for c, b in zip(coeffs, high):
            if c:
                shift = F.vadd(shift, F.vmul(ext.fq[c], b))
        yield F.vadd(table, shift[None, :])


def _normalize(ext: Extension, X: np.ndarray) -> np.ndarray:
    """Scale nonzero rows so the first nonzero coordinate is 1."""
    F = ext.field
    nz = X != 0
    first = nz.argmax(axis=1)
    lead = X[np.arange(X.shape[0]), first]
    return F.vmul(X, F.vinv(lead)[:, None])


def _point_keys(ext: Extension, Y: np.ndarray) -> np.ndarray:
    N = ext.order
    r = Y.shape[1]
    if N ** r < 2**62:
        w = N ** np.arange(r, dtype=np.int64)
        return Y @ w
    raise CapExceededError("projective space too large to key points as int64")


def point_key(ext: Extension, v) -> int:
    Y = _normalize(ext, np.asarray(v, dtype=np.int64).reshape(1, -1))
    return int(_point_keys(ext, Y)[0])


def key_to_point(ext: Extension, key: int, r: int) -> tuple[int, ...]:
    out = []
    for _ in range(r):
        key, c = divmod(key, ext.order)
        out.append(c)
    return tuple(out)


def point_multiplicities(V: VectorSpace, cap: int = DEFAULT_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Sorted point keys of L_V and the number of nonzero vectors on each."""
    ext = V.ext
    if ext.q ** V.rank > cap:
        raise CapExceededError(f"enumerating q^k = {ext.q}^{V.rank} vectors exceeds the cap {cap}")
    keys_acc = np.zeros(0, dtype=np.int64)
    cnt_acc = np.zeros(0, dtype=np.int64)
    for X in V.iter_vectors():
        X = X[(X != 0).any(axis=1)]
        if X.size == 0:
            continue
        keys, counts = np.unique(_point_keys(ext, _normalize(ext, X)), return_counts=True)
        allk = np.concatenate([keys_acc, keys])
        allc = np.concatenate([cnt_acc, counts])
        keys_acc, inv = np.unique(allk, return_inverse=True)
        cnt_acc = np.bincount(inv, weights=allc).astype(np.int64)
    return keys_acc, cnt_acc


def _weights_from_counts(q: int, counts: np.ndarray) -> np.ndarray:
    w = np.zeros_like(counts)
    total = counts + 1
    while (total > 1).any():
        big = total > 1
        w[big] += 1
        total[big] //= q
    if not np.array_equal(q ** w - 1, counts):
        raise InvariantError("vector multiplicity is not of the form q^w - 1")
    return w


@dataclass(frozen=True)
class WeightSpectrum:
    q: int
    n: int
    r: int
    k: int
    counts: dict
    size: int
    n0: int
    identities_ok: bool

    def to_dict(self) -> dict:
        return {"counts": {str(w): c for w, c in sorted(self.counts.items())}, "size": self.size,
                "N0": self.n0, "rank": self.k, "identities_ok": self.identities_ok}


def spectrum_identities(q: int, k: int, counts: dict, size: int) -> dict:
    """The three counting relations for a rank-k linear set."""
    theta = lambda i: (q**i - 1) // (q - 1)  # noqa: E731
    return {
        "size-bound": size <= theta(k),
        "size-sum": size == sum(counts.values()),
        "weighted-sum": sum(N * theta(w) for w, N in counts.items()) == theta(k),
    }


def weight_spectrum(V: VectorSpace, cap: int = DEFAULT_CAP) -> WeightSpectrum:
    ext = V.ext
    q, n, r, k = ext.q, ext.n, V.r, V.rank
    if k < 1:
        raise ParameterError("rank must be at least 1")
    _, cnt = point_multiplicities(V, cap)
    w = _weights_from_counts(q, cnt)
    vals, num = np.unique(w, return_counts=True)
    counts = {int(a): int(b) for a, b in zip(vals, num)}
    size = int(cnt.size)
    ok = all(spectrum_identities(q, k, counts, size).values())
    total_points = (q ** (n * r) - 1) // (q**n - 1)
    return WeightSpectrum(q, n, r, k, counts, size, total_points - size, ok)


def max_rank_spectrum_formula(q: int, n: int, r: int) -> dict:
    """Closed-form N_1, N_{n/2}, N_0 and |L| for rank rn/2 with r heavy points of weight n/2."""
    h = n // 2
    n1 = sum(q**i for i in range(h, r * h)) - (r - 1) * sum(q**i for i in range(h))
    size = sum(q**i for i in range(h, r * h)) - (r - 1) * sum(q**i for i in range(1, h)) + 1
    total = (q ** (r * n) - 1) // (q**n - 1)
    return {"N1": n1, "Nh": r, "N0": total - n1 - r, "size": size}


@dataclass(frozen=True)
class HeavyPointReport:
    points: list
    exactly_coordinate: bool
    within_half: bool
    rank_bound_ok: bool
    asserted: bool

    def to_dict(self) -> dict:
        return {"points": [{"point": list(p), "weight": w} for p, w in self.points],
                "exactly_coordinate": self.exactly_coordinate, "within_half": self.within_half,
                "rank_bound_ok": self.rank_bound_ok, "asserted": self.asserted}


def heavy_points_analysis(V: VectorSpace, cap: int = DEFAULT_CAP, multi_sidon: bool | None = None) -> HeavyPointReport:
    """Points of weight >= 2.

    For a product of a multi-Sidon family (checked unless ``multi_sidon`` is
    given) the heavy points must be exactly the coordinate points with the
    factor dimensions as weights; whenever those are the only heavy points
    and the rank is at most (r-1)n, weights are at most n/2 and the rank is at
    most rn/2. Failures raise :class:`InvariantError`.
    """
    ext = V.ext
    keys, cnt = point_multiplicities(V, cap)
    w = _weights_from_counts(ext.q, cnt)
    heavy = [(key_to_point(ext, int(kk), V.r), int(ww)) for kk, ww in zip(keys, w) if ww >= 2]
    heavy.sort()
    expected = None
    factors = getattr(V, "factors", ())
    if factors:
        expected = sorted((tuple(1 if j == i else 0 for j in range(V.r)), U.dim)
                          for i, U in enumerate(factors) if U.dim >= 2)
    exactly = expected is not None and heavy == expected
    coord_only = all(sum(1 for c in p if c) == 1 for p, _ in heavy)
    n = ext.n
    within = all(2 * ww <= n for _, ww in heavy)
    rank_ok = 2 * V.rank <= V.r * n
    asserted = False
    if factors and all(U.dim >= 2 for U in factors):
        if multi_sidon is None:
            multi_sidon = bool(is_multi_sidon(SubspaceFamily.of(factors)))
        if multi_sidon:
            asserted = True
            if not exactly:
                raise InvariantError("multi-Sidon product has heavy points off the coordinate points")
    if coord_only and factors and V.rank <= (V.r - 1) * n and len(heavy) == V.r:
        asserted = True
        if not (within and rank_ok):
            raise InvariantError("heavy point weight above n/2 or rank above rn/2")
    return HeavyPointReport(heavy, exactly, within, rank_ok, asserted)


def characterization_conditions(fam: SubspaceFamily, cap: int = DEFAULT_CAP) -> dict:
    """The three equivalent conditions on a family with all k_i >= 2:

    ``i``: the heavy points of U_1 x ... x U_r are exactly the coordinate
    points, with weights k_i; ``ii``: the quotient sets of distinct members
    meet only in F_q; ``iii``: ``dim(U_i cap alpha U_j) <= 1`` for i != j.
    """
    if min(fam.dims) < 2:
        raise ParameterError("every member needs dimension at least 2")
    ext = fam.ext
    V = product_space(list(fam))
    keys, cnt = point_multiplicities(V, cap)
    w = _weights_from_counts(ext.q, cnt)
    heavy = sorted((key_to_point(ext, int(k), V.r), int(x)) for k, x in zip(keys, w) if x >= 2)
    coord = sorted((tuple(1 if j == i else 0 for j in range(V.r)), U.dim) for i, U in enumerate(fam))
    fq = np.array(sorted(ext.fq), dtype=np.int64)
    quots = [quotient_set(U) for U in fam]
    cond_ii = all(np.array_equal(np.intersect1d(quots[i], quots[j]), fq)
                  for i in range(fam.r) for j in range(i + 1, fam.r))
    return {"i": heavy == coord, "ii": cond_ii, "iii": pairwise_intersection_ok(fam) is None}


def sidon_linearset_size(U: Subspace, cap: int = DEFAULT_CAP) -> int:
    """|L_{U x U}| for a Sidon space, checked against its closed form."""
    if U.dim < 2 or not is_sidon(U):
        raise ParameterError("input is not a Sidon space")
    q, k = U.ext.q, U.dim
    spec = weight_spectrum(product_space([U, U]), cap)
    expected = (q**k - 1) // (q - 1) * (q**k - q) + q + 1
    if spec.size != expected:
        raise InvariantError(f"|L_(UxU)| = {spec.size}, closed form gives {expected}")
    return spec.size


def multi_sidon_rank_bound(fam: SubspaceFamily) -> tuple[int, int]:
    """``(sum (q^k_i - 1)/(q - 1) (q^k_i - q), q^n - q)``; the first never
    exceeds the second for a multi-Sidon family."""
    q, n = fam.ext.q, fam.ext.n
    lhs = sum((q**k - 1) // (q - 1) * (q**k - q) for k in fam.dims)
    return lhs, q**n - q


@dataclass(frozen=True)
class HyperplaneWeights:
    counts: dict
    total: int
    stated_values: tuple
    transfer_values: dict

    def to_dict(self) -> dict:
        return {"counts": {str(w): c for w, c in sorted(self.counts.items())}, "total": self.total,
                "stated_values": list(self.stated_values),
                "transfer_values": {str(a): b for a, b in sorted(self.transfer_values.items())}}


def hyperplane_weights(V: VectorSpace, cap: int = DEFAULT_CAP) -> HyperplaneWeights:
    """Weights of hyperplanes w.r.t. the dual linear set, by weight transfer.

    The hyperplane dual to a point of weight w gets ``w + rn - k - n``. The
    report also lists the three values ``rn/2 - n + {0, 1, r}`` named by the
    three-weight statement (``transfer_values`` maps point weight to dual weight).
    """
    ext = V.ext
    q, n, r, k = ext.q, ext.n, V.r, V.rank
    if 2 * k != r * n:
        raise ParameterError(f"rank {k} is not rn/2 = {r * n / 2}")
    report = heavy_points_analysis(V, cap)
    if not (len(report.points) == r and all(sum(1 for c in p if c) == 1 for p, _ in report.points)):
        raise ParameterError("heavy points are not r coordinate points")
    spec = weight_spectrum(V, cap)
    shift = r * n - k - n
    counts = {}
    transfer = {0: shift}
    counts[shift] = spec.n0
    for w, N in spec.counts.items():
        counts[w + shift] = counts.get(w + shift, 0) + N
        transfer[w] = w + shift
    total = (q ** (r * n) - 1) // (q**n - 1)
    if sum(counts.values()) != total:
        raise InvariantError("hyperplane counts do not partition the hyperplanes")
    base = r * n // 2 - n
    return HyperplaneWeights(counts, total, (base, base + 1, base + r), transfer)


# -- structure normalization --------------------------------------------------

def _field_inverse(ext: Extension, M: list[list[int]]) -> list[list[int]]:
    F = ext.field
    r = len(M)
    A = [list(row) + [1 if i == j else 0 for j in range(r)] for i, row in enumerate(M)]
    for c in range(r):
        piv = next((i for i in range(c, r) if A[i][c]), None)
        if piv is None:
            raise ParameterError("the given points are dependent")
        A[c], A[piv] = A[piv], A[c]
        inv = F.inv(A[c][c])
        A[c] = [F.mul(inv, x) for x in A[c]]
        for i in range(r):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return [row[r:] for row in A]


def apply_matrix(ext: Extension, M: list[list[int]], V: VectorSpace) -> VectorSpace:
    """Image of V under ``v -> M v`` (M over F_{q^n}, acting on column vectors)."""
    F = ext.field
    r = V.r
    rows = []
    for v in V.basis:
        rows.append(tuple(F.sum(F.mul(M[i][j], v[j]) for j in range(r)) for i in range(r)))
    return vector_span(ext, rows, r)


@dataclass(frozen=True)
class Normalization:
    product: ProductSpace
    matrix: list
    inverse: list
    lambdas: tuple


def structure_normalize(W: VectorSpace, points, find_direct_sum: bool = True) -> Normalization:
    """Move the given independent points to the coordinate points and read off
    the factors; with rank k <= n, rescale factors so their sum is direct.

    ``matrix`` sends W to ``product``; ``inverse`` sends it back.
    """
    ext = W.ext
    r, n, k = W.r, ext.n, W.rank
    points = [tuple(int(x) for x in p) for p in points]
    if len(points) != r:
        raise ParameterError(f"need {r} points")
    cols = [[points[j][i] for j in range(r)] for i in range(r)]
    Minv = _field_inverse(ext, cols)
    U = apply_matrix(ext, Minv, W)
    C = U.coord_matrix()
    factors = []
    for i in range(r):
        other = np.concatenate([C[:, j * n:(j + 1) * n] for j in range(r) if j != i], axis=1)
        combos = fqlinalg.nullspace(other.T, ext) if other.size else np.eye(k, dtype=np.int64)
        block = fqlinalg.matmul(combos, C[:, i * n:(i + 1) * n], ext) if combos.size else np.zeros((0, n), np.int64)
        factors.append(span_canonical(ext, [int(x) for x in ext.elements_from_coords(block)] if block.size else []))
    if sum(U_i.dim for U_i in factors) != k:
        raise ParameterError("point weights do not add up to the rank")
    if k > (r - 1) * n:
        raise ParameterError("rank exceeds (r-1)n")
    lambdas = [1] * r
    F = ext.field
    if find_direct_sum and k <= n:
        reps = ext.coset_reps()
        acc = factors[0]
        for i in range(1, r):
            d = alpha_intersection_dims(acc, factors[i], reps)
            ok = np.nonzero(d == 0)[0]
            if ok.size == 0:
                raise InvariantError("no scalar makes the sum direct")
            lam = int(reps[ok[0]])
            lambdas[i] = lam
            factors[i] = span_canonical(ext, [F.mul(lam, x) for x in factors[i].rows])
            acc = span_canonical(ext, list(acc.rows) + list(factors[i].rows))
    matrix = [[F.mul(lambdas[i], Minv[i][j]) for j in range(r)] for i in range(r)]
    inverse = [[F.mul(cols[i][j], F.inv(lambdas[j])) for j in range(r)] for i in range(r)]
    return Normalization(product_space(factors), matrix, inverse, tuple(lambdas))


# -- projection representation -------------------------------------------------

@dataclass(frozen=True)
class ProjectionForm:
    polys: list
    points_equal: bool
    size: int


def projection_form(parts, cap: int = DEFAULT_CAP) -> ProjectionForm:
    """``L_p = {<(x, p_2(x), ..., p_r(x))>}`` for ``U_1 + ... + U_r = F_{q^n}``
    (direct), compared point by point with the image of ``U_1 x ... x U_r``
    under ``(u_1, ..., u_r) -> (u_1 + ... + u_r, u_2, ..., u_r)``."""
    parts = list(parts)
    ext = parts[0].ext
    r = len(parts)
    polys = projection_polys(ext, parts)
    if ext.order > cap:
        raise CapExceededError("field too large for exhaustive comparison")
    xs = np.arange(1, ext.order, dtype=np.int64)
    X = np.stack([xs] + [lp_veval(p, xs) for p in polys[1:]], axis=1)
    lp_keys = np.unique(_point_keys(ext, _normalize(ext, X)))
    ones = [[1] * r] + [[1 if i == j else 0 for j in range(r)] for i in range(1, r)]
    image = apply_matrix(ext, ones, product_space(parts))
    img_keys, _ = point_multiplicities(image, cap)
    return ProjectionForm(polys, bool(np.array_equal(lp_keys, img_keys)), int(lp_keys.size))
