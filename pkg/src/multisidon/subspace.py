"""F_q-subspaces of F_{q^n} in canonical form.

A :class:`Subspace` stores the reduced row-echelon basis of its coordinate
matrix (w.r.t. the fixed basis ``1, theta, ..., theta^(n-1)``), with each
row turned back into a field element. Equal subspaces therefore have equal
``rows`` and compare/hash equal.

Scans over scalars ``alpha`` only visit representatives of
F_{q^n}^*/F_q^*, since ``dim(U cap alpha V)`` is invariant under F_q^*.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import fqlinalg
from .errors import FieldError
from .field import Extension

# elements per chunk in vectorized alpha scans
SCAN_CHUNK = 1 << 22


@dataclass(frozen=True)
class Subspace:
    ext: Extension
    rows: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def field(self):
        return self.ext.field

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rows={list(self.rows)})"

    def coord_matrix(self) -> np.ndarray:
        return self.ext.coords_array(list(self.rows)) if self.rows else np.zeros((0, self.ext.n), np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        """All q^k elements; index i has base-q digits = coefficients on ``rows``."""
        F = self.field
        fq = np.array(self.ext.fq, dtype=np.int64)
        els = np.zeros(1, dtype=np.int64)
        for r in self.rows:
            els = F.vadd(F.vmul(fq, r)[:, None], els[None, :]).ravel()
        return els

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.ext.order, dtype=bool)
        m[self.elements] = True
        return m

    @cached_property
    def class_reps(self) -> np.ndarray:
        """The nonzero elements that represent their F_q^*-class (sorted)."""
        els = self.elements
        return np.sort(els[self.ext.is_class_rep(els)])

    def __contains__(self, x: int) -> bool:
        if self.field.has_tables:
            return bool(self.mask[int(x)])
        return _rank_of(self.ext, list(self.rows) + [int(x)]) == self.dim

    def contains_all(self, xs) -> bool:
        return bool(self.mask[np.asarray(xs, dtype=np.int64)].all())


def _rank_of(ext: Extension, xs) -> int:
    xs = [int(x) for x in xs]
    if not xs:
        return 0
    return fqlinalg.rank(ext.coords_array(xs), ext)


def span_canonical(ext: Extension, vectors) -> Subspace:
    """Canonical F_q-span of ``vectors``."""
    vectors = [ext.field.check(int(v)) for v in vectors]
    if not vectors:
        return Subspace(ext, ())
    R, _ = fqlinalg.rref(ext.coords_array(vectors), ext)
    return Subspace(ext, tuple(int(x) for x in ext.elements_from_coords(R)))


def zero_subspace(ext: Extension) -> Subspace:
    return Subspace(ext, ())


def subfield_subspace(ext: Extension, d: int) -> Subspace:
    """F_{q^d} as an F_q-subspace."""
    return span_canonical(ext, ext.subfield_basis(d))


def _same_ext(U: Subspace, V: Subspace) -> None:
    if U.ext != V.ext:
        raise FieldError("subspaces live in different fields")


def scalar_mul(alpha: int, U: Subspace) -> Subspace:
    if not alpha:
        raise ValueError("scalar must be nonzero")
    F = U.field
    return span_canonical(U.ext, [F.mul(alpha, r) for r in U.rows])


def intersect_dim(U: Subspace, V: Subspace) -> int:
    _same_ext(U, V)
    return U.dim + V.dim - _rank_of(U.ext, list(U.rows) + list(V.rows))


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    _same_ext(U, V)
    return span_canonical(U.ext, list(U.rows) + list(V.rows))


def frobenius_image(U: Subspace, j: int) -> Subspace:
    """Image of U under ``x -> x^(p^j)``."""
    F = U.field
    return span_canonical(U.ext, [F.frobenius(r, j) for r in U.rows])


def alpha_intersection_dims(U: Subspace, V: Subspace, alphas=None) -> np.ndarray:
    """``dim(U cap alpha V)`` for each alpha (default: all class representatives)."""
    _same_ext(U, V)
    ext, F = U.ext, U.field
    if alphas is None:
        alphas = ext.coset_reps()
    alphas = np.asarray(alphas, dtype=np.int64)
    reps = V.class_reps
    out = np.zeros(alphas.size, dtype=np.int64)
    if reps.size == 0 or U.dim == 0:
        return out
    step = max(1, SCAN_CHUNK // reps.size)
    mask = U.mask
    for lo in range(0, alphas.size, step):
        a = alphas[lo:lo + step]
        prod = F.vmul(a[:, None], reps[None, :])
        out[lo:lo + step] = mask[prod].sum(axis=1)
    # c classes in the intersection <=> (q^d - 1)/(q - 1) = c
    q = ext.q
    dims = np.zeros_like(out)
    total = out * (q - 1) + 1
    while (total > 1).any():
        big = total > 1
        dims[big] += 1
        total[big] //= q
    return dims


@dataclass(frozen=True)
class OrbitInfo:
    """Largest d with U an F_{q^d}-subspace, and the orbit size (q^n-1)/(q^d-1)."""

    degree: int
    size: int


def orbit_stabilizer(U: Subspace) -> OrbitInfo:
    if U.dim == 0:
        raise ValueError("the zero subspace has no orbit")
    ext = U.ext
    n, k = ext.n, U.dim
    for d in sorted((d for d in range(1, n + 1) if n % d == 0 and k % d == 0), reverse=True):
        if d == 1:
            break
        gamma = ext.subfield_generator(d)
        if _is_closed_under(U, gamma):
            return OrbitInfo(d, (ext.order - 1) // (ext.q**d - 1))
    return OrbitInfo(1, (ext.order - 1) // (ext.q - 1))


def _is_closed_under(U: Subspace, gamma: int) -> bool:
    F = U.field
    if F.has_tables:
        return U.contains_all(F.vmul(gamma, np.array(U.rows, dtype=np.int64)))
    return all(F.mul(gamma, r) in U for r in U.rows)


def stabilizer_degree(U: Subspace) -> int:
    return orbit_stabilizer(U).degree


def product_span(U: Subspace, V: Subspace) -> Subspace:
    """F_q-span of ``{uv : u in U, v in V}``."""
    _same_ext(U, V)
    F = U.field
    return span_canonical(U.ext, [F.mul(a, b) for a in U.rows for b in V.rows])


def quotient_set(U: Subspace) -> np.ndarray:
    """Sorted array of ``{u / v : u in U, v in U, v != 0}``."""
    if U.dim == 0:
        raise ValueError("the zero subspace has no quotients")
    F = U.field
    els = U.elements
    nz = els[els != 0]
    return np.unique(F.vmul(els[:, None], F.vinv(nz)[None, :]))


def random_subspace(ext: Extension, k: int, rng: np.random.Generator) -> Subspace:
    """Uniformly random k-dimensional subspace (rejection on full rank)."""
    if not 0 <= k <= ext.n:
        raise ValueError(f"dimension {k} out of range for n={ext.n}")
    while True:
        vecs = [int(x) for x in rng.integers(0, ext.order, size=k)]
        U = span_canonical(ext, vecs)
        if U.dim == k:
            return U
