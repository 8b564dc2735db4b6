"""Linearized polynomials ``sum a_i x^(q^(i s))`` acting on a subfield F_{q^t}.

A :class:`LinearizedPoly` is stored densely by Frobenius exponent: ``terms[j]``
is the coefficient of ``x^(q^j)`` for ``0 <= j < t``, which is the reduction
modulo ``x^(q^t) - x``. The twist ``s`` only affects how the polynomial is
read as a q^s-polynomial (its coefficient list and q^s-degree).
"""

from __future__ import annotations

from math import gcd

import numpy as np

from . import fqlinalg
from .errors import FieldError, InvariantError, ZeroPolynomialError
from .field import Extension


class LinearizedPoly:
    """A q^s-polynomial over F_{q^t} inside ``ext`` (``t`` defaults to n).

    Parameters
    ----------
    ext : Extension
        Ambient F_{q^n} over F_q.
    coeffs : sequence of int
        ``a_0, ..., a_l``; ``a_i`` multiplies ``x^(q^(i s))``.
    s : int
        Twist exponent.
    t : int, optional
        Degree of the subfield the polynomial acts on; coefficients must lie in it.
    """

    def __init__(self, ext: Extension, coeffs=(), s: int = 1, t: int | None = None):
        t = ext.n if t is None else t
        if ext.n % t:
            raise FieldError(f"F_(q^{t}) is not a subfield of F_(q^{ext.n})")
        if s < 1:
            raise ValueError("twist exponent must be positive")
        F = ext.field
        terms = [0] * t
        for i, a in enumerate(coeffs):
            a = F.check(int(a))
            if a and not ext.in_subfield(a, t):
                raise FieldError(f"coefficient {a} is not in F_(q^{t})")
            j = (i * s) % t
            terms[j] = F.add(terms[j], a)
        self.ext, self.s, self.t = ext, s, t
        self.terms = tuple(terms)

    @classmethod
    def from_terms(cls, ext: Extension, terms, s: int = 1, t: int | None = None) -> "LinearizedPoly":
        f = cls(ext, (), s, t)
        terms = tuple(int(a) for a in terms)
        if len(terms) != f.t:
            raise ValueError("need one term per Frobenius exponent")
        g = gcd(s, f.t)
        if any(a and j % g for j, a in enumerate(terms)):
            raise ValueError(f"terms are not a q^{s}-polynomial")
        f.terms = terms
        return f

    @classmethod
    def identity(cls, ext: Extension, t: int | None = None) -> "LinearizedPoly":
        return cls(ext, [1], 1, t)

    # -- views ------------------------------------------------------------
    @property
    def period(self) -> int:
        """Number of distinct q^s-powers on F_{q^t}: ``t / gcd(s, t)``."""
        return self.t // gcd(self.s, self.t)

    @property
    def coeffs(self) -> list[int]:
        """``a_0, ..., a_l`` in the q^s-reading, trailing zeros removed."""
        out = [self.terms[(i * self.s) % self.t] for i in range(self.period)]
        while out and out[-1] == 0:
            out.pop()
        return out

    @property
    def degree(self) -> int:
        """q^s-degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.terms)

    def __eq__(self, other):
        return (isinstance(other, LinearizedPoly) and self.ext == other.ext
                and self.t == other.t and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ext, self.t, self.terms))

    def __repr__(self):
        parts = [f"{a}*x^(q^{j})" for j, a in enumerate(self.terms) if a]
        return f"LinearizedPoly({' + '.join(parts) or '0'} on F_(q^{self.t}))"

    def __call__(self, x: int) -> int:
        return lp_eval(self, x)

    def __add__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        _compatible(self, other)
        F = self.ext.field
        terms = [F.add(a, b) for a, b in zip(self.terms, other.terms)]
        return LinearizedPoly.from_terms(self.ext, terms, gcd(self.s, other.s), self.t)

    def __sub__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        return self + other.scale(self.ext.field.neg(1))

    def scale(self, c: int) -> "LinearizedPoly":
        """Left multiplication ``c * f(x)``."""
        F = self.ext.field
        return LinearizedPoly.from_terms(self.ext, [F.mul(c, a) for a in self.terms], self.s, self.t)


def _compatible(f: LinearizedPoly, g: LinearizedPoly) -> None:
    if f.ext != g.ext or f.t != g.t:
        raise FieldError("linearized polynomials over different fields")


def lp_eval(f: LinearizedPoly, x: int) -> int:
    ext = f.ext
    F = ext.field
    F.check(x)
    acc = 0
    for j, a in enumerate(f.terms):
        if a:
            acc = F.add(acc, F.mul(a, ext.frobenius(x, j)))
    return acc


def lp_veval(f: LinearizedPoly, xs) -> np.ndarray:
    """Vectorized evaluation on an array of elements (table fields only)."""
    ext = f.ext
    F = ext.field
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for j, a in enumerate(f.terms):
        if a:
            acc = F.vadd(acc, F.vmul(a, F.vfrobenius(xs, ext.e * j)))
    return acc


def lp_compose(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    """``f o g`` reduced modulo ``x^(q^t) - x``."""
    _compatible(f, g)
    ext, t = f.ext, f.t
    F = ext.field
    terms = [0] * t
    for i, a in enumerate(f.terms):
        if not a:
            continue
        for j, b in enumerate(g.terms):
            if b:
                k = (i + j) % t
                terms[k] = F.add(terms[k], F.mul(a, ext.frobenius(b, i)))
    return LinearizedPoly.from_terms(ext, terms, gcd(f.s, g.s), t)


def relative_trace(ext: Extension, x: int, t: int) -> int:
    """Tr_{q^t/q}(x) for x in F_{q^t}."""
    F = ext.field
    return F.sum(ext.frobenius(x, j) for j in range(t))


def relative_norm(ext: Extension, x: int, t: int) -> int:
    """N_{q^t/q}(x) for x in F_{q^t}."""
    return ext.field.pow(x, (ext.q**t - 1) // (ext.q - 1)) if x else 0


def _coord_rows(ext: Extension, xs) -> np.ndarray:
    return np.array([ext.to_coords(int(x)) for x in xs], dtype=np.int64).reshape(len(xs), ext.n)


def image_rank(f: LinearizedPoly) -> int:
    """Rank over F_q of f as a map on F_{q^t}."""
    basis = f.ext.subfield_basis(f.t)
    return fqlinalg.rank(_coord_rows(f.ext, [lp_eval(f, b) for b in basis]), f.ext)


def lp_kernel(f: LinearizedPoly) -> list[int]:
    """F_q-basis of the roots of f in F_{q^t}."""
    ext = f.ext
    basis = ext.subfield_basis(f.t)
    images = _coord_rows(ext, [lp_eval(f, b) for b in basis])
    # x = sum c_i basis_i is a root iff c^T images = 0, i.e. c in the kernel of images^T
    out = []
    for c in fqlinalg.nullspace(images.T, ext):
        acc = 0
        for ci, b in zip(c, basis):
            if ci:
                acc = ext.field.add(acc, ext.field.mul(ext.scalar(int(ci)), b))
        out.append(acc)
    return out


def lp_kernel_dim(f: LinearizedPoly, check: bool = True) -> int:
    """Dimension over F_q of the roots of f in F_{q^t}.

    With ``check`` the Gow bound (kernel dimension at most the q^s-degree,
    for gcd(s, t) = 1) is asserted, and in the equality case the norm
    identity ``N(a_0) = (-1)^(t l) N(a_l)`` as well.
    """
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial vanishes on the whole field")
    k = f.t - image_rank(f)
    if check and gcd(f.s, f.t) == 1:
        a = f.coeffs
        ell = len(a) - 1
        if k > ell:
            raise InvariantError(f"kernel dimension {k} exceeds q^s-degree {ell}")
        if k == ell and ell > 0:
            F = f.ext.field
            lhs = relative_norm(f.ext, a[0], f.t)
            rhs = relative_norm(f.ext, a[ell], f.t)
            if (f.t * ell) % 2:
                rhs = F.neg(rhs)
            if lhs != rhs:
                raise InvariantError("norm identity fails for a polynomial of maximal kernel")
    return k


def dual_basis(ext: Extension, basis, t: int | None = None) -> list[int]:
    """The basis ``B*`` with ``Tr_{q^t/q}(b_i b*_j) = delta_ij`` (t defaults to n)."""
    t = ext.n if t is None else t
    basis = [int(b) for b in basis]
    if len(basis) != t:
        raise ValueError(f"need {t} basis elements, got {len(basis)}")
    F = ext.field
    gram = np.array([[ext.fq_index[relative_trace(ext, F.mul(a, b), t)] for b in basis] for a in basis],
                    dtype=np.int64)
    try:
        ginv = fqlinalg.inverse(gram, ext)
    except ValueError:
        raise ValueError("input is not a basis") from None
    out = []
    for j in range(t):
        acc = 0
        for k in range(t):
            c = int(ginv[k, j])
            if c:
                acc = F.add(acc, F.mul(ext.scalar(c), basis[k]))
        out.append(acc)
    return out


def interpolate(ext: Extension, basis, values, t: int | None = None) -> LinearizedPoly:
    """The unique q-polynomial on F_{q^t} with ``f(basis[j]) = values[j]``.

    ``f(x) = sum_k (sum_j v_j (b*_j)^(q^k)) x^(q^k)`` with ``b*`` the dual basis.
    """
    t = ext.n if t is None else t
    F = ext.field
    dual = dual_basis(ext, basis, t)
    terms = []
    for k in range(t):
        acc = 0
        for v, d in zip(values, dual):
            if v:
                acc = F.add(acc, F.mul(int(v), ext.frobenius(d, k)))
        terms.append(acc)
    return LinearizedPoly.from_terms(ext, terms, 1, t)


def projection_polys(ext: Extension, parts) -> list[LinearizedPoly]:
    """Projections ``p_i`` of F_{q^n} onto the summands of ``U_1 + ... + U_r = F_{q^n}``.

    ``parts`` holds subspaces (anything with ``rows``) or plain lists of basis
    elements. ``p_i(x) = sum_j xi_ij Tr(xi*_ij x)`` over the concatenated basis.
    """
    bases = [list(getattr(P, "rows", P)) for P in parts]
    flat = [int(b) for B in bases for b in B]
    if len(flat) != ext.n or fqlinalg.rank(_coord_rows(ext, flat), ext) != ext.n:
        raise ValueError("parts do not form a direct-sum decomposition of the field")
    out = []
    pos = 0
    for B in bases:
        values = [0] * ext.n
        values[pos:pos + len(B)] = B
        out.append(interpolate(ext, flat, values))
        pos += len(B)
    return out
