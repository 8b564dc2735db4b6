"""Finite fields GF(p^m) on canonical integers.

An element is the integer whose base-p digits are its coefficients with
respect to the power basis ``1, x, ..., x^(m-1)`` of the modulus root.
Fields with at most ``table_cap`` elements carry exp/log/Zech tables and
support vectorized arithmetic on numpy integer arrays; larger fields fall
back to polynomial multiplication with modular reduction (scalar only).

:class:`Extension` adds the F_q-structure of F_{q^n} = GF(p^m) for a
subfield F_q = GF(p^e): coordinates over F_q, Frobenius ``x -> x^q``,
relative norm and trace.
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property

import numpy as np

from .errors import FieldError

DEFAULT_TABLE_CAP = 1 << 20

_SPEC_RE = re.compile(r"^\s*gf\(\s*(\d+)\s*\^\s*(\d+)\s*(?:;\s*([-\d,\s]+))?\)\s*$", re.IGNORECASE)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p, e = fs[0], 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# -- polynomials over F_p, coefficient lists in ascending degree ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    m = len(mod) - 1
    for i in range(len(a) - 1, m - 1, -1):
        c = a[i]
        if c:
            base = i - m
            for j in range(m + 1):
                a[base + j] = (a[base + j] - c * mod[j]) % p
    return _trim(a[:m])


def _polymulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _polymod([c % p for c in prod], mod, p)


def _polypowmod(a: list[int], e: int, mod: tuple[int, ...], p: int) -> list[int]:
    result = [1]
    while e:
        if e & 1:
            result = _polymulmod(result, a, mod, p)
        a = _polymulmod(a, a, mod, p)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        # a mod b for non-monic b
        a = list(a)
        db = len(b) - 1
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i] * inv % p
            if c:
                for j in range(db + 1):
                    a[i - db + j] = (a[i - db + j] - c * b[j]) % p
        a, b = b, _trim(a[:db])
    return a


def is_irreducible(coeffs, p: int) -> bool:
    """Ben-Or test: monic ``f`` of degree m is irreducible over F_p iff
    ``gcd(x^(p^i) - x, f) = 1`` for ``1 <= i <= m/2``."""
    f = tuple(int(c) % p for c in coeffs)
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        raise FieldError("modulus must be monic of positive degree")
    if m == 1:
        return True
    h = [0, 1]
    for _ in range(m // 2):
        h = _polypowmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _polygcd(list(f), _trim(diff), p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``m``
    (coefficients compared from the constant term upwards)."""
    for low in itertools.product(range(p), repeat=m):
        f = tuple(low) + (1,)
        if is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


class FiniteField:
    """GF(p^m) with deterministic modulus and primitive element.

    Parameters
    ----------
    p : int
        The characteristic (prime).
    m : int
        Extension degree over the prime field.
    modulus : sequence of int, optional
        Monic irreducible polynomial, ascending coefficients. Defaults to
        the lexicographically smallest one.
    table_cap : int
        Fields with at most this many elements get exp/log tables.
    """

    def __init__(self, p: int, m: int, modulus=None, table_cap: int = DEFAULT_TABLE_CAP):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be positive")
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {m}")
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.order = p**m
        self.table_cap = table_cap
        self._pw = [p**i for i in range(m)]
        self.has_tables = self.order <= table_cap
        self.primitive = self._find_primitive()
        if self.has_tables:
            self._build_tables()

    # -- identity -------------------------------------------------------
    @property
    def key(self) -> tuple:
        return (self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FiniteField({self.spec})"

    @property
    def spec(self) -> str:
        return f"gf({self.p}^{self.m}; {','.join(map(str, self.modulus))})"

    # -- coefficient vectors --------------------------------------------
    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.m):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def from_coeffs(self, c) -> int:
        if len(c) > self.m:
            c = _polymod(list(c), self.modulus, self.p)
        return sum((int(d) % self.p) * w for d, w in zip(c, self._pw))

    def check(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise FieldError(f"{x} is not an element of {self.spec}")
        return x

    # -- slow path ------------------------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        return self.from_coeffs(_polymulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    def _slow_pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self._slow_pow(a, self.order - 2), -e
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        nm1 = self.order - 1
        if nm1 == 1:
            return 1
        exps = [nm1 // r for r in prime_factors(nm1)]
        for g in range(2, self.order):
            if all(self._slow_pow(g, e) != 1 for e in exps):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    def _build_tables(self) -> None:
        p, nm1 = self.p, self.order - 1
        g = self.primitive
        pw = np.array(self._pw, dtype=np.int64)
        block_len = min(nm1, 512)
        first = [1]
        for _ in range(block_len - 1):
            first.append(self._slow_mul(first[-1], g))
        g_block = self._slow_mul(first[-1], g)
        # row i holds the digits of g^block_len * x^i
        step = np.array([self.coeffs(self._slow_mul(g_block, w)) for w in self._pw], dtype=np.int64)
        block = np.array([self.coeffs(x) for x in first], dtype=np.int64)
        exp = np.empty(nm1, dtype=np.int64)
        pos = 0
        while pos < nm1:
            take = min(block_len, nm1 - pos)
            exp[pos:pos + take] = block[:take] @ pw
            block = (block @ step) % p
            pos += take
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(nm1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise FieldError("primitive element check failed")  # pragma: no cover
        self._exp, self._log = exp, log
        # Zech logarithm: log(1 + g^k), -1 where 1 + g^k == 0
        low = exp % p
        one_plus = exp - low + (low + 1) % p
        self._zech = np.where(one_plus == 0, -1, log[one_plus])
        self._exp_l = exp.tolist()
        self._log_l = log.tolist()
        self._zech_l = self._zech.tolist()

    # -- scalar arithmetic ----------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        if self.has_tables:
            la, lb = self._log_l[a], self._log_l[b]
            nm1 = self.order - 1
            z = self._zech_l[(lb - la) % nm1]
            return 0 if z < 0 else self._exp_l[(la + z) % nm1]
        p, r, w = self.p, 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            r += ((da + db) % p) * w
            w *= p
        return r

    def neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        p, r, w = self.p, 0, 1
        while a:
            a, d = divmod(a, p)
            r += ((p - d) % p) * w
            w *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.has_tables:
            return self._exp_l[(self._log_l[a] + self._log_l[b]) % (self.order - 1)]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("zero has no inverse")
        if self.has_tables:
            return self._exp_l[(-self._log_l[a]) % (self.order - 1)]
        return self._slow_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if not a:
            if e < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if e == 0 else 0
        if self.has_tables:
            return self._exp_l[(self._log_l[a] * e) % (self.order - 1)]
        return self._slow_pow(a, e)

    def sum(self, xs) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def log(self, a: int) -> int:
        if not a:
            raise ValueError("log of zero")
        if self.has_tables:
            return self._log_l[a]
        raise FieldError("discrete log needs tables")

    def exp(self, k: int) -> int:
        if self.has_tables:
            return self._exp_l[k % (self.order - 1)]
        return self._slow_pow(self.primitive, k)

    def frobenius(self, x: int, j: int = 1) -> int:
        """``x^(p^j)`` with ``j`` taken mod m."""
        return self.pow(x, pow(self.p, j % self.m))

    def mult_order(self, a: int) -> int:
        if not a:
            raise ValueError("zero has no multiplicative order")
        nm1 = self.order - 1
        k = nm1
        for r in prime_factors(nm1):
            while k % r == 0 and self.pow(a, k // r) == 1:
                k //= r
        return k

    # -- subfields -------------------------------------------------------
    def in_subfield(self, x: int, d: int) -> bool:
        if self.m % d:
            raise FieldError(f"no subfield of degree {d} in {self.spec}")
        return self.frobenius(x, d) == x

    def subfield_elements(self, d: int) -> np.ndarray:
        """Sorted elements of the degree-``d`` subfield (fixed points of ``x^(p^d)``)."""
        if self.m % d:
            raise FieldError(f"no subfield of degree {d} in {self.spec}")
        if self.has_tables:
            step = (self.order - 1) // (self.p**d - 1)
            els = np.concatenate([[0], self._exp[::step]])
            return np.sort(els)
        return np.array([x for x in range(self.order) if self.in_subfield(x, d)], dtype=np.int64)

    def norm(self, x: int, d: int) -> int:
        """Norm onto the degree-``d`` subfield (degrees over the prime field)."""
        if self.m % d:
            raise FieldError(f"{d} does not divide {self.m}")
        return self.pow(x, (self.order - 1) // (self.p**d - 1)) if x else 0

    def trace(self, x: int, d: int) -> int:
        """Trace onto the degree-``d`` subfield (degrees over the prime field)."""
        if self.m % d:
            raise FieldError(f"{d} does not divide {self.m}")
        return self.sum(self.frobenius(x, d * i) for i in range(self.m // d))

    # -- vectorized arithmetic (table fields only) ----------------------
    def _need_tables(self):
        if not self.has_tables:
            raise FieldError(f"vectorized arithmetic needs tables; {self.spec} exceeds the cap")

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def vmul(self, a, b) -> np.ndarray:
        self._need_tables()
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        r = self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def vadd(self, a, b) -> np.ndarray:
        self._need_tables()
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        nm1 = self.order - 1
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % nm1]
        r = np.where(z < 0, 0, self._exp[(la + z) % nm1])
        return np.where(a == 0, b, np.where(b == 0, a, r))

    def vneg(self, a) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        # -1 = g^((N-1)/2) in odd characteristic
        half = (self.order - 1) // 2
        return np.where(a == 0, 0, self._exp[(self._log[a] + half) % (self.order - 1)])

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vpow(self, a, e: int) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        r = self._exp[(self._log[a] * e) % (self.order - 1)]
        if e == 0:
            return np.ones_like(a)
        if e < 0 and (a == 0).any():
            raise ZeroDivisionError("zero has no inverse")
        return np.where(a == 0, 0, r)

    def vinv(self, a) -> np.ndarray:
        return self.vpow(a, -1)

    def vfrobenius(self, a, j: int = 1) -> np.ndarray:
        return self.vpow(a, pow(self.p, j % self.m))

    def vlog(self, a) -> np.ndarray:
        self._need_tables()
        return self._log[np.asarray(a, dtype=np.int64)]

    def vexp(self, k) -> np.ndarray:
        self._need_tables()
        return self._exp[np.asarray(k, dtype=np.int64) % (self.order - 1)]


def make_field(p: int, m: int, modulus=None, table_cap: int = DEFAULT_TABLE_CAP) -> FiniteField:
    """Build GF(p^m); see :class:`FiniteField`."""
    return FiniteField(p, m, modulus, table_cap)


def parse_field_spec(spec: str, table_cap: int = DEFAULT_TABLE_CAP) -> FiniteField:
    """Parse ``gf(p^m)`` or ``gf(p^m; c0,c1,...,1)``."""
    mo = _SPEC_RE.match(spec)
    if not mo:
        raise FieldError(f"malformed field spec {spec!r}")
    p, m = int(mo.group(1)), int(mo.group(2))
    modulus = None
    if mo.group(3):
        modulus = [int(c) for c in mo.group(3).replace(" ", "").split(",") if c]
    return FiniteField(p, m, modulus, table_cap)


class Extension:
    """F_{q^n} as an n-dimensional vector space over its subfield F_q.

    F_q elements are addressed by an index in ``0..q-1`` (position in the
    sorted list :attr:`fq`); for prime q the index equals the element.
    Coordinates refer to the basis ``1, theta, ..., theta^(n-1)`` where
    theta is the modulus root. A coordinate vector is packed into the
    base-q integer ``sum(c_j * q**j)``.
    """

    def __init__(self, field: FiniteField, q: int | None = None):
        q = field.p if q is None else q
        p, e = prime_power(q)
        if p != field.p or field.m % e:
            raise FieldError(f"F_{q} is not a subfield of {field.spec}")
        self.field = field
        self.q, self.e, self.n = q, e, field.m // e
        self.fq = tuple(int(x) for x in field.subfield_elements(e))
        self.fq_index = {x: i for i, x in enumerate(self.fq)}
        F = field
        self.add_q = [[self.fq_index[F.add(a, b)] for b in self.fq] for a in self.fq]
        self.mul_q = [[self.fq_index[F.mul(a, b)] for b in self.fq] for a in self.fq]
        self.neg_q = [self.fq_index[F.neg(a)] for a in self.fq]
        self.inv_q = [0] + [self.fq_index[F.inv(a)] for a in self.fq[1:]]
        theta = field.p if field.m > 1 else 0
        self.basis = tuple(F.pow(theta, j) if j else 1 for j in range(self.n))
        if e > 1:
            self._build_coordinates()

    @property
    def key(self) -> tuple:
        return (self.field.key, self.q)

    def __eq__(self, other):
        return isinstance(other, Extension) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Extension(F_{self.q}^{self.n} = {self.field.spec})"

    @property
    def order(self) -> int:
        return self.field.order

    def _build_coordinates(self) -> None:
        F = self.field
        F._need_tables()
        acc = np.zeros(1, dtype=np.int64)
        for j in range(self.n):
            terms = np.array([F.mul(c, self.basis[j]) for c in self.fq], dtype=np.int64)
            acc = F.vadd(terms[:, None], acc[None, :]).ravel()
        self._elem_of = acc
        idx = np.empty(F.order, dtype=np.int64)
        idx[acc] = np.arange(F.order, dtype=np.int64)
        self._coord_of = idx

    # -- coordinates -------------------------------------------------------
    def packed(self, x: int) -> int:
        """Base-q packed coordinate vector of ``x``."""
        return x if self.e == 1 else int(self._coord_of[x])

    def unpacked(self, code: int) -> int:
        return code if self.e == 1 else int(self._elem_of[code])

    def to_coords(self, x: int) -> list[int]:
        code = self.packed(x)
        out = []
        for _ in range(self.n):
            code, d = divmod(code, self.q)
            out.append(d)
        return out

    def from_coords(self, c) -> int:
        code = 0
        for d in reversed(list(c)):
            code = code * self.q + int(d)
        return self.unpacked(code)

    def vpacked(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        return xs if self.e == 1 else self._coord_of[xs]

    def vunpacked(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return codes if self.e == 1 else self._elem_of[codes]

    # -- F_q structure -----------------------------------------------------
    def scalar(self, i: int) -> int:
        """F_q element with index ``i``."""
        return self.fq[i]

    def in_fq(self, x: int) -> bool:
        return x in self.fq_index

    def frobenius(self, x: int, j: int = 1) -> int:
        """``x^(q^j)``, j reduced mod n."""
        return self.field.frobenius(x, self.e * (j % self.n))

    def norm(self, x: int, d: int = 1) -> int:
        """N_{q^n/q^d}(x)."""
        if self.n % d:
            raise FieldError(f"{d} does not divide {self.n}")
        return self.field.norm(x, self.e * d)

    def trace(self, x: int, d: int = 1) -> int:
        """Tr_{q^n/q^d}(x)."""
        if self.n % d:
            raise FieldError(f"{d} does not divide {self.n}")
        return self.field.trace(x, self.e * d)

    def subfield(self, d: int) -> np.ndarray:
        """Sorted elements of F_{q^d}."""
        if self.n % d:
            raise FieldError(f"{d} does not divide {self.n}")
        return self.field.subfield_elements(self.e * d)

    def in_subfield(self, x: int, d: int) -> bool:
        return self.field.in_subfield(x, self.e * d)

    def automorphisms(self, linear: bool = False) -> list[int]:
        """Exponents j of the automorphisms ``x -> x^(p^j)``; only the
        F_q-linear ones (j a multiple of e) when ``linear``."""
        step = self.e if linear else 1
        return list(range(0, self.field.m, step))

    @cached_property
    def class_count(self) -> int:
        """Number of F_q*-classes of nonzero elements, (q^n-1)/(q-1)."""
        return (self.order - 1) // (self.q - 1)

    def coset_reps(self) -> np.ndarray:
        """Representatives g^0, ..., g^(M-1) of F_{q^n}^*/F_q^*, M = (q^n-1)/(q-1)."""
        return self.field.vexp(np.arange(self.class_count))

    def is_class_rep(self, xs) -> np.ndarray:
        """Mask of nonzero elements that are the chosen F_q*-class representative."""
        logs = self.field.vlog(xs)
        return (np.asarray(xs) != 0) & (logs < self.class_count)

    # -- vectorized coordinates -------------------------------------------
    @cached_property
    def qtables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """F_q arithmetic on indices: (add, mul, neg, inv) as numpy arrays."""
        return (np.array(self.add_q, dtype=np.int64), np.array(self.mul_q, dtype=np.int64),
                np.array(self.neg_q, dtype=np.int64), np.array(self.inv_q, dtype=np.int64))

    def coords_array(self, xs) -> np.ndarray:
        """Coordinates over F_q of each element, shape ``(len(xs), n)``."""
        codes = self.vpacked(xs)
        out = np.empty((codes.size, self.n), dtype=np.int64)
        for j in range(self.n):
            codes, out[:, j] = np.divmod(codes, self.q)
        return out

    def elements_from_coords(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64).reshape(-1, self.n)
        weights = self.q ** np.arange(self.n, dtype=np.int64)
        return self.vunpacked(c @ weights)

    def subfield_generator(self, d: int) -> int:
        """Generator of F_{q^d}^* derived from the distinguished primitive element."""
        if self.n % d:
            raise FieldError(f"{d} does not divide {self.n}")
        F = self.field
        return F.pow(F.primitive, (F.order - 1) // (self.q**d - 1))

    def subfield_basis(self, d: int) -> list[int]:
        """F_q-basis ``1, g, ..., g^(d-1)`` of F_{q^d}, g its generator."""
        g = self.subfield_generator(d)
        return [self.field.pow(g, i) for i in range(d)]
