"""Cyclic subspace codes (unions of scalar orbits) and an operator channel.

A codeword ``alpha U`` is identified by its sorted element array, which is
a canonical key for the subspace; canonical bases are only built on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fqlinalg
from .errors import FieldError, OrbitOverlapError, ParameterError
from .field import Extension
from .sidon import EquivalenceWitness, SubspaceFamily, family_equivalence
from .subspace import (Subspace, alpha_intersection_dims, intersect_dim, orbit_stabilizer,
                       scalar_mul, span_canonical)

# codeword keys per vectorized block in orbit materialization
ORBIT_BLOCK = 1 << 22


def subspace_distance(U: Subspace, V: Subspace) -> int:
    if U.ext != V.ext:
        raise FieldError("subspaces live in different fields")
    return U.dim + V.dim - 2 * intersect_dim(U, V)


@dataclass
class CyclicCode:
    ext: Extension
    t: int
    generators: tuple[Subspace, ...]
    orbit_sizes: tuple[int, ...]
    keys: np.ndarray  # (size, q^t) sorted elements of each codeword
    owner: np.ndarray  # generator index of each codeword
    alphas: np.ndarray  # alpha with codeword = alpha * generator
    _min_distance: int | None = field(default=None, repr=False)
    _distance_done: bool = field(default=False, repr=False)

    @property
    def size(self) -> int:
        return int(self.keys.shape[0])

    def __len__(self):
        return self.size

    def codeword(self, i: int) -> Subspace:
        return scalar_mul(int(self.alphas[i]), self.generators[int(self.owner[i])])

    @cached_property
    def index(self) -> dict:
        return {row.tobytes(): i for i, row in enumerate(self.keys)}

    def find(self, U: Subspace) -> int | None:
        """Codeword index of U, or None."""
        if U.dim != self.t:
            return None
        return self.index.get(np.sort(U.elements).tobytes())

    def min_distance(self) -> int | None:
        if not self._distance_done:
            self._min_distance = min_distance(self)
            self._distance_done = True
        return self._min_distance

    def to_dict(self, with_distance: bool = True) -> dict:
        from .serialize import subspace_to_json
        out = {"field": self.ext.field.spec, "q": self.ext.q, "t": self.t,
               "generators": [subspace_to_json(U)["basis"] for U in self.generators],
               "orbit_sizes": list(self.orbit_sizes), "size": self.size}
        if with_distance:
            out["min_distance"] = self.min_distance()
        return out


def build_code(fam: SubspaceFamily) -> CyclicCode:
    """Materialize ``C = union of {alpha U_i}`` with orbit-size and disjointness checks."""
    dims = set(fam.dims)
    if len(dims) != 1:
        raise ParameterError(f"generators have mixed dimensions {sorted(dims)}")
    t = dims.pop()
    ext = fam.ext
    F = ext.field
    reps = ext.coset_reps()
    seen: dict[bytes, tuple[int, int]] = {}
    keys, owner, alphas, sizes = [], [], [], []
    for gi, U in enumerate(fam):
        expected = orbit_stabilizer(U).size
        els = U.elements
        step = max(1, ORBIT_BLOCK // els.size)
        count = 0
        for lo in range(0, reps.size, step):
            a = reps[lo:lo + step]
            block = np.sort(F.vmul(a[:, None], els[None, :]), axis=1)
            for ai, row in zip(a, block):
                kb = row.tobytes()
                hit = seen.get(kb)
                if hit is None:
                    seen[kb] = (gi, int(ai))
                    keys.append(row)
                    owner.append(gi)
                    alphas.append(int(ai))
                    count += 1
                elif hit[0] != gi:
                    # alpha U_gi = beta U_j, so U_gi = (beta/alpha) U_j
                    raise OrbitOverlapError(gi, hit[0], F.div(hit[1], int(ai)))
        if count != expected:
            raise ParameterError(f"orbit {gi} has {count} codewords, stabilizer predicts {expected}")
        sizes.append(count)
    return CyclicCode(ext, t, tuple(fam), tuple(sizes),
                      np.array(keys, dtype=np.int64).reshape(-1, ext.q**t),
                      np.array(owner, dtype=np.int64), np.array(alphas, dtype=np.int64))


def distance_profile(C: CyclicCode) -> dict:
    """Largest ``dim(U_i cap alpha U_j)`` over distinct codewords, per generator pair."""
    reps = C.ext.coset_reps()
    out = {}
    G = C.generators
    for i in range(len(G)):
        for j in range(i, len(G)):
            d = alpha_intersection_dims(G[i], G[j], reps)
            d = d[d < C.t]  # alpha U_j = U_i is the same codeword
            out[(i, j)] = int(d.max()) if d.size else None
    return out


def min_distance(C: CyclicCode) -> int | None:
    """Exact minimum subspace distance; None for a code with one codeword."""
    if C.size < 2:
        return None
    best = max(v for v in distance_profile(C).values() if v is not None)
    return 2 * C.t - 2 * best


def min_distance_bruteforce(C: CyclicCode) -> int | None:
    """Pairwise scan over all codewords (for small codes and tests)."""
    if C.size < 2:
        return None
    q = C.ext.q
    masks = np.zeros((C.size, C.ext.order), dtype=bool)
    masks[np.arange(C.size)[:, None], C.keys] = True
    best = 0
    for i in range(C.size):
        hits = masks[i + 1:][np.arange(C.size - i - 1)[:, None], C.keys[i][None, :]].sum(axis=1)
        if hits.size:
            best = max(best, int(hits.max()))
    d = int(round(np.log(best) / np.log(q)))
    return 2 * C.t - 2 * d


@dataclass(frozen=True)
class CodeEquivalence:
    mode: str
    witness: EquivalenceWitness | None

    def __bool__(self):
        return self.witness is not None

    def to_dict(self) -> dict:
        return {"mode": self.mode, "equivalent": self.witness is not None,
                "witness": None if self.witness is None else self.witness.to_dict()}


def code_equivalence(C1: CyclicCode, C2: CyclicCode, mode: str = "semilinear",
                     check_hypothesis: bool = True) -> CodeEquivalence:
    """Equivalence of two codes through their generator families."""
    if mode not in ("linear", "semilinear"):
        raise ParameterError(f"unknown mode {mode!r}")
    if C1.ext != C2.ext or C1.t != C2.t:
        raise ParameterError("codes have different parameters")
    if C1.size != C2.size or sorted(C1.orbit_sizes) != sorted(C2.orbit_sizes):
        return CodeEquivalence(mode, None)
    auts = C1.ext.automorphisms(linear=mode == "linear")
    w = family_equivalence(SubspaceFamily.of(C1.generators), SubspaceFamily.of(C2.generators),
                           automorphisms=auts, check_hypothesis=check_hypothesis)
    return CodeEquivalence(mode, w)


# -- operator channel -----------------------------------------------------------

@dataclass(frozen=True)
class ChannelParams:
    rho_dims: int
    err_dims: int
    seed: int | None = None

    def check(self, t: int, n: int) -> None:
        if not 0 <= self.rho_dims <= t or self.err_dims < 0:
            raise ParameterError(f"invalid channel dims rho={self.rho_dims}, e={self.err_dims}")
        if t + self.err_dims > n:
            raise ParameterError(f"cannot add {self.err_dims} dimensions outside a {t}-space in n={n}")

    def to_dict(self) -> dict:
        return {"rho": self.rho_dims, "e": self.err_dims, "seed": self.seed}


def _full_rank_coeffs(q: int, rows: int, cols: int, rng: np.random.Generator, ext: Extension) -> np.ndarray:
    while True:
        M = rng.integers(0, q, size=(rows, cols))
        if fqlinalg.rank(M, ext) == rows:
            return M


def transmit(sent: Subspace, ch: ChannelParams, rng: np.random.Generator | None = None) -> Subspace:
    """``H + E``: H a uniform (t - rho)-subspace of ``sent``, E a uniform
    e-subspace meeting ``sent`` trivially."""
    ext = sent.ext
    t, n = sent.dim, ext.n
    ch.check(t, n)
    if rng is None:
        rng = np.random.default_rng(ch.seed)
    keep = t - ch.rho_dims
    vecs: list[int] = []
    if keep:
        coeffs = _full_rank_coeffs(ext.q, keep, t, rng, ext)
        basis = fqlinalg.matmul(coeffs, sent.coord_matrix(), ext)
        vecs = [int(x) for x in ext.elements_from_coords(basis)]
    if ch.err_dims:
        base = sent.coord_matrix()
        while True:
            E = rng.integers(0, ext.q, size=(ch.err_dims, n))
            if fqlinalg.rank(np.concatenate([base, E]), ext) == t + ch.err_dims:
                break
        vecs += [int(x) for x in ext.elements_from_coords(E)]
    return span_canonical(ext, vecs)


@dataclass(frozen=True)
class Decoding:
    verdict: str  # unique | nearest | ambiguous
    index: int | None
    candidates: tuple[int, ...]
    distance: int

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "index": self.index,
                "candidates": list(self.candidates), "distance": self.distance}


def codeword_distances(C: CyclicCode, received: Subspace) -> np.ndarray:
    q = C.ext.q
    hits = received.mask[C.keys].sum(axis=1)
    dims = np.rint(np.log(hits) / np.log(q)).astype(np.int64)
    return C.t + received.dim - 2 * dims


def decode_min_distance(C: CyclicCode, received: Subspace) -> Decoding:
    """Nearest codeword. ``unique`` is claimed only inside the unique-decoding
    radius, where it is guaranteed; a single nearest codeword beyond it is
    ``nearest``; ties are ``ambiguous`` (smallest key listed first)."""
    if C.size == 0:
        raise ParameterError("empty code")
    if received.ext != C.ext:
        raise FieldError("received space lives in a different field")
    d = codeword_distances(C, received)
    best = int(d.min())
    arg = np.nonzero(d == best)[0]
    if arg.size > 1:
        order = np.lexsort(C.keys[arg].T[::-1])
        return Decoding("ambiguous", None, tuple(int(x) for x in arg[order]), best)
    i = int(arg[0])
    md = C.min_distance()
    if md is None or 2 * best < md:
        return Decoding("unique", i, (i,), best)
    return Decoding("nearest", i, (i,), best)


def _check_unique(C: CyclicCode, received: Subspace, dec: Decoding) -> bool:
    """Independent check of a unique claim by rank computations."""
    claimed = C.codeword(dec.index)
    d0 = subspace_distance(claimed, received)
    if d0 != dec.distance:
        return False
    md = C.min_distance()
    return all(subspace_distance(C.codeword(j), received) > d0
               for j in range(C.size) if j != dec.index) and (md is None or 2 * d0 < md)


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    params: dict
    successes: int
    ambiguous: int
    failures: int
    wrong_unique: int
    miscorrections: int
    seed: int

    def to_dict(self) -> dict:
        return {"trials": self.trials, "params": self.params, "successes": self.successes,
                "ambiguous": self.ambiguous, "failures": self.failures,
                "wrong_unique": self.wrong_unique, "miscorrections": self.miscorrections,
                "seed": self.seed}


def _run_trials(C: CyclicCode, rho: int, e: int, seeds, start: int, audit: int) -> list[int]:
    succ = amb = fail = wrong = mis = 0
    for k, ss in enumerate(seeds, start):
        rng = np.random.default_rng(ss)
        idx = int(rng.integers(C.size))
        sent = C.codeword(idx)
        received = transmit(sent, ChannelParams(rho, e), rng)
        dec = decode_min_distance(C, received)
        if dec.verdict == "ambiguous":
            amb += 1
            if idx not in dec.candidates:
                fail += 1
            continue
        if dec.index == idx:
            succ += 1
        else:
            fail += 1
            if dec.verdict == "unique":
                mis += 1
        if dec.verdict == "unique" and k < audit and not _check_unique(C, received, dec):
            wrong += 1
    return [succ, amb, fail, wrong, mis]


def _worker(args) -> list[int]:
    from .serialize import family_from_json
    fam_json, rho, e, seeds, start, audit = args
    return _run_trials(build_code(family_from_json(fam_json)), rho, e, seeds, start, audit)


def simulate(C: CyclicCode, rho: int, e: int, trials: int, seed: int, audit: int = 0,
             threads: int = 1) -> SimulationReport:
    """Send random codewords through the channel and decode.

    success: decoded the sent codeword (any verdict with a single answer);
    failure: a single wrong answer or an ambiguous verdict missing the sent one;
    miscorrection: a ``unique`` verdict different from the sent codeword,
    possible only when ``rho + e`` exceeds the decoding radius;
    wrong_unique: a ``unique`` verdict refuted by the rank-based check, run on
    the first ``audit`` trials.

    Trial k draws from the k-th child of ``SeedSequence(seed)``, so results do
    not depend on ``threads``.
    """
    ChannelParams(rho, e).check(C.t, C.ext.n)
    children = np.random.SeedSequence(seed).spawn(trials)
    if threads <= 1 or trials < 2:
        totals = _run_trials(C, rho, e, children, 0, audit)
    else:
        from concurrent.futures import ProcessPoolExecutor

        from .serialize import family_to_json
        fam_json = family_to_json(SubspaceFamily.of(C.generators))
        bounds = np.linspace(0, trials, threads + 1).astype(int)
        jobs = [(fam_json, rho, e, children[a:b], int(a), audit) for a, b in zip(bounds, bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_worker, jobs))
        totals = [sum(col) for col in zip(*parts)]
    succ, amb, fail, wrong, mis = totals
    params = {"rho": rho, "e": e, "size": C.size, "t": C.t, "field": C.ext.field.spec}
    return SimulationReport(trials, params, succ, amb, fail, wrong, mis, seed)
