"""Representations of bound quivers and the maps between them.

A representation assigns a GF(p)-space to every vertex and a matrix to every
arrow (target-dim rows, source-dim columns).  The projective at vertex v has
the paths starting at v as its basis, so ``P_3`` over ``1 <- 2 <- 3`` is the
uniserial module with top 3 and socle 1 (label ``"321"``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import ContractError, FalsificationError
from .quiver import BoundQuiverAlgebra, Path

_CACHE_LIMIT = 400_000
_hom_cache: dict = {}
_ext_cache: dict = {}


def clear_caches():
    _hom_cache.clear()
    _ext_cache.clear()


class Representation:
    __slots__ = ("algebra", "dims", "maps", "_key")

    def __init__(self, algebra: BoundQuiverAlgebra, dims, maps=None, check=True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n:
            raise ContractError(f"dimension vector {self.dims} has wrong length for {algebra.n} vertices")
        maps = maps or {}
        p = algebra.p
        self.maps = {}
        for a in algebra.quiver.arrows:
            shape = (self.dims[a.target - 1], self.dims[a.source - 1])
            m = maps.get(a.name)
            m = la.zeros(*shape) if m is None else la.fmat(m, p)
            if m.shape != shape:
                if m.size == 0 and 0 in shape:
                    m = la.zeros(*shape)
                else:
                    raise ContractError(f"map for arrow {a.name} has shape {m.shape}, expected {shape}")
            self.maps[a.name] = m
        self._key = None
        if check:
            for rel in algebra.relations:
                if np.any(self.path_matrix(rel)):
                    names = "".join(a.name for a in reversed(rel))
                    raise ContractError(f"representation violates relation {names}")

    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def key(self):
        if self._key is None:
            self._key = (self.algebra, self.dims, tuple(m.tobytes() for m in self.maps.values()))
        return self._key

    def path_matrix(self, arrows) -> np.ndarray:
        if isinstance(arrows, Path):
            start, arrows = arrows.start, arrows.arrows
        else:
            start = arrows[0].source
        m = la.identity(self.dim(start))
        for a in arrows:
            m = la.matmul(self.maps[a.name], m, self.p)
        return m

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self):
        return f"Representation(dims={self.dims})"


class RepMorphism:
    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Representation, target: Representation, mats, check=False):
        self.source = source
        self.target = target
        p = source.p
        self.mats = tuple(
            la.fmat(m, p).reshape(target.dims[i], source.dims[i]) for i, m in enumerate(mats)
        )
        if check and not self.is_valid():
            raise ContractError("vertex maps do not intertwine the arrow maps")

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, [la.zeros(t, s) for s, t in zip(source.dims, target.dims)])

    @classmethod
    def identity(cls, rep):
        return cls(rep, rep, [la.identity(d) for d in rep.dims])

    def mat(self, v: int) -> np.ndarray:
        return self.mats[v - 1]

    def is_valid(self) -> bool:
        p = self.source.p
        for a in self.source.algebra.quiver.arrows:
            lhs = la.matmul(self.target.maps[a.name], self.mat(a.source), p)
            rhs = la.matmul(self.mat(a.target), self.source.maps[a.name], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """``self`` after ``other``."""
        p = self.source.p
        return RepMorphism(other.source, self.target,
                           [la.matmul(a, b, p) for a, b in zip(self.mats, other.mats)])

    def __add__(self, other):
        return RepMorphism(self.source, self.target, [a + b for a, b in zip(self.mats, other.mats)])

    def scale(self, c: int):
        return RepMorphism(self.source, self.target, [a * c for a in self.mats])

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self) -> bool:
        return not any(np.any(m) for m in self.mats)

    def is_iso(self) -> bool:
        return all(la.is_invertible(m, self.source.p) for m in self.mats)

    def is_mono(self) -> bool:
        return all(la.rank(m, self.source.p) == m.shape[1] for m in self.mats if m.shape[1])

    def is_epi(self) -> bool:
        return all(la.rank(m, self.source.p) == m.shape[0] for m in self.mats if m.shape[0])

    def flat(self) -> np.ndarray:
        if not self.mats:
            return la.zeros(1, 0)[0]
        return np.concatenate([m.reshape(-1) for m in self.mats])

    def inverse(self) -> "RepMorphism":
        return RepMorphism(self.target, self.source, [la.inverse(m, self.source.p) for m in self.mats])


def _unflatten(M: Representation, N: Representation, vec) -> RepMorphism:
    mats = []
    off = 0
    for m, n in zip(M.dims, N.dims):
        mats.append(np.asarray(vec[off:off + m * n]).reshape(n, m))
        off += m * n
    return RepMorphism(M, N, mats)


def _check_same_algebra(M, N):
    if M.algebra != N.algebra:
        raise ContractError("representations live over different algebras")


def _hom_system(M: Representation, N: Representation) -> np.ndarray:
    p = M.p
    offsets = []
    off = 0
    for m, n in zip(M.dims, N.dims):
        offsets.append(off)
        off += m * n
    blocks = []
    for a in M.algebra.quiver.arrows:
        s, t = a.source - 1, a.target - 1
        ms, mt, ns, nt = M.dims[s], M.dims[t], N.dims[s], N.dims[t]
        rows = nt * ms
        if rows == 0:
            continue
        block = la.zeros(rows, off)
        # N(a) F_s - F_t M(a) = 0, row-major vectorisation
        if ns * ms:
            block[:, offsets[s]:offsets[s] + ns * ms] += np.kron(N.maps[a.name], la.identity(ms))
        if nt * mt:
            block[:, offsets[t]:offsets[t] + nt * mt] -= np.kron(la.identity(nt), M.maps[a.name].T)
        blocks.append(block % p)
    if not blocks:
        return la.zeros(0, off)
    return np.concatenate(blocks, axis=0)


def _hom_vectors(M: Representation, N: Representation) -> np.ndarray:
    key = (M.key, N.key)
    hit = _hom_cache.get(key)
    if hit is None:
        if len(_hom_cache) > _CACHE_LIMIT:
            _hom_cache.clear()
        hit = la.kernel_basis(_hom_system(M, N), M.p)
        _hom_cache[key] = hit
    return hit


def hom_basis(M: Representation, N: Representation) -> list[RepMorphism]:
    """Basis of the intertwiner space Hom(M, N)."""
    _check_same_algebra(M, N)
    return [_unflatten(M, N, v) for v in _hom_vectors(M, N)]


def hom_dim(M: Representation, N: Representation) -> int:
    _check_same_algebra(M, N)
    key = (M.key, N.key)
    hit = _hom_cache.get(key)
    if hit is not None:
        return int(hit.shape[0])
    dkey = ("dim",) + key
    d = _hom_cache.get(dkey)
    if d is None:
        system = _hom_system(M, N)
        d = system.shape[1] - la.rank(system, M.p)
        _hom_cache[dkey] = d
    return d


def morphism_from_vector(M, N, coeffs) -> RepMorphism:
    """Linear combination of ``hom_basis(M, N)``."""
    vecs = _hom_vectors(M, N)
    if len(coeffs) != vecs.shape[0]:
        raise ContractError("coefficient vector does not match dim Hom")
    if vecs.shape[0] == 0:
        return RepMorphism.zero(M, N)
    return _unflatten(M, N, np.mod(np.asarray(coeffs, dtype=np.int64) @ vecs, M.p))


def all_morphisms(M, N, skip_zero=False):
    p = M.p
    vecs = _hom_vectors(M, N)
    for coeffs in itertools.product(range(p), repeat=vecs.shape[0]):
        if skip_zero and not any(coeffs):
            continue
        if vecs.shape[0] == 0:
            yield RepMorphism.zero(M, N)
        else:
            yield _unflatten(M, N, np.mod(np.asarray(coeffs, dtype=np.int64) @ vecs, p))


# --- sub-objects and quotients ----------------------------------------------

def _as_cols(b, n):
    b = np.asarray(b, dtype=np.int64)
    if b.ndim == 2 and b.shape[0] == n:
        return b
    if b.size == 0:
        return la.zeros(n, 0)
    return b.reshape(n, -1)


def subrep(M: Representation, bases) -> tuple[Representation, RepMorphism]:
    """Subrepresentation spanned per vertex by the columns of ``bases[v-1]``."""
    p = M.p
    bases = [_as_cols(b, M.dims[i]) for i, b in enumerate(bases)]
    dims = [b.shape[1] for b in bases]
    maps = {}
    for a in M.algebra.quiver.arrows:
        bs, bt = bases[a.source - 1], bases[a.target - 1]
        img = la.matmul(M.maps[a.name], bs, p)
        x = la.solve_matrix(bt, img, p) if bt.shape[1] or np.any(img) else la.zeros(0, bs.shape[1])
        if x is None:
            raise ContractError("given subspaces are not closed under the arrow maps")
        maps[a.name] = x
    S = Representation(M.algebra, dims, maps, check=False)
    return S, RepMorphism(S, M, bases)


def _quotient(M: Representation, bases):
    p = M.p
    proj, sect = [], []
    for i, b in enumerate(bases):
        n = M.dims[i]
        b = _as_cols(b, n)
        e = la.complement_columns(b, n, p)
        full = np.concatenate([b, e], axis=1)
        inv = la.inverse(full, p)
        proj.append(inv[b.shape[1]:, :])
        sect.append(e)
    dims = [s.shape[1] for s in sect]
    maps = {}
    for a in M.algebra.quiver.arrows:
        maps[a.name] = la.matmul(proj[a.target - 1], la.matmul(M.maps[a.name], sect[a.source - 1], p), p)
    Q = Representation(M.algebra, dims, maps, check=False)
    return Q, RepMorphism(M, Q, proj), sect


def quotient(M: Representation, bases) -> tuple[Representation, RepMorphism]:
    Q, proj, _ = _quotient(M, bases)
    return Q, proj


def kernel_of(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    bases = [la.kernel_basis(m, f.source.p).T for m in f.mats]
    return subrep(f.source, bases)


def image_of(f: RepMorphism) -> tuple[Representation, RepMorphism, RepMorphism]:
    """Image with the factorisation ``f = mono o epi``."""
    p = f.source.p
    bases = [la.colspace(m, p) for m in f.mats]
    im, mono = subrep(f.target, bases)
    epi = RepMorphism(f.source, im, [la.solve_matrix(b, m, p) for b, m in zip(bases, f.mats)])
    return im, epi, mono


def cokernel_of(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    p = f.source.p
    return quotient(f.target, [la.colspace(m, p) for m in f.mats])


def direct_sum(reps) -> tuple[Representation, list[RepMorphism], list[RepMorphism]]:
    reps = list(reps)
    if not reps:
        raise ContractError("direct_sum needs at least one summand")
    alg = reps[0].algebra
    n = alg.n
    dims = [sum(r.dims[i] for r in reps) for i in range(n)]
    maps = {}
    for a in alg.quiver.arrows:
        m = la.zeros(dims[a.target - 1], dims[a.source - 1])
        ro = co = 0
        for r in reps:
            blk = r.maps[a.name]
            m[ro:ro + blk.shape[0], co:co + blk.shape[1]] = blk
            ro += blk.shape[0]
            co += blk.shape[1]
        maps[a.name] = m
    S = Representation(alg, dims, maps, check=False)
    inj, proj = [], []
    offs = [0] * n
    for r in reps:
        im, pm = [], []
        for i in range(n):
            e = la.zeros(dims[i], r.dims[i])
            e[offs[i]:offs[i] + r.dims[i], :] = la.identity(r.dims[i])
            im.append(e)
            pm.append(e.T.copy())
            offs[i] += r.dims[i]
        inj.append(RepMorphism(r, S, im))
        proj.append(RepMorphism(S, r, pm))
    return S, inj, proj


def zero_rep(algebra) -> Representation:
    return Representation(algebra, [0] * algebra.n)


def trace(S, X: Representation) -> tuple[Representation, RepMorphism]:
    """Sum of the images of all morphisms from members of ``S`` into ``X``."""
    p = X.p
    cols = [[la.zeros(d, 0)] for d in X.dims]
    for C in S:
        for f in hom_basis(C, X):
            for i, m in enumerate(f.mats):
                cols[i].append(m)
    return subrep(X, [la.colspace(np.concatenate(c, axis=1), p) for c in cols])


def trace_dims(S, X: Representation) -> tuple[int, ...]:
    p = X.p
    cols = [[la.zeros(d, 0)] for d in X.dims]
    for C in S:
        for f in hom_basis(C, X):
            for i, m in enumerate(f.mats):
                cols[i].append(m)
    return tuple(la.rank(np.concatenate(c, axis=1), p) for c in cols)


def embeds_in_add(X: Representation, S) -> bool:
    """True iff the common kernel of all maps from X into members of S is zero."""
    p = X.p
    rows = [[la.zeros(0, d)] for d in X.dims]
    for C in S:
        for f in hom_basis(X, C):
            for i, m in enumerate(f.mats):
                rows[i].append(m)
    return all(la.rank(np.concatenate(r, axis=0), p) == d for r, d in zip(rows, X.dims))


# --- projectives and extensions ---------------------------------------------

def projective(algebra: BoundQuiverAlgebra, v: int) -> Representation:
    paths = algebra.paths_from(v)
    by_end = {w: [q for q in paths if q.end == w] for w in algebra.quiver.vertices}
    index = {q: by_end[q.end].index(q) for q in paths}
    maps = {}
    for a in algebra.quiver.arrows:
        m = la.zeros(len(by_end[a.target]), len(by_end[a.source]))
        for i, q in enumerate(by_end[a.source]):
            nxt = q.extend(a)
            if nxt in index:
                m[index[nxt], i] = 1
        maps[a.name] = m
    return Representation(algebra, [len(by_end[w]) for w in algebra.quiver.vertices], maps)


def top_vectors(M: Representation) -> dict[int, np.ndarray]:
    """Per vertex, columns spanning a complement of the radical."""
    p = M.p
    out = {}
    for v in M.algebra.quiver.vertices:
        ins = [M.maps[a.name] for a in M.algebra.quiver.in_arrows(v)]
        rad = la.colspace(np.concatenate(ins, axis=1), p) if ins else la.zeros(M.dim(v), 0)
        out[v] = la.complement_columns(rad, M.dim(v), p)
    return out


def projective_cover(M: Representation) -> tuple[Representation, RepMorphism]:
    alg = M.algebra
    p = M.p
    summands, columns = [], []
    for v, tops in top_vectors(M).items():
        for j in range(tops.shape[1]):
            x = tops[:, j]
            P = projective(alg, v)
            paths = alg.paths_from(v)
            cols = []
            for w in alg.quiver.vertices:
                block = [la.matmul(M.path_matrix(q), x.reshape(-1, 1), p) for q in paths if q.end == w]
                cols.append(np.concatenate(block, axis=1) if block else la.zeros(M.dim(w), 0))
            summands.append(P)
            columns.append(cols)
    if not summands:
        Z = zero_rep(alg)
        return Z, RepMorphism.zero(Z, M)
    P0, _, _ = direct_sum(summands)
    mats = [np.concatenate([c[i] for c in columns], axis=1) for i in range(alg.n)]
    return P0, RepMorphism(P0, M, mats)


@dataclass
class Ext1Data:
    """Ext^1(B, A) through the presentation ``0 -> omega -> P0 -> B -> 0``.

    ``reps`` are morphisms omega -> A whose classes form a basis.
    """

    B: Representation
    A: Representation
    P0: Representation
    pi: RepMorphism
    omega: Representation
    iota: RepMorphism
    reps: list

    @property
    def dim(self) -> int:
        return len(self.reps)

    def realize(self, coeffs) -> RepMorphism:
        h = RepMorphism.zero(self.omega, self.A)
        for c, r in zip(coeffs, self.reps):
            if c % self.A.p:
                h = h + r.scale(c)
        return h


def ext1_basis(B: Representation, A: Representation) -> Ext1Data:
    _check_same_algebra(A, B)
    key = (B.key, A.key)
    hit = _ext_cache.get(key)
    if hit is not None:
        return hit
    p = A.p
    P0, pi = projective_cover(B)
    omega, iota = kernel_of(pi)
    hom_oa = _hom_vectors(omega, A)
    restricted = [g.compose(iota).flat() for g in hom_basis(P0, A)]
    span = np.array(restricted, dtype=np.int64).reshape(len(restricted), hom_oa.shape[1])
    r = la.rank(span, p) if span.size else 0
    reps = []
    for v in hom_oa:
        trial = np.concatenate([span, v.reshape(1, -1)], axis=0)
        if la.rank(trial, p) > r:
            span, r = trial, r + 1
            reps.append(_unflatten(omega, A, v))
    data = Ext1Data(B, A, P0, pi, omega, iota, reps)
    if len(_ext_cache) > _CACHE_LIMIT // 10:
        _ext_cache.clear()
    _ext_cache[key] = data
    return data


def ext1_dim(B: Representation, A: Representation) -> int:
    return ext1_basis(B, A).dim


@dataclass
class ShortExact:
    A: Representation
    E: Representation
    B: Representation
    incl: RepMorphism
    proj: RepMorphism


def middle_term(B: Representation, A: Representation, cls) -> ShortExact:
    """Pushout ``E = coker((iota, -h): omega -> P0 + A)`` of the given class.

    ``cls`` is a coefficient vector over ``ext1_basis(B, A).reps`` or a
    morphism omega -> A.
    """
    ext = ext1_basis(B, A)
    h = cls if isinstance(cls, RepMorphism) else ext.realize(cls)
    p = A.p
    S, inj, _ = direct_sum([ext.P0, A])
    phi = RepMorphism(ext.omega, S, [np.concatenate([i, -hm], axis=0)
                                     for i, hm in zip(ext.iota.mats, h.mats)])
    E, q, sect = _quotient(S, [la.colspace(m, p) for m in phi.mats])
    incl = q.compose(inj[1])
    to_b = [np.concatenate([pm, la.zeros(pm.shape[0], A.dims[i])], axis=1)
            for i, pm in enumerate(ext.pi.mats)]
    proj = RepMorphism(E, B, [la.matmul(t, s, p) for t, s in zip(to_b, sect)])
    ses = ShortExact(A, E, B, incl, proj)
    if not (incl.is_mono() and proj.is_epi() and proj.compose(incl).is_zero()
            and E.total_dim == A.total_dim + B.total_dim and incl.is_valid() and proj.is_valid()):
        raise FalsificationError("middle term does not fit in a short exact sequence")
    return ses


# --- isomorphism and indecomposability --------------------------------------

def is_isomorphic(M: Representation, N: Representation) -> bool:
    if M.dims != N.dims:
        return False
    if M.total_dim == 0:
        return True
    if hom_dim(M, N) == 0 or hom_dim(N, M) == 0:
        return False
    return any(f.is_iso() for f in all_morphisms(M, N, skip_zero=True))


def find_isomorphism(M, N):
    if M.dims != N.dims:
        return None
    for f in all_morphisms(M, N):
        if f.is_iso():
            return f
    return None


def is_indecomposable(M: Representation) -> bool:
    """No idempotent endomorphism other than 0 and 1."""
    if M.total_dim == 0:
        return False
    one = RepMorphism.identity(M)
    for e in all_morphisms(M, M, skip_zero=True):
        if all(np.array_equal(a, b) for a, b in zip(e.mats, one.mats)):
            continue
        e2 = e.compose(e)
        if all(np.array_equal(a, b) for a, b in zip(e2.mats, e.mats)):
            return False
    return True
