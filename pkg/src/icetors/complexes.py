"""Bounded complexes of projective representations over a hereditary algebra.

Every term is a direct sum of indecomposable projectives ``P_v`` recorded by
its vertex tuple, so terms can be compared, concatenated and minimised by
Gaussian elimination.  Morphisms in the derived category are chain maps
modulo null-homotopic ones.
"""

from __future__ import annotations

import functools

import numpy as np

from . import linalg as la
from . import reps as R
from .catalog import IndCatalog
from .errors import ContractError, UnsupportedAlgebraError
from .quiver import BoundQuiverAlgebra


def require_hereditary(algebra: BoundQuiverAlgebra):
    if not algebra.is_hereditary:
        raise UnsupportedAlgebraError(
            f"the derived model needs a hereditary algebra; {algebra.name or 'this algebra'} has relations"
        )


@functools.lru_cache(maxsize=4096)
def proj_sum(algebra: BoundQuiverAlgebra, vertices: tuple) -> R.Representation:
    if not vertices:
        return R.zero_rep(algebra)
    return R.direct_sum([R.projective(algebra, v) for v in vertices])[0]


@functools.lru_cache(maxsize=4096)
def _slices(algebra: BoundQuiverAlgebra, vertices: tuple):
    """Per summand, per vertex (0-based), its coordinate slice."""
    offs = [0] * algebra.n
    out = []
    for v in vertices:
        dims = R.projective(algebra, v).dims
        out.append(tuple(slice(o, o + d) for o, d in zip(offs, dims)))
        offs = [o + d for o, d in zip(offs, dims)]
    return tuple(out)


def _paths_by_end(algebra, v):
    by_end = {w: [] for w in algebra.quiver.vertices}
    for q in algebra.paths_from(v):
        by_end[q.end].append(q)
    return by_end


def proj_hom_basis(algebra, vertices: tuple, Y: R.Representation) -> list[R.RepMorphism]:
    """Basis of Hom(⊕ P_v, Y) via e_v -> y for y running through a basis of Y_v."""
    src = proj_sum(algebra, vertices)
    out = []
    sl = _slices(algebra, vertices)
    for s, v in enumerate(vertices):
        by_end = _paths_by_end(algebra, v)
        for b in range(Y.dim(v)):
            y = la.zeros(Y.dim(v), 1)
            y[b, 0] = 1
            mats = []
            for w in algebra.quiver.vertices:
                m = la.zeros(Y.dim(w), src.dim(w))
                cols = [la.matmul(Y.path_matrix(q), y, algebra.p) for q in by_end[w]]
                if cols:
                    m[:, sl[s][w - 1]] = np.concatenate(cols, axis=1)
                mats.append(m)
            out.append(R.RepMorphism(src, Y, mats))
    return out


class Complex:
    """Terms ``verts[k]`` (vertex tuples) with differentials d^k: X^k -> X^{k+1}."""

    def __init__(self, algebra: BoundQuiverAlgebra, verts: dict, diffs: dict | None = None, check=True):
        require_hereditary(algebra)
        self.algebra = algebra
        self.verts = {int(k): tuple(v) for k, v in verts.items() if v}
        self.diffs = {}
        for k, d in (diffs or {}).items():
            if k in self.verts and k + 1 in self.verts:
                self.diffs[int(k)] = d
        if check:
            self.check()

    def check(self):
        for k, d in self.diffs.items():
            if d.source.dims != self.term(k).dims or d.target.dims != self.term(k + 1).dims:
                raise ContractError(f"differential {k} has the wrong shape")
            if not d.is_valid():
                raise ContractError(f"differential {k} is not a module map")
        for k in self.diffs:
            if k + 1 in self.diffs and not self.diffs[k + 1].compose(self.diffs[k]).is_zero():
                raise ContractError(f"d^{k + 1} d^{k} is not zero")

    def term(self, k: int) -> R.Representation:
        return proj_sum(self.algebra, self.verts.get(k, ()))

    def diff(self, k: int) -> R.RepMorphism:
        d = self.diffs.get(k)
        return d if d is not None else R.RepMorphism.zero(self.term(k), self.term(k + 1))

    def degrees(self) -> list[int]:
        return sorted(self.verts)

    def is_zero(self) -> bool:
        return not self.verts

    def total_rank(self) -> int:
        return sum(len(v) for v in self.verts.values())

    def shift(self, n: int) -> "Complex":
        """X[n]: degree k holds X^{k+n}; differentials pick up (-1)^n."""
        sign = -1 if n % 2 else 1
        return Complex(
            self.algebra,
            {k - n: v for k, v in self.verts.items()},
            {k - n: d.scale(sign) for k, d in self.diffs.items()},
            check=False,
        )

    def __repr__(self):
        return "Complex(" + ", ".join(f"{k}:{self.verts[k]}" for k in self.degrees()) + ")"


class ChainMap:
    def __init__(self, source: Complex, target: Complex, comps: dict):
        self.source = source
        self.target = target
        self.comps = {k: c for k, c in comps.items() if k in source.verts and k in target.verts}

    def comp(self, k: int) -> R.RepMorphism:
        c = self.comps.get(k)
        return c if c is not None else R.RepMorphism.zero(self.source.term(k), self.target.term(k))

    def is_chain_map(self) -> bool:
        degs = set(self.source.verts) | set(self.target.verts)
        for k in degs:
            lhs = self.target.diff(k).compose(self.comp(k))
            rhs = self.comp(k + 1).compose(self.source.diff(k))
            if not (lhs + (-rhs)).is_zero():
                return False
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self`` after ``other``."""
        degs = set(other.source.verts) & set(self.target.verts)
        return ChainMap(other.source, self.target, {k: self.comp(k).compose(other.comp(k)) for k in degs})

    def scale(self, c):
        return ChainMap(self.source, self.target, {k: m.scale(c) for k, m in self.comps.items()})

    def __add__(self, other):
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {k: self.comp(k) + other.comp(k) for k in degs})

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps.values())

    def shift(self, n: int) -> "ChainMap":
        return ChainMap(self.source.shift(n), self.target.shift(n), {k - n: c for k, c in self.comps.items()})


def identity_map(X: Complex) -> ChainMap:
    return ChainMap(X, X, {k: R.RepMorphism.identity(X.term(k)) for k in X.verts})


def zero_complex(algebra) -> Complex:
    return Complex(algebra, {}, {}, check=False)


def direct_sum(parts: list[Complex]) -> Complex:
    algebra = parts[0].algebra
    degs = sorted({k for X in parts for k in X.verts})
    verts = {k: tuple(v for X in parts for v in X.verts.get(k, ())) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in verts:
            continue
        src, tgt = proj_sum(algebra, verts[k]), proj_sum(algebra, verts[k + 1])
        mats = []
        for w in range(algebra.n):
            m = la.zeros(tgt.dims[w], src.dims[w])
            ro = co = 0
            for X in parts:
                d = X.diff(k).mats[w]
                m[ro:ro + d.shape[0], co:co + d.shape[1]] = d
                ro += d.shape[0]
                co += d.shape[1]
            mats.append(m)
        diffs[k] = R.RepMorphism(src, tgt, mats)
    return Complex(algebra, verts, diffs, check=False)


def map_from_sum(parts_maps: list[ChainMap], source: Complex | None = None) -> ChainMap:
    """[f_1 ... f_r]: ⊕ X_i -> Y."""
    Y = parts_maps[0].target
    src = source or direct_sum([f.source for f in parts_maps])
    comps = {}
    for k in src.verts:
        if k not in Y.verts:
            continue
        mats = []
        for w in range(src.algebra.n):
            blocks = [f.comp(k).mats[w] for f in parts_maps]
            mats.append(np.concatenate(blocks, axis=1))
        comps[k] = R.RepMorphism(src.term(k), Y.term(k), mats)
    return ChainMap(src, Y, comps)


def mapping_cone(f: ChainMap):
    """Cone^k = X^{k+1} ⊕ Y^k with d = [[-d_X, 0], [f, d_Y]].

    Returns (cone, inclusion Y -> cone, projection cone -> X[1]).
    """
    X, Y = f.source, f.target
    alg = X.algebra
    p = alg.p
    degs = sorted({k - 1 for k in X.verts} | set(Y.verts))
    verts = {k: X.verts.get(k + 1, ()) + Y.verts.get(k, ()) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in verts or not verts[k] or not verts[k + 1]:
            continue
        src, tgt = proj_sum(alg, verts[k]), proj_sum(alg, verts[k + 1])
        mats = []
        for w in range(alg.n):
            dx = X.diff(k + 1).mats[w]
            dy = Y.diff(k).mats[w]
            fk = f.comp(k + 1).mats[w]
            top = np.concatenate([np.mod(-dx, p), la.zeros(dx.shape[0], dy.shape[1])], axis=1)
            bot = np.concatenate([fk, dy], axis=1)
            mats.append(np.concatenate([top, bot], axis=0))
        diffs[k] = R.RepMorphism(src, tgt, mats)
    C = Complex(alg, verts, diffs, check=False)
    incl, proj = {}, {}
    X1 = X.shift(1)
    for k in C.verts:
        xk = X.term(k + 1)
        yk = Y.term(k)
        ck = C.term(k)
        inc, pr = [], []
        for w in range(alg.n):
            a, b = xk.dims[w], yk.dims[w]
            inc.append(np.concatenate([la.zeros(a, b), la.identity(b)], axis=0))
            pr.append(np.concatenate([la.identity(a), la.zeros(a, b)], axis=1))
        if k in Y.verts:
            incl[k] = R.RepMorphism(yk, ck, inc)
        if k + 1 in X.verts:
            proj[k] = R.RepMorphism(ck, X1.term(k), pr)
    return C, ChainMap(Y, C, incl), ChainMap(C, X1, proj)


# --- minimisation ------------------------------------------------------------

def _find_unit(X: Complex):
    for k in sorted(X.diffs):
        d = X.diffs[k]
        src_sl = _slices(X.algebra, X.verts[k])
        tgt_sl = _slices(X.algebra, X.verts[k + 1])
        for i, v in enumerate(X.verts[k]):
            for j, u in enumerate(X.verts[k + 1]):
                if u != v:
                    continue
                c = int(d.mats[v - 1][tgt_sl[j][v - 1].start, src_sl[i][v - 1].start])
                if c:
                    return k, i, j, c
    return None


def _eliminate(X: Complex, k: int, i: int, j: int, c: int):
    """Cancel the unit component P_v -> P_v between summand i of X^k and
    summand j of X^{k+1}.  Returns the smaller complex with the projection
    onto it and the section back (mutually inverse homotopy equivalences)."""
    alg = X.algebra
    p = alg.p
    cinv = pow(c, -1, p)
    vk, vk1 = X.verts[k], X.verts[k + 1]
    sl_k, sl_k1 = _slices(alg, vk), _slices(alg, vk1)
    new_vk = vk[:i] + vk[i + 1:]
    new_vk1 = vk1[:j] + vk1[j + 1:]

    def keep(sl, idx, w, n):
        drop = set(range(sl[idx][w].start, sl[idx][w].stop))
        return [r for r in range(n) if r not in drop]

    verts = dict(X.verts)
    verts[k], verts[k + 1] = new_vk, new_vk1
    d = X.diffs[k]
    A_idx = [keep(sl_k, i, w, d.source.dims[w]) for w in range(alg.n)]
    B_idx = [keep(sl_k1, j, w, d.target.dims[w]) for w in range(alg.n)]
    P_idx = [list(range(sl_k[i][w].start, sl_k[i][w].stop)) for w in range(alg.n)]
    Q_idx = [list(range(sl_k1[j][w].start, sl_k1[j][w].stop)) for w in range(alg.n)]

    Ak, Bk1 = proj_sum(alg, new_vk), proj_sum(alg, new_vk1)
    diffs = dict(X.diffs)
    new_d, pk1, sk, sk1 = [], [], [], []
    for w in range(alg.n):
        m = d.mats[w]
        beta = m[np.ix_(Q_idx[w], A_idx[w])]
        gamma = m[np.ix_(B_idx[w], P_idx[w])]
        delta = m[np.ix_(B_idx[w], A_idx[w])]
        new_d.append(np.mod(delta - cinv * (gamma @ beta), p))
        proj = la.zeros(len(B_idx[w]), m.shape[0])
        proj[:, B_idx[w]] = la.identity(len(B_idx[w]))
        proj[:, Q_idx[w]] = np.mod(-cinv * gamma, p)
        pk1.append(proj)
        sec = la.zeros(m.shape[1], len(A_idx[w]))
        sec[A_idx[w], :] = la.identity(len(A_idx[w]))
        sec[P_idx[w], :] = np.mod(-cinv * beta, p)
        sk.append(sec)
        sec1 = la.zeros(m.shape[0], len(B_idx[w]))
        sec1[B_idx[w], :] = la.identity(len(B_idx[w]))
        sk1.append(sec1)
    diffs[k] = R.RepMorphism(Ak, Bk1, new_d)
    if k - 1 in X.diffs:
        dm = X.diffs[k - 1]
        diffs[k - 1] = R.RepMorphism(dm.source, Ak, [dm.mats[w][A_idx[w], :] for w in range(alg.n)])
    if k + 1 in X.diffs:
        dp = X.diffs[k + 1]
        diffs[k + 1] = R.RepMorphism(Bk1, dp.target, [dp.mats[w][:, B_idx[w]] for w in range(alg.n)])
    Y = Complex(alg, verts, diffs, check=False)
    comps, back = {}, {}
    for deg in X.verts:
        if deg == k:
            if new_vk:
                pk = [la.identity(d.source.dims[w])[A_idx[w], :] for w in range(alg.n)]
                comps[deg] = R.RepMorphism(X.term(k), Ak, pk)
                back[deg] = R.RepMorphism(Ak, X.term(k), sk)
        elif deg == k + 1:
            if new_vk1:
                comps[deg] = R.RepMorphism(X.term(k + 1), Bk1, pk1)
                back[deg] = R.RepMorphism(Bk1, X.term(k + 1), sk1)
        else:
            comps[deg] = back[deg] = R.RepMorphism.identity(X.term(deg))
    return Y, ChainMap(X, Y, comps), ChainMap(Y, X, back)


def minimize(X: Complex, track: bool = True):
    """Homotopy-equivalent complex without split unit components.

    Returns ``(Y, proj, sect)`` with proj: X -> Y and sect: Y -> X; the maps
    are None when ``track`` is false.
    """
    proj = sect = identity_map(X) if track else None
    cur = X
    while True:
        hit = _find_unit(cur)
        if hit is None:
            return cur, proj, sect
        cur, p, s = _eliminate(cur, *hit)
        if track:
            proj = p.compose(proj)
            sect = sect.compose(s)


# --- cohomology and stalks -----------------------------------------------------

def cohomology_module(X: Complex, k: int) -> R.Representation:
    K, incl = R.kernel_of(X.diff(k))
    d_in = X.diff(k - 1)
    p = X.algebra.p
    bases = []
    for w in range(X.algebra.n):
        im = la.colspace(d_in.mats[w], p)
        if im.shape[1] == 0:
            bases.append(la.zeros(K.dims[w], 0))
        else:
            bases.append(la.solve_matrix(incl.mats[w], im, p))
    Q, _ = R.quotient(K, bases)
    return Q


def cohomology(X: Complex, catalog: IndCatalog) -> dict[int, dict[int, int]]:
    """Per degree, the decomposition of H^k into catalog members."""
    out = {}
    for k in X.degrees():
        H = cohomology_module(X, k)
        if H.total_dim:
            out[k] = catalog.decompose(H)
    return out


def resolution(M: R.Representation) -> Complex:
    """Minimal projective resolution P1 -> P0 placed in degrees -1, 0."""
    alg = M.algebra
    require_hereditary(alg)
    tops0 = R.top_vectors(M)
    P0, pi = R.projective_cover(M)
    v0 = tuple(v for v, t in tops0.items() for _ in range(t.shape[1]))
    omega, iota = R.kernel_of(pi)
    P1, pi1 = R.projective_cover(omega)
    v1 = tuple(v for v, t in R.top_vectors(omega).items() for _ in range(t.shape[1]))
    d = iota.compose(pi1)
    src, tgt = proj_sum(alg, v1), proj_sum(alg, v0)
    d = R.RepMorphism(src, tgt, d.mats)
    return Complex(alg, {-1: v1, 0: v0}, {-1: d})


def stalk(M: R.Representation, degree: int) -> Complex:
    """M placed in cohomological degree ``degree`` (that is, M[-degree])."""
    return resolution(M).shift(-degree)


# --- Hom in the derived category -------------------------------------------------

def _flat(m: R.RepMorphism) -> np.ndarray:
    return m.flat()


class HomSpace:
    """Hom(X, Y) in the homotopy category: chain maps modulo null-homotopic maps."""

    def __init__(self, X: Complex, Y: Complex):
        self.X, self.Y = X, Y
        alg = X.algebra
        p = alg.p
        degs = sorted(set(X.verts) & set(Y.verts))
        self.degs = degs
        fb = {k: proj_hom_basis(alg, X.verts[k], Y.term(k)) for k in degs}
        offs, n = {}, 0
        for k in degs:
            offs[k] = n
            n += len(fb[k])
        # chain condition d_Y f^c - f^{c+1} d_X = 0 for each c
        blocks = []
        for c in sorted(set(X.verts)):
            if c + 1 not in Y.verts:
                continue
            L = sum(a * b for a, b in zip(Y.term(c + 1).dims, X.term(c).dims))
            block = la.zeros(L, n)
            if c in fb:
                for t, b in enumerate(fb[c]):
                    block[:, offs[c] + t] = _flat(Y.diff(c).compose(b))
            if c + 1 in fb and c + 1 in X.verts:
                for t, b in enumerate(fb[c + 1]):
                    block[:, offs[c + 1] + t] = np.mod(block[:, offs[c + 1] + t] - _flat(b.compose(X.diff(c))), p)
            blocks.append(block)
        M = np.concatenate(blocks, axis=0) if blocks else la.zeros(0, n)
        Z = la.kernel_basis(M, p) if n else la.zeros(0, 0)
        # flat layout over degs
        self._flen = {k: sum(a * b for a, b in zip(Y.term(k).dims, X.term(k).dims)) for k in degs}
        self._foff, tot = {}, 0
        for k in degs:
            self._foff[k] = tot
            tot += self._flen[k]
        F = la.zeros(n, tot)
        for k in degs:
            for t, b in enumerate(fb[k]):
                F[offs[k] + t, self._foff[k]:self._foff[k] + self._flen[k]] = _flat(b)
        Zf = la.matmul(Z, F, p) if Z.size else la.zeros(0, tot)
        # null-homotopic maps f = d_Y h + h d_X, h^k: X^k -> Y^{k-1}
        brows = []
        for k in sorted(X.verts):
            if k - 1 not in Y.verts:
                continue
            for h in proj_hom_basis(alg, X.verts[k], Y.term(k - 1)):
                row = la.zeros(1, tot)[0]
                if k in self._foff:
                    row[self._foff[k]:self._foff[k] + self._flen[k]] += _flat(Y.diff(k - 1).compose(h))
                if k - 1 in self._foff and k - 1 in X.verts:
                    row[self._foff[k - 1]:self._foff[k - 1] + self._flen[k - 1]] += _flat(h.compose(X.diff(k - 1)))
                brows.append(np.mod(row, p))
        B = np.array(brows, dtype=np.int64).reshape(len(brows), tot)
        self.null = B
        rb = la.rank(B, p) if B.size else 0
        basis = []
        cur = B
        r = rb
        for z in Zf:
            trial = np.concatenate([cur, z.reshape(1, -1)], axis=0)
            if la.rank(trial, p) > r:
                cur, r = trial, r + 1
                basis.append(z)
        self.dim = len(basis)
        self.chain_dim = Zf.shape[0]
        self.basis = [self._to_map(z) for z in basis]

    def _to_map(self, z) -> ChainMap:
        comps = {}
        for k in self.degs:
            seg = z[self._foff[k]:self._foff[k] + self._flen[k]]
            src, tgt = self.X.term(k), self.Y.term(k)
            mats, off = [], 0
            for a, b in zip(src.dims, tgt.dims):
                mats.append(seg[off:off + a * b].reshape(b, a))
                off += a * b
            comps[k] = R.RepMorphism(src, tgt, mats)
        return ChainMap(self.X, self.Y, comps)

    def is_null_homotopic(self, f: ChainMap) -> bool:
        tot = sum(self._flen.values())
        row = la.zeros(1, tot)[0]
        for k in self.degs:
            row[self._foff[k]:self._foff[k] + self._flen[k]] = _flat(f.comp(k))
        if not row.any():
            return True
        r = la.rank(self.null, self.X.algebra.p) if self.null.size else 0
        return la.rank(np.concatenate([self.null, row.reshape(1, -1)], axis=0), self.X.algebra.p) == r


def derived_hom_dim(catalog: IndCatalog, m: int, i: int, n: int, j: int) -> int:
    """dim Hom(M[i], N[j]) where M[i] is M shifted i times (M[i] lives in
    cohomological degree -i).  Hereditary: Hom when i = j, Ext^1 when j = i + 1."""
    require_hereditary(catalog.algebra)
    if i == j:
        return int(catalog.hom_table[m][n])
    if j == i + 1:
        return int(catalog.ext_table[m][n])
    return 0
