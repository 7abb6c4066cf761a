"""Catalogs of indecomposable modules.

Nakayama algebras get a closed-form catalog (truncations of the uniserial
projectives), which is complete.  Anything else can be scanned by brute force
up to a total-dimension cap; such catalogs never carry the completeness flag.
"""

from __future__ import annotations

import functools
import itertools
import logging
import warnings
from collections import Counter

import numpy as np

from . import linalg as la
from . import reps as R
from .errors import CapExceededError, ContractError, IncompleteCatalogError, UnsupportedAlgebraError, UsageError
from .quiver import BoundQuiverAlgebra

log = logging.getLogger(__name__)

BRUTE_DIM_CAP = 6
BRUTE_CONFIG_CAP = 1 << 18


def _truncated_projective(algebra: BoundQuiverAlgebra, v: int, length: int) -> R.Representation:
    """P_v modulo the paths of length >= ``length`` (Nakayama only)."""
    chain = sorted(algebra.paths_from(v), key=len)[:length]
    by_end = {w: [q for q in chain if q.end == w] for w in algebra.quiver.vertices}
    index = {q: by_end[q.end].index(q) for q in chain}
    maps = {}
    for a in algebra.quiver.arrows:
        m = la.zeros(len(by_end[a.target]), len(by_end[a.source]))
        for i, q in enumerate(by_end[a.source]):
            nxt = q.extend(a)
            if nxt in index:
                m[index[nxt], i] = 1
        maps[a.name] = m
    return R.Representation(algebra, [len(by_end[w]) for w in algebra.quiver.vertices], maps)


def _vertex_token(v: int, n: int) -> str:
    return str(v) if n < 10 else f"{v}."


def radical_layers(M: R.Representation) -> list[tuple[int, ...]]:
    """Dimension vectors of the radical layers, top first."""
    layers = []
    cur = M
    while cur.total_dim:
        p = cur.p
        bases = []
        for v in cur.algebra.quiver.vertices:
            ins = [cur.maps[a.name] for a in cur.algebra.quiver.in_arrows(v)]
            bases.append(la.colspace(np.concatenate(ins, axis=1), p) if ins else la.zeros(cur.dim(v), 0))
        rad, _ = R.subrep(cur, bases)
        layers.append(tuple(a - b for a, b in zip(cur.dims, rad.dims)))
        cur = rad
    return layers


def module_label(M: R.Representation) -> str:
    """Top-to-socle string, e.g. ``"321"`` for the projective at 3 over 1<-2<-3."""
    n = M.algebra.n
    out = []
    for layer in radical_layers(M):
        for v, d in enumerate(layer, start=1):
            out.append(_vertex_token(v, n) * d)
    return "".join(out) or "0"


class IndCatalog:
    """Pairwise non-isomorphic indecomposables with their Hom and Ext tables."""

    def __init__(self, algebra: BoundQuiverAlgebra, members, complete: bool, labels=None):
        self.algebra = algebra
        self.members = list(members)
        self.complete = complete
        if labels is None:
            labels = [module_label(m) for m in self.members]
            seen = Counter()
            for i, lab in enumerate(labels):
                seen[lab] += 1
                if seen[lab] > 1:
                    labels[i] = f"{lab}#{seen[lab]}"
        self.labels = list(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        k = len(self.members)
        self.hom_table = np.array(
            [[R.hom_dim(a, b) for b in self.members] for a in self.members], dtype=np.int64
        ).reshape(k, k)
        self.ext_table = np.array(
            [[R.ext1_dim(a, b) for b in self.members] for a in self.members], dtype=np.int64
        ).reshape(k, k)
        self.max_dim = max((m.total_dim for m in self.members), default=0)
        self.full_mask = (1 << k) - 1
        # Auslander: on a complete catalog the Hom vector pins the iso class.
        self._hom_solvable = complete and k > 0 and np.linalg.matrix_rank(self.hom_table.astype(float)) == k
        if complete and not self._hom_solvable:
            log.warning("hom table of %s is singular; falling back to split decomposition", algebra.name)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"IndCatalog({self.algebra.name or 'algebra'}, {self.labels})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UsageError(f"no catalog member labelled {label!r}; members are {self.labels}") from None

    def mask(self, labels) -> int:
        if isinstance(labels, str):
            labels = [s for s in labels.replace(";", ",").split(",") if s.strip()]
        out = 0
        for lab in labels:
            out |= 1 << self.index(str(lab).strip())
        return out

    def labels_of(self, mask: int) -> list[str]:
        return [self.labels[i] for i in self.indices(mask)]

    def indices(self, mask: int) -> list[int]:
        return [i for i in range(len(self.members)) if mask >> i & 1]

    def reps_of(self, mask: int) -> list[R.Representation]:
        return [self.members[i] for i in self.indices(mask)]

    def require_complete(self):
        if not self.complete:
            raise IncompleteCatalogError(
                "catalog is not known to be complete; subcategory predicates refuse to run"
            )

    @functools.cached_property
    def projective_mask(self) -> int:
        return sum(1 << i for i in range(len(self)) if not any(self.ext_table[i]))

    # --- decomposition -------------------------------------------------------

    def hom_vector(self, X: R.Representation) -> np.ndarray:
        return np.array([R.hom_dim(C, X) for C in self.members], dtype=np.int64)

    def decompose(self, X: R.Representation, method: str = "auto") -> dict[int, int]:
        """Catalog indices with multiplicities whose sum is isomorphic to X."""
        if X.total_dim == 0:
            return {}
        if method == "auto":
            method = "hom" if self._hom_solvable else "split"
        if method == "hom":
            return self._decompose_hom(X)
        if method == "split":
            return self._decompose_split(X)
        raise UsageError(f"unknown decomposition method {method!r}")

    def _decompose_hom(self, X):
        h = self.hom_vector(X)
        sol = np.linalg.solve(self.hom_table.astype(float), h.astype(float))
        m = np.rint(sol).astype(np.int64)
        if (np.abs(sol - m) > 1e-6).any() or (m < 0).any() or not np.array_equal(self.hom_table @ m, h):
            raise IncompleteCatalogError(f"module with dims {X.dims} does not resolve against the catalog")
        dims = sum((np.array(self.members[i].dims) * c for i, c in enumerate(m)), np.zeros(X.algebra.n, np.int64))
        if tuple(int(d) for d in dims) != X.dims:
            raise IncompleteCatalogError(f"module with dims {X.dims} does not resolve against the catalog")
        return {i: int(c) for i, c in enumerate(m) if c}

    def _split_off(self, X):
        order = sorted(range(len(self)), key=lambda i: -self.members[i].total_dim)
        for i in order:
            C = self.members[i]
            if C.total_dim > X.total_dim or any(c > x for c, x in zip(C.dims, X.dims)):
                continue
            fs = R.hom_basis(C, X)
            if not fs:
                continue
            gs = R.hom_basis(X, C)
            # End(C) is local, so a unit combination exists iff a basis product is a unit
            for f in fs:
                for g in gs:
                    u = g.compose(f)
                    if u.is_iso():
                        g2 = u.inverse().compose(g)
                        rest, _ = R.kernel_of(g2)
                        return i, rest
        return None

    def _decompose_split(self, X, verify=True):
        out = Counter()
        cur = X
        while cur.total_dim:
            hit = self._split_off(cur)
            if hit is None:
                raise IncompleteCatalogError(
                    f"no catalog member splits off a module with dims {cur.dims}; catalog is missing an indecomposable"
                )
            i, cur = hit
            out[i] += 1
        if verify:
            rebuilt = self.assemble(out)
            same = (
                np.array_equal(self.hom_vector(rebuilt), self.hom_vector(X))
                if self.complete else R.is_isomorphic(rebuilt, X)
            )
            if not same:
                raise IncompleteCatalogError("split decomposition failed its final isomorphism check")
        return dict(out)

    def assemble(self, mult: dict[int, int]) -> R.Representation:
        parts = [self.members[i] for i, c in sorted(mult.items()) for _ in range(c)]
        if not parts:
            return R.zero_rep(self.algebra)
        return R.direct_sum(parts)[0]

    def support_mask(self, X: R.Representation) -> int:
        """Bitmask of the indecomposable summands of X."""
        return sum(1 << i for i in self.decompose(X))

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "complete": self.complete,
            "members": [
                {"label": lab, "dims": list(m.dims)} for lab, m in zip(self.labels, self.members)
            ],
            "hom_table": self.hom_table.tolist(),
            "ext_table": self.ext_table.tolist(),
        }


def nakayama_catalog(algebra: BoundQuiverAlgebra) -> IndCatalog:
    if not algebra.is_nakayama:
        raise UnsupportedAlgebraError("closed-form catalog needs a Nakayama algebra")
    members = []
    for v in algebra.quiver.vertices:
        for length in range(1, len(algebra.paths_from(v)) + 1):
            members.append(_truncated_projective(algebra, v, length))
    members.sort(key=lambda m: (m.total_dim, module_label(m)))
    return IndCatalog(algebra, members, complete=True)


def _dim_vectors(n: int, cap: int):
    for total in range(1, cap + 1):
        for combo in itertools.product(range(total + 1), repeat=n):
            if sum(combo) == total:
                yield combo


def brute_force_catalog(algebra: BoundQuiverAlgebra, dim_cap: int = BRUTE_DIM_CAP,
                        config_cap: int = BRUTE_CONFIG_CAP) -> IndCatalog:
    """All indecomposables of total dimension <= ``dim_cap``, up to isomorphism.

    Dimension vectors with more than ``config_cap`` raw configurations are
    skipped with a warning.  The result is never flagged complete.
    """
    p = algebra.p
    arrows = algebra.quiver.arrows
    found: list[R.Representation] = []
    skipped = []
    for dv in _dim_vectors(algebra.n, dim_cap):
        shapes = [(dv[a.target - 1], dv[a.source - 1]) for a in arrows]
        entries = sum(r * c for r, c in shapes)
        if p ** entries > config_cap:
            skipped.append(dv)
            continue
        for flat in itertools.product(range(p), repeat=entries):
            maps, off = {}, 0
            for a, (r, c) in zip(arrows, shapes):
                maps[a.name] = np.array(flat[off:off + r * c], dtype=np.int64).reshape(r, c)
                off += r * c
            try:
                M = R.Representation(algebra, dv, maps)
            except ContractError:
                continue
            if not R.is_indecomposable(M):
                continue
            if any(R.is_isomorphic(M, F) for F in found if F.dims == M.dims):
                continue
            found.append(M)
    if skipped:
        warnings.warn(f"brute-force catalog is partial: skipped dimension vectors {skipped}", stacklevel=2)
    found.sort(key=lambda m: (m.total_dim, module_label(m)))
    return IndCatalog(algebra, found, complete=False)


@functools.lru_cache(maxsize=32)
def enumerate_indecomposables(algebra: BoundQuiverAlgebra, brute_force: bool = False,
                              dim_cap: int = BRUTE_DIM_CAP) -> IndCatalog:
    if algebra.is_nakayama and not brute_force:
        return nakayama_catalog(algebra)
    if not brute_force:
        raise UnsupportedAlgebraError(
            "no closed-form catalog for a non-Nakayama algebra; enable brute force explicitly"
        )
    if dim_cap > 12:
        raise CapExceededError(f"brute-force dimension cap {dim_cap} is beyond desk scale")
    return brute_force_catalog(algebra, dim_cap)
