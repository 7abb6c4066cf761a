"""Subcategories of a module category as bitmasks over an indecomposable catalog.

Every closure predicate is reduced to a table of records computed once per
catalog.  A record says "if these members are present (and maybe some side
condition holds) then those members must be present too".  Checking a
subcategory is then a handful of vectorised bit operations.

Records over direct sums use at most ``summand_bound`` indecomposable summands
per side (default 2).  Fac and Sub membership and the alpha operator are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import reps as R
from .catalog import IndCatalog
from .errors import CapExceededError, ContractError, PreconditionError

SUMMAND_BOUND = 2
ALPHA_MAP_CAP = 1 << 16
MIN_RECORD_CANDIDATES = 18


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _minimal_masks(candidates: list[int], pred) -> list[int]:
    """Inclusion-minimal masks over ``candidates`` satisfying a monotone ``pred``."""
    if len(candidates) > MIN_RECORD_CANDIDATES:
        raise CapExceededError(f"{len(candidates)} candidates is too many for minimal-record search")
    found: list[int] = []
    for r in range(0, len(candidates) + 1):
        for combo in itertools.combinations(candidates, r):
            m = sum(1 << c for c in combo)
            if any(f & m == f for f in found):
                continue
            if pred(m):
                found.append(m)
    return found


def _mask(indices) -> int:
    return sum(1 << i for i in set(indices))


def _multisets(k: int, bound: int):
    for r in range(1, bound + 1):
        yield from itertools.combinations_with_replacement(range(k), r)


def _projective_classes(dim: int, p: int):
    """One nonzero vector per line (first nonzero coordinate equal to 1)."""
    for vec in itertools.product(range(p), repeat=dim):
        nz = [c for c in vec if c]
        if nz and nz[0] == 1:
            yield vec


class Calculus:
    """Record tables for one catalog."""

    def __init__(self, catalog: IndCatalog, summand_bound: int = SUMMAND_BOUND):
        self.catalog = catalog
        self.summand_bound = summand_bound
        self.k = len(catalog)
        self.full = catalog.full_mask
        H = catalog.hom_table
        self.hom_from = [sum(1 << j for j in range(self.k) if H[i][j]) for i in range(self.k)]
        self.hom_to = [sum(1 << i for i in range(self.k) if H[i][j]) for j in range(self.k)]
        self._sums = {}
        self._fac = None
        self._sub = None
        self._ext = None
        self._mor = None
        self._alpha = None

    # --- helpers --------------------------------------------------------------

    def direct_sum(self, multiset) -> R.Representation:
        key = tuple(multiset)
        if key not in self._sums:
            self._sums[key] = R.direct_sum([self.catalog.members[i] for i in key])[0]
        return self._sums[key]

    def _slices(self, multiset):
        """Per summand, per vertex, the coordinate slice inside the direct sum."""
        offs = [0] * self.catalog.algebra.n
        out = []
        for i in multiset:
            dims = self.catalog.members[i].dims
            out.append([slice(o, o + d) for o, d in zip(offs, dims)])
            offs = [o + d for o, d in zip(offs, dims)]
        return out

    def _has_zero_component(self, f, xs, ys) -> bool:
        for sl in self._slices(xs):
            if not any(m[:, s].any() for m, s in zip(f.mats, sl)):
                return True
        for sl in self._slices(ys):
            if not any(m[s, :].any() for m, s in zip(f.mats, sl)):
                return True
        return False

    def summands(self, X: R.Representation) -> int:
        return self.catalog.support_mask(X)

    # --- Fac / Sub ------------------------------------------------------------

    def _fac_records(self):
        if self._fac is None:
            xs, ms = [], []
            for x, X in enumerate(self.catalog.members):
                cands = [c for c in range(self.k) if self.hom_to[x] >> c & 1]

                def pred(m, X=X):
                    return R.trace_dims(self.catalog.reps_of(m), X) == X.dims

                for m in _minimal_masks(cands, pred):
                    xs.append(x)
                    ms.append(m)
            self._fac = (np.array(xs, dtype=np.int64), np.array(ms, dtype=np.int64))
        return self._fac

    def _sub_records(self):
        if self._sub is None:
            xs, ms = [], []
            for x, X in enumerate(self.catalog.members):
                cands = [c for c in range(self.k) if self.hom_from[x] >> c & 1]

                def pred(m, X=X):
                    return R.embeds_in_add(X, self.catalog.reps_of(m))

                for m in _minimal_masks(cands, pred):
                    xs.append(x)
                    ms.append(m)
            self._sub = (np.array(xs, dtype=np.int64), np.array(ms, dtype=np.int64))
        return self._sub

    @staticmethod
    def _upward(records, mask: int) -> int:
        xs, ms = records
        hit = xs[(ms & ~np.int64(mask)) == 0]
        out = 0
        for x in np.unique(hit):
            out |= 1 << int(x)
        return out

    def fac(self, mask: int) -> int:
        """Members X with trace(S, X) = X."""
        return self._upward(self._fac_records(), mask)

    def sub(self, mask: int) -> int:
        """Members embedding into a finite sum of members of S."""
        return self._upward(self._sub_records(), mask)

    # --- extensions -----------------------------------------------------------

    def ext_records(self):
        if self._ext is None:
            cat = self.catalog
            E = cat.ext_table
            recs = set()
            sets = list(_multisets(self.k, self.summand_bound))
            for bs in sets:
                for as_ in sets:
                    # a summand with no Ext to the other side just splits off
                    if not all(any(E[b][a] for a in as_) for b in bs):
                        continue
                    if not all(any(E[b][a] for b in bs) for a in as_):
                        continue
                    B, A = self.direct_sum(bs), self.direct_sum(as_)
                    ext = R.ext1_basis(B, A)
                    ends = _mask(bs) | _mask(as_)
                    for cls in _projective_classes(ext.dim, cat.algebra.p):
                        mid = self.summands(R.middle_term(B, A, cls).E)
                        if mid & ~ends:
                            recs.add((_mask(as_), _mask(bs), mid))
            arr = np.array(sorted(recs), dtype=np.int64).reshape(-1, 3)
            self._ext = (arr[:, 0], arr[:, 1], arr[:, 2])
        return self._ext

    def ext_violations(self, mask: int) -> np.ndarray:
        a, b, e = self.ext_records()
        m = np.int64(mask)
        live = ((a & ~m) == 0) & ((b & ~m) == 0)
        return e[live & ((e & ~m) != 0)]

    def is_ext_closed(self, mask: int) -> bool:
        return self.ext_violations(mask).size == 0

    def ext_closure(self, mask: int) -> int:
        while True:
            bad = self.ext_violations(mask)
            if bad.size == 0:
                return mask
            for e in bad:
                mask |= int(e)

    # --- morphisms between bounded sums ---------------------------------------

    def morphism_records(self):
        """(X, Y, ker, coker) summand masks over all nonzero f: X -> Y."""
        if self._mor is None:
            p = self.catalog.algebra.p
            recs = set()
            sets = list(_multisets(self.k, self.summand_bound))
            for xs in sets:
                xm = _mask(xs)
                if not any(self.hom_from[i] for i in xs):
                    continue
                for ys in sets:
                    ym = _mask(ys)
                    if not any(self.hom_from[i] & ym for i in xs):
                        continue
                    X, Y = self.direct_sum(xs), self.direct_sum(ys)
                    dim = R.hom_dim(X, Y)
                    for cls in _projective_classes(dim, p):
                        f = R.morphism_from_vector(X, Y, cls)
                        # a zero component splits off; the smaller record covers it
                        if len(xs) + len(ys) > 2 and self._has_zero_component(f, xs, ys):
                            continue
                        K = self.summands(R.kernel_of(f)[0])
                        C = self.summands(R.cokernel_of(f)[0])
                        if K & ~xm or C & ~ym:
                            recs.add((xm, ym, K, C))
            arr = np.array(sorted(recs), dtype=np.int64).reshape(-1, 4)
            self._mor = tuple(arr[:, i] for i in range(4))
        return self._mor

    def maps_closed(self, src: int, dst: int, ker_in: int | None, coker_in: int | None) -> bool:
        """Every f from add(src) to add(dst) has kernel in ker_in and cokernel in coker_in."""
        x, y, k, c = self.morphism_records()
        live = ((x & ~np.int64(src)) == 0) & ((y & ~np.int64(dst)) == 0)
        if ker_in is not None and np.any(live & ((k & ~np.int64(ker_in)) != 0)):
            return False
        if coker_in is not None and np.any(live & ((c & ~np.int64(coker_in)) != 0)):
            return False
        return True

    # --- alpha ----------------------------------------------------------------

    def alpha_records(self):
        """Per member A: (X, ker) summand masks over all f: X -> A, with the
        multiplicity of C in X at most dim Hom(C, A)."""
        if self._alpha is None:
            cat = self.catalog
            p = cat.algebra.p
            recs = []
            for a, A in enumerate(cat.members):
                bounds = [int(cat.hom_table[i][a]) for i in range(self.k)]
                cands = [i for i in range(self.k) if bounds[i]]
                ranges = [range(bounds[i] + 1) for i in cands]
                for mult in itertools.product(*ranges):
                    if not any(mult):
                        continue
                    ms = tuple(i for i, m in zip(cands, mult) for _ in range(m))
                    xm = _mask(ms)
                    X = self.direct_sum(ms)
                    dim = R.hom_dim(X, A)
                    if p ** dim > ALPHA_MAP_CAP:
                        raise CapExceededError(f"alpha record scan for {cat.labels[a]} needs {p}^{dim} maps")
                    for cls in _projective_classes(dim, p):
                        f = R.morphism_from_vector(X, A, cls)
                        K = self.summands(R.kernel_of(f)[0])
                        if K & ~xm:
                            recs.append((a, xm, K))
            arr = np.array(sorted(set(recs)), dtype=np.int64).reshape(-1, 3)
            self._alpha = (arr[:, 0], arr[:, 1], arr[:, 2])
        return self._alpha

    def alpha(self, mask: int) -> int:
        a, x, k = self.alpha_records()
        m = np.int64(mask)
        bad = a[((x & ~m) == 0) & ((k & ~m) != 0)]
        out = mask
        for i in np.unique(bad):
            out &= ~(1 << int(i))
        return out

    # --- perps ----------------------------------------------------------------

    def perp_right(self, mask: int) -> int:
        out = self.full
        for c in _bits(mask):
            out &= ~self.hom_from[c]
        return out

    def perp_left(self, mask: int) -> int:
        out = self.full
        for c in _bits(mask):
            out &= ~self.hom_to[c]
        return out

    # --- predicates -----------------------------------------------------------

    def is_quotient_closed(self, m): return self.fac(m) == m
    def is_submodule_closed(self, m): return self.sub(m) == m
    def is_torsion_class(self, m): return self.is_quotient_closed(m) and self.is_ext_closed(m)
    def is_torsionfree_class(self, m): return self.is_submodule_closed(m) and self.is_ext_closed(m)
    def is_image_closed(self, m): return self.fac(m) & self.sub(m) & ~m == 0
    def is_cokernel_closed(self, m): return self.maps_closed(m, m, None, m)
    def is_kernel_closed(self, m): return self.maps_closed(m, m, m, None)

    def is_ice_closed(self, m):
        return self.is_image_closed(m) and self.is_ext_closed(m) and self.is_cokernel_closed(m)

    def is_wide(self, m):
        return self.is_ext_closed(m) and self.maps_closed(m, m, m, m)

    def torsion_in_wide(self, s: int, w: int, check=True) -> bool:
        """Is ``s`` a torsion class of the abelian category add(w)?"""
        if check and not self.is_wide(w):
            raise PreconditionError("ambient subcategory is not wide")
        return s & ~w == 0 and self.is_ext_closed(s) and self.fac(s) & w & ~s == 0

    def alpha_checked(self, m: int) -> int:
        if not self.is_ice_closed(m):
            raise PreconditionError(f"{self.catalog.labels_of(m)} is not ICE-closed")
        return self.alpha(m)


def calculus(catalog: IndCatalog, summand_bound: int = SUMMAND_BOUND) -> Calculus:
    cache = catalog.__dict__.setdefault("_calculi", {})
    if summand_bound not in cache:
        catalog.require_complete()
        cache[summand_bound] = Calculus(catalog, summand_bound)
    return cache[summand_bound]


@dataclass(frozen=True)
class Subcat:
    """add(M_i : bit i of ``mask`` set) inside the module category."""

    catalog: IndCatalog
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask & ~self.catalog.full_mask:
            raise ContractError("mask has bits outside the catalog")

    @classmethod
    def of(cls, catalog, labels) -> "Subcat":
        return cls(catalog, catalog.mask(labels))

    @classmethod
    def full(cls, catalog):
        return cls(catalog, catalog.full_mask)

    @classmethod
    def empty(cls, catalog):
        return cls(catalog, 0)

    @property
    def calc(self) -> Calculus:
        return calculus(self.catalog)

    @property
    def labels(self) -> list[str]:
        return sorted(self.catalog.labels_of(self.mask))

    def __contains__(self, label):
        return bool(self.mask >> self.catalog.index(label) & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.labels)

    def _wrap(self, m):
        return Subcat(self.catalog, m)

    def __and__(self, o): return self._wrap(self.mask & o.mask)
    def __or__(self, o): return self._wrap(self.mask | o.mask)
    def __le__(self, o): return self.mask & ~o.mask == 0
    def __lt__(self, o): return self <= o and self.mask != o.mask

    def __repr__(self):
        return "{" + ",".join(self.labels) + "}"

    def to_json(self):
        return self.labels

    # closures and operators
    def fac_closure(self): return self._wrap(self.calc.fac(self.mask))
    def sub_closure(self): return self._wrap(self.calc.sub(self.mask))
    def ext_closure(self): return self._wrap(self.calc.ext_closure(self.mask))
    def alpha(self): return self._wrap(self.calc.alpha_checked(self.mask))
    def perp_right(self): return self._wrap(self.calc.perp_right(self.mask))
    def perp_left(self): return self._wrap(self.calc.perp_left(self.mask))

    # predicates
    def is_quotient_closed(self): return self.calc.is_quotient_closed(self.mask)
    def is_ext_closed(self): return self.calc.is_ext_closed(self.mask)
    def is_torsion_class(self): return self.calc.is_torsion_class(self.mask)
    def is_torsionfree_class(self): return self.calc.is_torsionfree_class(self.mask)
    def is_image_closed(self): return self.calc.is_image_closed(self.mask)
    def is_cokernel_closed(self): return self.calc.is_cokernel_closed(self.mask)
    def is_kernel_closed(self): return self.calc.is_kernel_closed(self.mask)
    def is_ice_closed(self): return self.calc.is_ice_closed(self.mask)
    def is_wide(self): return self.calc.is_wide(self.mask)

    def torsion_in_wide(self, W: "Subcat") -> bool:
        return self.calc.torsion_in_wide(self.mask, W.mask)


def fac_closure(S: Subcat) -> Subcat:
    return S.fac_closure()


def ext_closure(S: Subcat) -> Subcat:
    return S.ext_closure()


def alpha(S: Subcat) -> Subcat:
    return S.alpha()


def Fac(catalog: IndCatalog, labels) -> Subcat:
    """Fac of the sum of the named members."""
    return Subcat.of(catalog, labels).fac_closure()


def trace_quotient_mask(catalog: IndCatalog, U: int, X: R.Representation) -> int:
    """Summands of X / trace(U, X)."""
    _, incl = R.trace(catalog.reps_of(U), X)
    Q, _ = R.quotient(X, incl.mats)
    return catalog.support_mask(Q)


SCAN_MEMBER_CAP = 20


def scan_subcats(catalog: IndCatalog, predicate: str) -> list[int]:
    """Masks of all subcategories satisfying ``Calculus.<predicate>``, in mask order."""
    if len(catalog) > SCAN_MEMBER_CAP:
        raise CapExceededError(f"subset scan over {len(catalog)} members exceeds the cap of {SCAN_MEMBER_CAP}")
    calc = calculus(catalog)
    test = getattr(calc, predicate)
    return [m for m in range(catalog.full_mask + 1) if test(m)]


def ice_closed_subcats(catalog: IndCatalog) -> list[int]:
    return scan_subcats(catalog, "is_ice_closed")


def wide_subcats(catalog: IndCatalog) -> list[int]:
    return scan_subcats(catalog, "is_wide")


__all__ = [
    "scan_subcats", "ice_closed_subcats", "wide_subcats",
    "Calculus", "Subcat", "calculus", "fac_closure", "ext_closure", "alpha", "Fac",
    "trace_quotient_mask", "SUMMAND_BOUND",
]
