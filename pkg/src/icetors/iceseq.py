"""Integer-indexed decreasing sequences of subcategories.

A sequence stores entries for ``lo <= k <= hi``.  Outside that window it is
either full / empty (the usual convention) or constant, continuing the
boundary entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import IndCatalog
from .errors import CapExceededError, FalsificationError, PreconditionError
from .lattice import (
    Interval, TorsLattice, enumerate_tors, is_maximal_meet_interval_in, is_wide_interval,
    star, tors_of_heart, whole,
)
from .parallel import parallel_map
from .subcat import Calculus, calculus

SCAN_BITS_CAP = 24


class _SeqBase:
    catalog: IndCatalog
    lo: int
    hi: int
    below: str
    above: str

    def entry(self, k: int) -> int:
        raise NotImplementedError

    def entries(self) -> list[int]:
        return [self.entry(k) for k in range(self.lo, self.hi + 1)]

    def shifted(self, s: int) -> "ShiftedView":
        """The sequence k -> C(k + s)."""
        return ShiftedView(self, s)

    @property
    def is_full(self) -> bool:
        return self.below == "full" and self.above == "empty"

    def is_decreasing(self) -> bool:
        return all(self.entry(k + 1) & ~self.entry(k) == 0 for k in range(self.lo - 1, self.hi + 1))

    def length(self) -> int | None:
        """Smallest n with C(1) = 0 and C(-n+1) full, if any."""
        if self.entry(1) != 0:
            return None
        full = self.catalog.full_mask
        for n in range(1, 1 - (self.lo - 1) + 1):
            if self.entry(-n + 1) == full:
                return n
        return None

    def to_json(self) -> dict:
        cat = self.catalog
        return {
            "lo": self.lo,
            "hi": self.hi,
            "entries": [sorted(cat.labels_of(m)) for m in self.entries()],
            "below": self.below,
            "above": self.above,
        }

    def __eq__(self, other):
        if not isinstance(other, _SeqBase):
            return NotImplemented
        lo = min(self.lo, other.lo) - 1
        hi = max(self.hi, other.hi) + 1
        return self.catalog is other.catalog and all(self.entry(k) == other.entry(k) for k in range(lo, hi + 1))

    def __hash__(self):
        return hash(tuple(self.entry(k) for k in range(self.lo - 1, self.hi + 2)))

    def __repr__(self):
        cat = self.catalog
        body = ", ".join(f"{k}:{{{','.join(sorted(cat.labels_of(self.entry(k))))}}}"
                         for k in range(self.lo, self.hi + 1))
        return f"IceSequence({body}; below={self.below}, above={self.above})"


@dataclass(frozen=True, eq=False)
class IceSequence(_SeqBase):
    catalog: IndCatalog
    lo: int
    values: tuple
    below: str = "full"
    above: str = "empty"

    def __post_init__(self):
        if self.below not in ("full", "constant") or self.above not in ("empty", "constant"):
            raise PreconditionError("boundary conventions are full|constant below and empty|constant above")
        if not self.values:
            raise PreconditionError("a sequence needs at least one stored entry")

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def entry(self, k: int) -> int:
        if k < self.lo:
            return self.catalog.full_mask if self.below == "full" else self.values[0]
        if k > self.hi:
            return 0 if self.above == "empty" else self.values[-1]
        return self.values[k - self.lo]

    @classmethod
    def from_labels(cls, catalog, lo, entries, below="full", above="empty"):
        return cls(catalog, lo, tuple(catalog.mask(e) for e in entries), below, above)

    @classmethod
    def from_json(cls, catalog, data):
        return cls.from_labels(catalog, int(data["lo"]), data["entries"],
                               data.get("below", "full"), data.get("above", "empty"))


class ShiftedView(_SeqBase):
    """Reindexed view sharing the underlying entries."""

    def __init__(self, base: _SeqBase, s: int):
        self.base = base
        self.s = s

    catalog = property(lambda self: self.base.catalog)
    below = property(lambda self: self.base.below)
    above = property(lambda self: self.base.above)
    lo = property(lambda self: self.base.lo - self.s)
    hi = property(lambda self: self.base.hi - self.s)

    def entry(self, k: int) -> int:
        return self.base.entry(k + self.s)


# --- predicates ------------------------------------------------------------------

def _narrow_masks(calc: Calculus, pairs) -> bool:
    for a, b in pairs:
        if b & ~a:
            return False
        if not calc.is_ext_closed(a):
            return False
        if not calc.maps_closed(a, b, a, b):
            return False
    return True


def _ice_masks(calc: Calculus, pairs) -> bool:
    for a, b in pairs:
        if b & ~a:
            return False
        if not calc.is_ice_closed(a):
            return False
        if not calc.torsion_in_wide(b, calc.alpha(a), check=False):
            return False
    return True


def _pairs(seq: _SeqBase):
    return [(seq.entry(k), seq.entry(k + 1)) for k in range(seq.lo - 1, seq.hi + 1)]


def is_narrow(seq: _SeqBase) -> bool:
    """Each entry is extension-closed and every map from add C(k) to add C(k+1)
    has kernel in C(k) and cokernel in C(k+1)."""
    return _narrow_masks(calculus(seq.catalog), _pairs(seq))


def is_ice(seq: _SeqBase) -> bool:
    """Each entry is ICE-closed and the next one is a torsion class in its alpha."""
    return _ice_masks(calculus(seq.catalog), _pairs(seq))


# --- exhaustive scan --------------------------------------------------------------

_scan_state: dict = {}


def _decreasing_tuples(full: int, width: int):
    """Tuples (C(-w+1), ..., C(0)) with each entry inside the previous one."""
    def rec(prefix, parent):
        if len(prefix) == width:
            yield tuple(prefix)
            return
        sub = parent
        while True:
            yield from rec(prefix + [sub], sub)
            if sub == 0:
                break
            sub = (sub - 1) & parent
    yield from rec([], full)


def _scan_one(tup):
    calc = _scan_state["calc"]
    full = calc.full
    chain = [full] + list(tup) + [0]
    pairs = list(zip(chain, chain[1:]))
    return _narrow_masks(calc, pairs), _ice_masks(calc, pairs)


def narrow_iff_ice_scan(catalog: IndCatalog, window: int, jobs: int = 1) -> dict:
    """Evaluate both predicates on every decreasing tuple C(-w+1) ⊇ ... ⊇ C(0),
    with everything below full and everything above empty."""
    if window < 1:
        raise PreconditionError("window must be at least 1")
    bits = len(catalog) * window
    if bits > SCAN_BITS_CAP:
        raise CapExceededError(f"scan over {bits} bits exceeds the cap of {SCAN_BITS_CAP}")
    calc = calculus(catalog)
    _scan_state["calc"] = calc
    tuples = list(_decreasing_tuples(catalog.full_mask, window))
    results = parallel_map(_scan_one, tuples, jobs)
    disagreements = [t for t, (n, i) in zip(tuples, results) if n != i]
    valid = [t for t, (n, i) in zip(tuples, results) if n and i]
    by_length = {}
    for n in range(1, window + 2):
        # entry -n+1 sits at tuple position window - n; n = window + 1 is the convention
        by_length[n] = sum(1 for t in valid if n == window + 1 or t[window - n] == catalog.full_mask)
    return {
        "algebra": catalog.algebra.name,
        "window": window,
        "tuples": 1 << bits,
        "decreasing": len(tuples),
        "narrow": sum(1 for n, _ in results if n),
        "ice": sum(1 for _, i in results if i),
        "valid_by_length": by_length,
        "disagreements": [[sorted(catalog.labels_of(m)) for m in t] for t in disagreements],
        "ok": not disagreements,
    }


# --- maximal meet intervals <-> sequences ---------------------------------------

def _check_chain(chain, lattice: TorsLattice):
    W = whole(lattice)
    for I in chain:
        if not is_maximal_meet_interval_in(I, W, lattice):
            raise PreconditionError(f"{I} is not a maximal meet interval in {W}")
        W = I


def seq_from_mmi(chain: list[Interval], lattice: TorsLattice | None = None) -> IceSequence:
    """C(k) = T_k ∩ U_{k-1}^⊥ for 1 <= k <= n, full below and empty above."""
    if not chain:
        raise PreconditionError("empty chain")
    cat = chain[0].catalog
    lattice = lattice or enumerate_tors(cat)
    _check_chain(chain, lattice)
    calc = calculus(cat)
    prev = 0
    values = []
    for I in chain:
        values.append(I.upper & calc.perp_right(prev))
        prev = I.lower
    seq = IceSequence(cat, 1, tuple(values))
    if not is_ice(seq):
        raise FalsificationError("sequence built from a maximal meet chain is not ICE", seq.to_json())
    return seq


def normalized(seq: _SeqBase) -> _SeqBase:
    """Reindex so that the stored window starts at 1."""
    return seq if seq.lo == 1 else seq.shifted(seq.lo - 1)


def mmi_from_seq(seq: _SeqBase, lattice: TorsLattice | None = None) -> list[Interval]:
    """Inverse of ``seq_from_mmi`` on full ICE sequences."""
    if not seq.is_full:
        raise PreconditionError("mmi_from_seq needs a full sequence (full below, empty above)")
    seq = normalized(seq)
    cat = seq.catalog
    calc = calculus(cat)
    lattice = lattice or enumerate_tors(cat)
    n = seq.hi
    T = seq.entry(1)
    if T not in lattice:
        raise PreconditionError(f"C(1) = {cat.labels_of(T)} is not a torsion class")
    chain = [Interval(cat, lattice.t_minus(T), T)]
    for k in range(1, n):
        I = chain[-1]
        heart = I.heart
        if heart != calc.alpha(seq.entry(k)):
            raise FalsificationError(
                f"heart of step {k} differs from alpha(C({k}))",
                {"heart": cat.labels_of(heart), "alpha": cat.labels_of(calc.alpha(seq.entry(k)))},
            )
        inner = tors_of_heart(cat, heart)
        D = seq.entry(k + 1)
        if D not in inner:
            raise PreconditionError(f"C({k + 1}) is not a torsion class in alpha(C({k}))")
        T2 = star(cat, I.lower, D)
        U2 = star(cat, I.lower, inner.t_minus(D, check=False))
        nxt = Interval(cat, U2, T2)
        if not is_maximal_meet_interval_in(nxt, I, lattice):
            raise FalsificationError(f"{nxt} is not a maximal meet interval in {I}")
        chain.append(nxt)
    return chain


def ice_sequences(catalog: IndCatalog, n: int) -> list[IceSequence]:
    """All full ICE sequences with C(0) full and C(n+1) = 0, stored on [1, n]."""
    calc = calculus(catalog)
    out = []
    for tup in _decreasing_tuples(catalog.full_mask, n):
        seq = IceSequence(catalog, 1, tup)
        if _ice_masks(calc, _pairs(seq)):
            out.append(seq)
    return out


def mmi_roundtrip(catalog: IndCatalog, n: int) -> dict:
    from .lattice import enumerate_mmi_sequences

    lattice = enumerate_tors(catalog)
    chains = enumerate_mmi_sequences(lattice, n)
    seqs = ice_sequences(catalog, n)
    failures = []
    images = set()
    for chain in chains:
        seq = seq_from_mmi(chain, lattice)
        images.add(seq)
        back = mmi_from_seq(seq, lattice)
        if [(I.lower, I.upper) for I in back] != [(I.lower, I.upper) for I in chain]:
            failures.append(repr(chain))
    for seq in seqs:
        if seq_from_mmi(mmi_from_seq(seq, lattice), lattice) != seq:
            failures.append(repr(seq))
    if images != set(seqs):
        failures.append("image of seq_from_mmi differs from the set of ICE sequences")
    return {"algebra": catalog.algebra.name, "n": n, "chains": len(chains), "sequences": len(seqs),
            "ok": not failures, "failures": failures}


def thick_correspondence(catalog: IndCatalog) -> dict:
    """Wide subcategories by predicate scan versus hearts of [T⁻, T]."""
    calc = calculus(catalog)
    lattice = enumerate_tors(catalog)
    by_scan = {m for m in range(catalog.full_mask + 1) if calc.is_wide(m)}
    by_hearts = set()
    for T in lattice.elements:
        I = Interval(catalog, lattice.t_minus(T), T)
        if not is_wide_interval(I):
            raise FalsificationError(f"{I} is not wide")
        by_hearts.add(I.heart)
    constant_ok = all(
        is_ice(IceSequence(catalog, 0, (W,), "constant", "constant")) for W in by_scan
    )
    constant_wide = {
        m for m in range(catalog.full_mask + 1)
        if calc.is_ice_closed(m) and is_ice(IceSequence(catalog, 0, (m,), "constant", "constant"))
    }
    ok = by_scan == by_hearts and constant_ok and constant_wide == by_scan
    return {
        "algebra": catalog.algebra.name,
        "wide_by_scan": len(by_scan),
        "wide_by_hearts": len(by_hearts),
        "constant_sequences_match": constant_ok and constant_wide == by_scan,
        "wide": sorted(sorted(catalog.labels_of(m)) for m in by_scan),
        "ok": ok,
    }

