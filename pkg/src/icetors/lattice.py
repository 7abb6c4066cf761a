"""Lattices of torsion classes, intervals, hearts and maximal meet intervals."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import networkx as nx

from .catalog import IndCatalog
from .errors import CapExceededError, FalsificationError, PreconditionError
from .parallel import parallel_map
from .subcat import Calculus, Subcat, calculus, trace_quotient_mask

SCAN_LIMIT = 16
SIZE_CAP = 24

_scan_calc: Calculus | None = None
_scan_ambient = 0


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _submasks(ambient: int):
    """All submasks of ``ambient``, in increasing numeric order."""
    bits = [i for i in range(ambient.bit_length()) if ambient >> i & 1]
    for n in range(1 << len(bits)):
        yield sum(1 << bits[j] for j in range(len(bits)) if n >> j & 1)


def _scan_chunk(chunk):
    calc, ambient = _scan_calc, _scan_ambient
    out = []
    for m in chunk:
        if ambient == calc.full:
            ok = calc.is_torsion_class(m)
        else:
            ok = calc.torsion_in_wide(m, ambient, check=False)
        if ok:
            out.append(m)
    return out


class TorsLattice:
    """Torsion classes of add(ambient), where ambient is the whole catalog or a
    wide subcategory of it.  ``covers`` holds (i, j) with element j a lower
    cover of element i."""

    def __init__(self, catalog: IndCatalog, elements, ambient: int | None = None):
        self.catalog = catalog
        self.calc = calculus(catalog)
        self.ambient = catalog.full_mask if ambient is None else ambient
        self.elements = sorted(set(elements), key=lambda m: (_popcount(m), sorted(catalog.labels_of(m))))
        self.index = {m: i for i, m in enumerate(self.elements)}
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.elements)))
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                if i != j and b & ~a == 0:
                    g.add_edge(i, j)
        red = nx.transitive_reduction(g)
        self.covers = sorted(red.edges())
        self._lower = {i: [] for i in range(len(self.elements))}
        self._upper = {i: [] for i in range(len(self.elements))}
        for i, j in self.covers:
            self._lower[i].append(j)
            self._upper[j].append(i)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, mask):
        return self._mask(mask) in self.index

    @staticmethod
    def _mask(x) -> int:
        return x.mask if isinstance(x, Subcat) else int(x)

    def subcat(self, mask) -> Subcat:
        return Subcat(self.catalog, self._mask(mask))

    def lower_covers(self, T) -> list[int]:
        return [self.elements[j] for j in self._lower[self.index[self._mask(T)]]]

    def upper_covers(self, T) -> list[int]:
        return [self.elements[j] for j in self._upper[self.index[self._mask(T)]]]

    def interval_elements(self, lower, upper) -> list[int]:
        lo, up = self._mask(lower), self._mask(upper)
        return [m for m in self.elements if lo & ~m == 0 and m & ~up == 0]

    def t_minus(self, T, check: bool = True) -> int:
        """T intersected with all of its lower covers."""
        T = self._mask(T)
        if T not in self.index:
            raise PreconditionError(f"{self.catalog.labels_of(T)} is not in the lattice")
        out = T
        for c in self.lower_covers(T):
            out &= c
        if check and self.ambient == self.catalog.full_mask:
            other = T & self.calc.perp_left(self.calc.alpha(T))
            if other != out:
                raise FalsificationError(
                    "T minus disagrees with T cap left-perp(alpha T)",
                    {"T": self.catalog.labels_of(T), "covers": self.catalog.labels_of(out),
                     "alpha": self.catalog.labels_of(other)},
                )
        return out

    def hasse_dot(self, name: str = "tors") -> str:
        return hasse_dot(self, name)

    def to_json(self) -> dict:
        return {
            "elements": [sorted(self.catalog.labels_of(m)) for m in self.elements],
            "covers": [list(c) for c in self.covers],
        }


def torsion_closure(calc: Calculus, mask: int, ambient: int | None = None) -> int:
    """Smallest torsion class of add(ambient) containing ``mask``."""
    amb = calc.full if ambient is None else ambient
    while True:
        nxt = calc.ext_closure(calc.fac(mask) & amb)
        if nxt == mask:
            return mask
        mask = nxt


def _generate(calc: Calculus, ambient: int) -> list[int]:
    members = [i for i in range(calc.k) if ambient >> i & 1]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for T in frontier:
            for i in members:
                if T >> i & 1:
                    continue
                T2 = torsion_closure(calc, T | 1 << i, ambient)
                if T2 not in seen:
                    seen.add(T2)
                    nxt.append(T2)
        frontier = nxt
    return sorted(seen)


def tors_of(catalog: IndCatalog, ambient: int | None = None, strategy: str = "auto", jobs: int = 1) -> TorsLattice:
    global _scan_calc, _scan_ambient
    catalog.require_complete()
    calc = calculus(catalog)
    ambient = catalog.full_mask if ambient is None else ambient
    size = _popcount(ambient)
    if size > SIZE_CAP:
        raise CapExceededError(f"{size} indecomposables exceeds the lattice size cap {SIZE_CAP}")
    if ambient != catalog.full_mask and not calc.is_wide(ambient):
        raise PreconditionError("torsion classes are only computed inside wide subcategories")
    if strategy == "auto":
        strategy = "scan" if size <= SCAN_LIMIT else "generate"
    if strategy == "scan":
        _scan_calc, _scan_ambient = calc, ambient
        masks = list(_submasks(ambient))
        step = 256
        chunks = [masks[i:i + step] for i in range(0, len(masks), step)]
        found = [m for part in parallel_map(_scan_chunk, chunks, jobs, min_items=8) for m in part]
    elif strategy == "generate":
        found = _generate(calc, ambient)
    else:
        raise PreconditionError(f"unknown enumeration strategy {strategy!r}")
    return TorsLattice(catalog, found, ambient)


def enumerate_tors(catalog: IndCatalog, strategy: str = "auto", jobs: int = 1) -> TorsLattice:
    return _cached_tors(catalog, catalog.full_mask, strategy, jobs)


@functools.lru_cache(maxsize=256)
def _cached_tors(catalog, ambient, strategy, jobs):
    return tors_of(catalog, ambient, strategy, jobs)


def tors_of_heart(catalog: IndCatalog, heart: int) -> TorsLattice:
    return _cached_tors(catalog, heart, "auto", 1)


def _node_label(catalog, mask) -> str:
    labels = sorted(catalog.labels_of(mask))
    return ",".join(labels) if labels else "0"


def hasse_dot(lattice: TorsLattice, name: str = "tors") -> str:
    cat = lattice.catalog
    names = [_node_label(cat, m) for m in lattice.elements]
    order = sorted(range(len(names)), key=lambda i: names[i])
    node_id = {i: f"n{k}" for k, i in enumerate(order)}
    lines = [f"digraph {name} {{"]
    for i in order:
        lines.append(f'  {node_id[i]} [label="{names[i]}"];')
    rank = {i: k for k, i in enumerate(order)}
    edges = sorted((rank[i], rank[j]) for i, j in lattice.covers)
    for a, b in edges:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_graph(lattice: TorsLattice) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(lattice)))
    g.add_edges_from(lattice.covers)
    return g


# --- intervals ----------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    catalog: IndCatalog
    lower: int
    upper: int

    def __post_init__(self):
        if self.lower & ~self.upper:
            raise PreconditionError("interval lower end is not contained in the upper end")

    @property
    def heart(self) -> int:
        return self.upper & calculus(self.catalog).perp_right(self.lower)

    def subcats(self):
        return Subcat(self.catalog, self.lower), Subcat(self.catalog, self.upper), Subcat(self.catalog, self.heart)

    def __contains__(self, mask: int) -> bool:
        return self.lower & ~mask == 0 and mask & ~self.upper == 0

    def within(self, other: "Interval") -> bool:
        return other.lower & ~self.lower == 0 and self.upper & ~other.upper == 0

    def to_json(self) -> dict:
        cat = self.catalog
        return {
            "lower": sorted(cat.labels_of(self.lower)),
            "upper": sorted(cat.labels_of(self.upper)),
            "heart": sorted(cat.labels_of(self.heart)),
        }

    def __repr__(self):
        cat = self.catalog
        return f"[{_node_label(cat, self.lower)} | {_node_label(cat, self.upper)}]"


def whole(lattice: TorsLattice) -> Interval:
    return Interval(lattice.catalog, 0, lattice.ambient)


def is_wide_interval(I: Interval) -> bool:
    return calculus(I.catalog).is_wide(I.heart)


def _meet_in(lattice: TorsLattice, upper: int, context: Interval) -> int:
    out = upper
    for c in lattice.lower_covers(upper):
        if c in context:
            out &= c
    return out


def is_meet_interval(I: Interval, lattice: TorsLattice) -> bool:
    return I.lower == _meet_in(lattice, I.upper, I)


def maximal_meet_lower(upper: int, W: Interval, lattice: TorsLattice) -> int:
    """The only lower end making [?, upper] a maximal meet interval in W."""
    return _meet_in(lattice, upper, W)


def is_maximal_meet_interval_in(I: Interval, W: Interval, lattice: TorsLattice, check: bool = True) -> bool:
    if check and not is_wide_interval(W):
        raise PreconditionError(f"{W} is not a wide interval")
    if not I.within(W):
        return False
    return I.lower == maximal_meet_lower(I.upper, W, lattice)


def star(catalog: IndCatalog, U: int, D: int) -> int:
    """Members X whose quotient X / trace(U, X) lies in add D."""
    calc = calculus(catalog)
    cache = calc.__dict__.setdefault("_tq", {})
    out = 0
    for x, X in enumerate(catalog.members):
        key = (U, x)
        if key not in cache:
            cache[key] = trace_quotient_mask(catalog, U, X)
        if cache[key] & ~D == 0:
            out |= 1 << x
    return out


def interval_tors_iso_check(W: Interval, lattice: TorsLattice, raise_on_fail: bool = True) -> dict:
    """Compare [W.lower, W.upper] with the torsion classes of the heart."""
    cat = W.catalog
    calc = calculus(cat)
    if not is_wide_interval(W):
        raise PreconditionError(f"{W} is not a wide interval")
    H = W.heart
    left = lattice.interval_elements(W.lower, W.upper)
    right = tors_of_heart(cat, H).elements
    perp = calc.perp_right(W.lower)
    fwd = {C: C & perp for C in left}
    bwd = {D: star(cat, W.lower, D) for D in right}
    failures = []
    if len(left) != len(right):
        failures.append(f"sizes differ: {len(left)} vs {len(right)}")
    right_set = set(right)
    for C, D in fwd.items():
        if D not in right_set:
            failures.append(f"{cat.labels_of(C)} maps outside tors(heart)")
        elif bwd[D] != C:
            failures.append(f"{cat.labels_of(C)} does not round-trip")
    left_set = set(left)
    for D, C in bwd.items():
        if C not in left_set:
            failures.append(f"star of {cat.labels_of(D)} leaves the interval")
        elif fwd[C] != D:
            failures.append(f"{cat.labels_of(D)} does not round-trip")
    if not failures:
        for a in left:
            for b in left:
                if (a & ~b == 0) != (fwd[a] & ~fwd[b] == 0):
                    failures.append(f"order not preserved at {cat.labels_of(a)}, {cat.labels_of(b)}")
                if a & ~b == 0:
                    h_left = b & calc.perp_right(a)
                    h_right = fwd[b] & calc.perp_right(fwd[a]) & H
                    if h_left != h_right:
                        failures.append(f"heart not preserved on [{cat.labels_of(a)}, {cat.labels_of(b)}]")
    report = {
        "interval": W.to_json(),
        "interval_size": len(left),
        "heart_tors_size": len(right),
        "ok": not failures,
        "failures": failures,
    }
    if failures and raise_on_fail:
        raise FalsificationError("interval / heart lattice isomorphism failed", report)
    return report


def wide_intervals(lattice: TorsLattice) -> list[Interval]:
    cat = lattice.catalog
    out = []
    for lo in lattice.elements:
        for up in lattice.elements:
            if lo & ~up == 0:
                I = Interval(cat, lo, up)
                if is_wide_interval(I):
                    out.append(I)
    return out


def enumerate_mmi_sequences(lattice: TorsLattice, n: int) -> list[list[Interval]]:
    """Decreasing chains of maximal meet intervals of length n, each inside the
    previous one, the first inside the whole lattice."""
    if n < 1:
        raise PreconditionError("sequence length must be at least 1")
    cat = lattice.catalog
    top = whole(lattice)

    def extend(chain):
        W = chain[-1] if chain else top
        out = []
        for T in lattice.interval_elements(W.lower, W.upper):
            I = Interval(cat, maximal_meet_lower(T, W, lattice), T)
            if not is_wide_interval(I):
                raise FalsificationError(f"maximal meet interval {I} is not wide")
            out.append(chain + [I])
        return out

    chains = [[]]
    for _ in range(n):
        chains = [c for chain in chains for c in extend(chain)]
    return chains
