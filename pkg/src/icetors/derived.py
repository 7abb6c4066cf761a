"""Windowed aisles in the derived category of a hereditary algebra.

An aisle is stored by its layers S(k): the subcategory of modules M whose
stalk M[-k] belongs to it.  Layers are full for k <= lo and empty for k > 0.
Everything here runs on the complexes of ``complexes``; the catalog Hom/Ext
tables are only used for bookkeeping that the tests cross-check against
chain-level Hom spaces.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import complexes as Cx
from .catalog import IndCatalog
from .errors import CapExceededError, FalsificationError, PreconditionError, WindowTooSmallError
from .iceseq import IceSequence, _SeqBase, ice_sequences
from .parallel import parallel_map
from .subcat import _bits, _mask, _multisets, _projective_classes

SCAN_BITS_CAP = 24
APPROX_ROUNDS = 64


# --- aisles ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WindowedAisle:
    catalog: IndCatalog
    lo: int
    free: tuple  # masks of S(lo+1), ..., S(0)

    def __post_init__(self):
        if self.lo > 0:
            raise PreconditionError("the window [lo, 0] needs lo <= 0")
        if len(self.free) != -self.lo:
            raise PreconditionError(f"expected {-self.lo} free layers, got {len(self.free)}")

    @classmethod
    def from_layers(cls, catalog, lo: int, layers: dict):
        """``layers`` maps degrees lo+1..0 to label lists or masks; missing ones are empty."""
        def m(x):
            return x if isinstance(x, (int, np.integer)) else catalog.mask(x)
        return cls(catalog, lo, tuple(int(m(layers.get(k, 0))) for k in range(lo + 1, 1)))

    @classmethod
    def standard(cls, catalog, lo: int = 0):
        return cls(catalog, lo, (catalog.full_mask,) * -lo)

    def layer(self, k: int) -> int:
        if k <= self.lo:
            return self.catalog.full_mask
        if k > 0:
            return 0
        return self.free[k - self.lo - 1]

    def shifted(self, n: int) -> "WindowedAisle":
        """U[n], whose layers are S(k + n)."""
        lo = self.lo - n
        if lo > 0:
            raise PreconditionError("shift leaves the window convention")
        return WindowedAisle(self.catalog, lo, tuple(self.layer(k + n) for k in range(lo + 1, 1)))

    def is_shift_closed(self) -> bool:
        return all(self.layer(k + 1) & ~self.layer(k) == 0 for k in range(self.lo, 1))

    def contains(self, coh: dict) -> bool:
        """Whether an object with the given cohomology decomposition lies in U."""
        return all(_mask(c) & ~self.layer(k) == 0 for k, c in coh.items())

    def _key(self):
        lo = min(self.lo, 0) - 1
        return tuple(self.layer(k) for k in range(lo, 2))

    def __eq__(self, other):
        if not isinstance(other, WindowedAisle):
            return NotImplemented
        lo = min(self.lo, other.lo) - 1
        return self.catalog is other.catalog and all(
            self.layer(k) == other.layer(k) for k in range(lo, 2))

    def __hash__(self):
        # layers at and below lo are all full, so trailing full entries are dropped
        key = list(self._key())
        while len(key) > 1 and key[0] == self.catalog.full_mask and key[1] == self.catalog.full_mask:
            key.pop(0)
        return hash(tuple(key))

    def to_json(self) -> dict:
        cat = self.catalog
        return {
            "window": [self.lo, 0],
            "layers": {str(k): sorted(cat.labels_of(self.layer(k))) for k in range(0, self.lo - 1, -1)},
        }

    def to_dot(self, coaisle_marks: bool = False) -> str:
        """Window grid of stalks M[-k]; aisle members get color=red."""
        cat = self.catalog
        co = coaisle(self) if coaisle_marks else {}
        lines = ["digraph aisle {", "  rankdir=LR;"]
        for k in range(self.lo, 1):
            lines.append(f"  subgraph \"cluster_{k}\" {{")
            lines.append(f"    label=\"degree {k}\";")
            for i in sorted(range(len(cat)), key=lambda i: cat.labels[i]):
                attrs = [f"label=\"{cat.labels[i]}\""]
                if self.layer(k) >> i & 1:
                    attrs.append("color=red")
                elif co.get(k, 0) >> i & 1:
                    attrs.append("color=blue")
                lines.append(f"    \"{cat.labels[i]}[{-k}]\" [{', '.join(attrs)}];")
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        cat = self.catalog
        body = ", ".join(f"{k}:{{{','.join(sorted(cat.labels_of(self.layer(k))))}}}"
                         for k in range(self.lo, 1))
        return f"WindowedAisle({body})"


def theta(seq: _SeqBase) -> WindowedAisle:
    """The aisle whose layers are the entries, placed so the last one sits in degree 0."""
    if not seq.is_full:
        raise PreconditionError("theta needs a full sequence (full below, empty above)")
    hi = seq.hi
    lo = seq.lo - 1 - hi
    return WindowedAisle(seq.catalog, lo, tuple(seq.entry(k + hi) for k in range(lo + 1, 1)))


def mu(U: WindowedAisle) -> IceSequence:
    """Layers of U as a sequence stored on [1, -lo]."""
    if U.lo == 0:
        return IceSequence(U.catalog, 0, (U.catalog.full_mask,))
    return IceSequence(U.catalog, 1, U.free)


# --- Hom bookkeeping -------------------------------------------------------------

def _reach(table: np.ndarray, mask: int) -> int:
    """Members N with table[M][N] > 0 for some M in mask."""
    idx = list(_bits(mask))
    if not idx:
        return 0
    hit = table[idx].any(axis=0)
    return _mask(np.flatnonzero(hit).tolist())


def coaisle_layer(catalog: IndCatalog, s_d: int, s_next: int) -> int:
    """Modules N with Hom(S(d), N) = 0 and Ext^1(S(d+1), N) = 0."""
    bad = _reach(catalog.hom_table, s_d) | _reach(catalog.ext_table, s_next)
    return catalog.full_mask & ~bad


def coaisle(U: WindowedAisle, window: tuple[int, int] | None = None) -> dict[int, int]:
    """Per degree d, the modules N whose stalk N[-d] is right orthogonal to U."""
    a, b = window or (U.lo, 1)
    return {d: coaisle_layer(U.catalog, U.layer(d), U.layer(d + 1)) for d in range(a, b + 1)}


def stalk_hom_dim(catalog: IndCatalog, m: int, k: int, coh: dict) -> int:
    """dim Hom(M[-k], Y) for Y with cohomology ``coh`` (formality)."""
    h = sum(c * int(catalog.hom_table[m][i]) for i, c in coh.get(k, {}).items())
    e = sum(c * int(catalog.ext_table[m][i]) for i, c in coh.get(k - 1, {}).items())
    return h + e


@functools.lru_cache(maxsize=None)
def _resolution(catalog: IndCatalog, m: int) -> Cx.Complex:
    return Cx.resolution(catalog.members[m])


def stalk(catalog: IndCatalog, m: int, degree: int) -> Cx.Complex:
    """Catalog member m in cohomological degree ``degree``."""
    return _resolution(catalog, m).shift(-degree)


def stalk_sum(catalog: IndCatalog, items) -> Cx.Complex:
    """Sum of stalks given as (member, degree) pairs."""
    items = list(items)
    if not items:
        return Cx.zero_complex(catalog.algebra)
    return Cx.direct_sum([stalk(catalog, m, d) for m, d in items])


# --- brute-force preaisle oracle ------------------------------------------------

def _classes(H: Cx.HomSpace, p: int):
    for coeffs in _projective_classes(H.dim, p):
        f = None
        for c, b in zip(coeffs, H.basis):
            if c:
                f = b.scale(c) if f is None else f + b.scale(c)
        yield f


def _cocone_cohomology(catalog, f: Cx.ChainMap) -> dict:
    C = Cx.mapping_cone(f)[0].shift(-1)
    m, _, _ = Cx.minimize(C, track=False)
    return Cx.cohomology(m, catalog)


def _mixed(table, xs, ys) -> bool:
    """Every x reaches some y and every y is reached by some x."""
    return all(any(table[x][y] for y in ys) for x in xs) and all(any(table[x][y] for x in xs) for y in ys)


@functools.lru_cache(maxsize=None)
def triangle_records(catalog: IndCatalog, bound: int = 2):
    """Cocones of maps between stalk sums with at most ``bound`` summands.

    ext records (a, b, e): a nonzero B -> A[1] gives A -> E -> B -> A[1] with
    E a module; hom records (b, a, ker, coker): a nonzero f: B[1] -> A[1]
    gives A -> E -> B[1] with H^-1 E = ker f and H^0 E = coker f.
    Maps vanishing on a summand are skipped since they split.
    """
    Cx.require_hereditary(catalog.algebra)
    p = catalog.algebra.p
    k = len(catalog)
    ms = list(_multisets(k, bound))
    ext_recs, hom_recs = set(), set()
    for B in ms:
        for A in ms:
            if _mixed(catalog.ext_table, B, A):
                H = Cx.HomSpace(stalk_sum(catalog, [(b, 0) for b in B]), stalk_sum(catalog, [(a, -1) for a in A]))
                for f in _classes(H, p):
                    coh = _cocone_cohomology(catalog, f)
                    if set(coh) - {0}:
                        raise FalsificationError("extension of modules is not a module", {"A": A, "B": B})
                    ext_recs.add((_mask(A), _mask(B), _mask(coh.get(0, {}))))
            if _mixed(catalog.hom_table, B, A):
                H = Cx.HomSpace(stalk_sum(catalog, [(b, -1) for b in B]), stalk_sum(catalog, [(a, -1) for a in A]))
                for f in _classes(H, p):
                    coh = _cocone_cohomology(catalog, f)
                    hom_recs.add((_mask(B), _mask(A), _mask(coh.get(-1, {})), _mask(coh.get(0, {}))))
    return sorted(ext_recs), sorted(hom_recs)


def _parse_window(window) -> int:
    if isinstance(window, int):
        lo = -window if window > 0 else window
    else:
        lo, hi = window
        if hi != 0:
            raise PreconditionError("aisle windows have the form [lo, 0]")
    if lo > 0:
        raise PreconditionError("the window [lo, 0] needs lo <= 0")
    return lo


def brute_preaisle_scan(catalog: IndCatalog, window, bound: int = 2) -> dict:
    """All layer tuples on (lo, 0] closed under positive shift and under the
    cocones of ``triangle_records``, compared with the images of ICE sequences."""
    lo = _parse_window(window)
    w = -lo
    k = len(catalog)
    if k * w > SCAN_BITS_CAP:
        raise CapExceededError(f"{k} members x {w} free degrees exceeds the scan cap of {SCAN_BITS_CAP} bits")
    catalog.require_complete()
    ext_recs, hom_recs = triangle_records(catalog, bound)
    full = catalog.full_mask
    codes = np.arange(1 << (k * w), dtype=np.int64)
    # layer j holds degree lo + 1 + j; lo itself is full and 1 is empty
    S = {lo: np.full_like(codes, full), 1: np.zeros_like(codes)}
    for j in range(w):
        S[lo + 1 + j] = (codes >> (k * j)) & full
    ok = np.ones_like(codes, dtype=bool)

    def sub(a, b):
        return (a & ~b) == 0

    for d in range(lo, 1):
        ok &= sub(S[d + 1], S[d])
    for d in range(lo + 1, 1):
        s = S[d]
        for a, b, e in ext_recs:
            ok &= ~(sub(a, s) & sub(b, s) & ~sub(e, s))
        prev = S[d - 1]
        for b, a, ker, cok in hom_recs:
            ok &= ~(sub(b, prev) & sub(a, s) & ~(sub(ker, prev) & sub(cok, s)))
    survivors = {tuple(int(S[lo + 1 + j][c]) for j in range(w)) for c in np.flatnonzero(ok)}
    if w:
        ice = {theta(seq).free for seq in ice_sequences(catalog, w)}
    else:
        ice = {()}
    return {
        "algebra": catalog.algebra.name,
        "window": [lo, 0],
        "tuples": int(codes.size),
        "survivors": len(survivors),
        "ice_images": len(ice),
        "records": {"ext": len(ext_recs), "hom": len(hom_recs)},
        "extra": sorted([catalog.labels_of(m) for m in t] for t in survivors - ice),
        "missing": sorted([catalog.labels_of(m) for m in t] for t in ice - survivors),
        "ok": survivors == ice,
    }


# --- approximation triangles ----------------------------------------------------

@dataclass
class Triangle:
    """u --f--> X --g--> v with v the cone of f."""

    X: Cx.Complex
    u: Cx.Complex
    f: Cx.ChainMap
    v: Cx.Complex
    g: Cx.ChainMap
    coh_u: dict = field(default_factory=dict)
    coh_v: dict = field(default_factory=dict)

    def summary(self, catalog) -> dict:
        def lab(coh):
            return {str(k): sorted(catalog.labels[i] + (f"^{c}" if c > 1 else "") for i, c in d.items())
                    for k, d in sorted(coh.items())}
        return {"u": lab(self.coh_u), "v": lab(self.coh_v)}


def _kill_layer(catalog, cur, psi, k, members, rounds):
    """Cone off every map from M[-k], M in members, until none is left."""
    coh = Cx.cohomology(cur, catalog)
    for _ in range(rounds):
        maps = []
        for m in members:
            if stalk_hom_dim(catalog, m, k, coh) == 0:
                continue
            H = Cx.HomSpace(stalk(catalog, m, k), cur)
            maps.extend(H.basis)
        if not maps:
            return cur, psi, coh
        a = Cx.map_from_sum(maps)
        C, incl, _ = Cx.mapping_cone(a)
        cur, proj, _ = Cx.minimize(C)
        psi = proj.compose(incl).compose(psi)
        coh = Cx.cohomology(cur, catalog)
    raise FalsificationError(f"approximation at degree {k} did not terminate after {rounds} rounds",
                             {"degree": k})


def _total(catalog, coh) -> int:
    return sum(c * catalog.members[i].total_dim for d in coh.values() for i, c in d.items())


def _truncate_layer(catalog, cur, psi, k):
    """Full layer: cone off H^k one summand at a time.

    Canonical approximations by a full layer always leave a kernel one degree
    lower, so here each step uses a map M[-k] -> cur that is injective on H^k
    (the total cohomology drops by dim M), which truncates without cascading.
    """
    p = catalog.algebra.p
    coh = Cx.cohomology(cur, catalog)
    while coh.get(k):
        m = min(coh[k])
        want = _total(catalog, coh) - catalog.members[m].total_dim
        H = Cx.HomSpace(stalk(catalog, m, k), cur)
        for g in _classes(H, p):
            C, incl, _ = Cx.mapping_cone(g)
            nxt, proj, _ = Cx.minimize(C)
            ncoh = Cx.cohomology(nxt, catalog)
            if _total(catalog, ncoh) == want:
                cur, psi, coh = nxt, proj.compose(incl).compose(psi), ncoh
                break
        else:
            raise FalsificationError(f"no split map from {catalog.labels[m]}[{-k}] found", {"degree": k})
    return cur, psi, coh


def right_approximation(X: Cx.Complex, U: WindowedAisle, check: bool = True,
                        rounds: int = APPROX_ROUNDS) -> Triangle:
    """Triangle u -> X -> v with u in U and v right orthogonal to U.

    Degrees are treated from the top down; at each degree the canonical
    approximation by the layer's stalks is coned off until no maps remain.
    Full layers are handled by truncation instead.
    """
    cat = U.catalog
    Cx.require_hereditary(cat.algebra)
    cur, psi = X, Cx.identity_map(X)
    coh = Cx.cohomology(cur, cat)
    k = min(max(coh, default=0) + 1, 0)
    while coh and k >= min(coh):
        layer = U.layer(k)
        if layer == cat.full_mask:
            cur, psi, coh = _truncate_layer(cat, cur, psi, k)
        else:
            cur, psi, coh = _kill_layer(cat, cur, psi, k, list(_bits(layer)), rounds)
        k -= 1
    v = cur
    K, _, pr = Cx.mapping_cone(psi)
    u = K.shift(-1)
    f = pr.shift(-1)
    f = Cx.ChainMap(u, X, f.comps)
    u_min, _, sect = Cx.minimize(u)
    f = f.compose(sect)
    tri = Triangle(X, u_min, f, v, psi, Cx.cohomology(u_min, cat), coh)
    if check:
        problems = triangle_problems(tri, U)
        if problems:
            raise FalsificationError("approximation triangle fails its post-condition",
                                     {"problems": problems, **tri.summary(cat)})
    return tri


def triangle_problems(tri: Triangle, U: WindowedAisle) -> list[str]:
    """Independent re-check of an approximation triangle."""
    cat = U.catalog
    out = []
    if not tri.f.is_chain_map():
        out.append("f is not a chain map")
    coh_u = Cx.cohomology(tri.u, cat)
    coh_v = Cx.cohomology(tri.v, cat)
    if not U.contains(coh_u):
        out.append("u has cohomology outside the aisle")
    for d, c in coh_v.items():
        if _mask(c) & ~coaisle_layer(cat, U.layer(d), U.layer(d + 1)):
            out.append(f"v has a degree {d} summand outside the coaisle")
    # v must be the cone of f: compare Euler characteristics and cohomology
    cone = Cx.minimize(Cx.mapping_cone(tri.f)[0], track=False)[0]
    if Cx.cohomology(cone, cat) != coh_v:
        out.append("v is not the cone of f")
    return out


def _approx_summary(catalog, m, d, U):
    tri = right_approximation(stalk(catalog, m, d), U)
    return tri.coh_u, tri.coh_v


_SUMMARY_CACHE: dict = {}


def stalk_triangle(catalog: IndCatalog, m: int, d: int, U: WindowedAisle):
    """(cohomology of u, cohomology of v) for X = M[-d], cached by the layers
    that can matter, read relative to d."""
    if U.layer(d) >> m & 1:
        return {d: {m: 1}}, {}
    if d > 0:
        return {}, {d: {m: 1}}
    rel = tuple(U.layer(k) for k in range(d + 1, U.lo, -1))
    key = (id(catalog), m, d - U.lo, rel)
    hit = _SUMMARY_CACHE.get(key)
    if hit is None:
        cu, cv = _approx_summary(catalog, m, d, U)
        hit = ({k - d: c for k, c in cu.items()}, {k - d: c for k, c in cv.items()})
        _SUMMARY_CACHE[key] = hit
    return {k + d: c for k, c in hit[0].items()}, {k + d: c for k, c in hit[1].items()}


def verify_t_structure(U: WindowedAisle, raise_on_fail: bool = True) -> dict:
    """Shift closure, orthogonality against the coaisle and a decomposition
    triangle for every stalk in the window."""
    cat = U.catalog
    Cx.require_hereditary(cat.algebra)
    cat.require_complete()
    failures = []
    if not U.is_shift_closed():
        failures.append("layers are not decreasing")
    co = coaisle(U, (U.lo - 1, 1))
    for k in range(U.lo - 1, 1):
        for d in range(U.lo - 1, 2):
            for m in _bits(U.layer(k)):
                for n in _bits(co[d]):
                    if Cx.derived_hom_dim(cat, m, -k, n, -d):
                        failures.append(f"Hom({cat.labels[m]}[{-k}], {cat.labels[n]}[{-d}]) != 0")
    count = 0
    for d in range(U.lo, 2):
        for m in range(len(cat)):
            count += 1
            try:
                cu, cv = stalk_triangle(cat, m, d, U)
            except FalsificationError:
                failures.append(f"no approximation triangle for {cat.labels[m]}[{-d}]")
                continue
            if not U.contains(cu):
                failures.append(f"u({cat.labels[m]}[{-d}]) leaves the aisle")
            for e, c in cv.items():
                if _mask(c) & ~co.get(e, coaisle_layer(cat, U.layer(e), U.layer(e + 1))):
                    failures.append(f"v({cat.labels[m]}[{-d}]) leaves the coaisle")
    report = {"aisle": U.to_json(), "triangles": count, "failures": failures, "ok": not failures}
    if failures and raise_on_fail:
        raise FalsificationError("t-structure check failed", report)
    return report


def _verify_one(U):
    return verify_t_structure(U, raise_on_fail=False)


def verify_ice_aisles(catalog: IndCatalog, n: int, jobs: int = 1) -> dict:
    """verify_t_structure on theta(seq) for every full ICE sequence of length n."""
    aisles = [theta(s) for s in ice_sequences(catalog, n)]
    reports = parallel_map(_verify_one, aisles, jobs=jobs)
    bad = [r for r in reports if not r["ok"]]
    return {"algebra": catalog.algebra.name, "window": [-n, 0], "aisles": len(aisles),
            "failed": len(bad), "failures": bad[:5], "ok": not bad}


def intermediate_count(catalog: IndCatalog) -> int:
    """Window [-1, 0] aisles passing verify_t_structure."""
    seen = 0
    for T in range(catalog.full_mask + 1):
        U = WindowedAisle(catalog, -1, (T,))
        if verify_t_structure(U, raise_on_fail=False)["ok"]:
            seen += 1
    return seen


# --- cohomology relative to another t-structure ---------------------------------------

def heart_cohomology(X: Cx.Complex, A: WindowedAisle, k: int = 0,
                     window: tuple[int, int] | None = None) -> dict:
    """H^k of X with respect to the t-structure with aisle A, as a stalk
    decomposition in the ambient model."""
    cat = A.catalog
    coh = Cx.cohomology(X, cat)
    if window is not None:
        a, b = window
        if any(d < a or d > b for d in coh):
            raise WindowTooSmallError(f"X has cohomology in degrees {sorted(coh)} outside [{a}, {b}]")
        if A.lo - 1 < a:
            raise WindowTooSmallError(f"truncations reach degree {A.lo - 1} below the window")
    Y = X.shift(k)
    u = right_approximation(Y, A).u
    return right_approximation(u, A.shifted(1)).coh_v


def labelled(catalog: IndCatalog, coh: dict) -> dict:
    return {k: {catalog.labels[i]: c for i, c in sorted(d.items())} for k, d in sorted(coh.items())}


@dataclass
class TiltedScenario:
    """Ambient hereditary catalog, the tilted aisle and the heart dictionary."""

    catalog: IndCatalog
    target: IndCatalog
    aisle: WindowedAisle
    heart: list  # (ambient member, degree) per target member

    def heart_names(self, coh: dict) -> list[str]:
        """Read an ambient stalk decomposition as target-heart objects."""
        inverse = {obj: j for j, obj in enumerate(self.heart)}
        names = []
        for e, c in sorted(coh.items()):
            for i, mult in sorted(c.items()):
                j = inverse.get((i, e))
                if j is None:
                    raise FalsificationError(f"{self.catalog.labels[i]}[{-e}] is not in the heart", {})
                names.extend([self.target.labels[j]] * mult)
        return sorted(names)

    def target_cohomology(self, m: int, degrees=range(-2, 3)) -> dict[int, int]:
        """Per degree k, the mask of target members in H^k of the stalk m[0]
        relative to the tilted heart."""
        X = stalk(self.catalog, m, 0)
        out = {}
        for k in degrees:
            H = heart_cohomology(X, self.aisle, k)
            if H:
                out[k] = self.target.mask(self.heart_names(H))
        return out

    def transport(self, layers: dict, lo: int) -> WindowedAisle:
        """The ambient aisle of objects whose heart-relative H^k lies in the
        target layer S(k) (full for k <= lo, empty for k > 0)."""
        cat = self.catalog
        full_t = self.target.full_mask

        def target_layer(k):
            return full_t if k <= lo else (layers.get(k, 0) if k <= 0 else 0)

        tc = [self.target_cohomology(m) for m in range(len(cat))]
        span = range(lo - 3, 1)
        amb = {}
        for j in span:
            amb[j] = _mask([m for m in range(len(cat))
                            if all(mask & ~target_layer(k + j) == 0 for k, mask in tc[m].items())])
        new_lo = span[0]
        if amb[new_lo] != cat.full_mask:
            raise WindowTooSmallError("the transported aisle is not full at the bottom of the window")
        while new_lo < 0 and amb[new_lo + 1] == cat.full_mask:
            new_lo += 1
        return WindowedAisle.from_layers(cat, new_lo, {k: amb[k] for k in range(new_lo + 1, 1)})

    def to_json(self) -> dict:
        return {
            "aisle": self.aisle.to_json(),
            "heart": {self.target.labels[j]: f"{self.catalog.labels[m]}[{-e}]"
                      for j, (m, e) in enumerate(self.heart)},
        }


def _heart_matrices(catalog, objs):
    hom = np.array([[Cx.derived_hom_dim(catalog, a, -e, b, -f) for b, f in objs] for a, e in objs])
    ext = np.array([[Cx.derived_hom_dim(catalog, a, -e, b, -f + 1) for b, f in objs] for a, e in objs])
    return hom, ext


def tilted_scenario(catalog: IndCatalog, torsion, target: IndCatalog) -> TiltedScenario:
    """Tilt at a torsion class: the aisle with S(0) = torsion and S(-1) full.

    Its heart consists of torsion modules in degree 0 and torsionfree ones in
    degree -1.  The dictionary to ``target`` is found by searching for a
    bijection that preserves dim Hom and dim Ext^1 inside the heart.
    """
    T = catalog.mask(torsion) if not isinstance(torsion, int) else torsion
    A = WindowedAisle(catalog, -1, (T,))
    verify_t_structure(A)
    F = coaisle_layer(catalog, T, 0)
    objs = [(m, 0) for m in _bits(T)] + [(m, -1) for m in _bits(F)]
    if len(objs) != len(target):
        raise FalsificationError("heart and target catalog differ in size",
                                 {"heart": len(objs), "target": len(target)})
    hom, ext = _heart_matrices(catalog, objs)
    th, te = target.hom_table, target.ext_table
    found = None
    for perm in itertools.permutations(range(len(objs))):
        # perm[j] = heart object matched with target member j
        P = list(perm)
        if np.array_equal(hom[np.ix_(P, P)], th) and np.array_equal(ext[np.ix_(P, P)], te):
            if found is not None:
                raise FalsificationError("heart dictionary is not unique", {})
            found = [objs[i] for i in P]
    if found is None:
        raise FalsificationError("no Hom/Ext-preserving bijection between heart and target", {})
    return TiltedScenario(catalog, target, A, found)


def coaisle_remark_search(scen: TiltedScenario, layers: dict, lo: int, expect: str | None = None) -> dict:
    """Stalks of the ambient window lying in the coaisle of the transported
    aisle whose H^0 relative to the tilted heart is nonzero and in the aisle.

    ``layers`` describes the aisle on the target side (degree -> labels).
    """
    tgt = scen.target
    tl = {k: tgt.mask(v) if not isinstance(v, int) else v for k, v in layers.items()}
    U = scen.transport(tl, lo)
    verify_t_structure(U)
    cat = scen.catalog
    co = coaisle(U, (U.lo - 1, 1))
    witnesses = []
    for d in range(U.lo - 1, 2):
        for m in sorted(range(len(cat)), key=lambda i: cat.labels[i]):
            if not co[d] >> m & 1:
                continue
            X = stalk(cat, m, d)
            H0 = heart_cohomology(X, scen.aisle)
            if not H0 or not U.contains(H0):
                continue
            names = scen.heart_names(H0)
            witnesses.append({"object": f"{cat.labels[m]}[{-d}]", "H0": labelled(cat, H0),
                              "H0_target": names})
    if expect is not None:
        witnesses = [w for w in witnesses if w["H0_target"] == [expect]]
    return {"aisle": U.to_json(), "witnesses": witnesses, "ok": bool(witnesses)}
