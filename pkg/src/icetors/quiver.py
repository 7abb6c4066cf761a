"""Quivers with monomial relations and their path bases."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from .errors import SchemaError, UnsupportedAlgebraError, UsageError

PATH_CAP = 10_000

RELATION_ORDER_HINT = (
    "relation arrays list arrow names in application order: the rightmost "
    "arrow is applied first, e.g. [\"b\", \"a\"] is the composite b after a"
)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise SchemaError("a quiver needs at least one vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise SchemaError(f"arrow names must be unique, got {names}")
        for a in self.arrows:
            for v in (a.source, a.target):
                if not 1 <= v <= self.vertex_count:
                    raise SchemaError(f"arrow {a.name!r} touches vertex {v} outside 1..{self.vertex_count}")

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise SchemaError(f"unknown arrow {name!r}")

    def out_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]


@dataclass(frozen=True)
class Path:
    """A path given by its start vertex and arrows in traversal order."""

    start: int
    arrows: tuple[Arrow, ...] = ()

    @property
    def end(self) -> int:
        return self.arrows[-1].target if self.arrows else self.start

    def __len__(self):
        return len(self.arrows)

    def extend(self, a: Arrow) -> "Path":
        assert a.source == self.end
        return Path(self.start, self.arrows + (a,))

    def contains(self, sub: tuple[Arrow, ...]) -> bool:
        k = len(sub)
        return any(self.arrows[i:i + k] == sub for i in range(len(self.arrows) - k + 1))

    def __str__(self):
        if not self.arrows:
            return f"e{self.start}"
        return "".join(a.name for a in reversed(self.arrows))


@dataclass(frozen=True)
class BoundQuiverAlgebra:
    quiver: Quiver
    relations: tuple[tuple[Arrow, ...], ...]  # traversal order
    p: int
    path_basis: tuple[Path, ...] = field(compare=False)
    name: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.path_basis)

    @property
    def n(self) -> int:
        return self.quiver.vertex_count

    @property
    def is_hereditary(self) -> bool:
        return not self.relations

    @property
    def is_nakayama(self) -> bool:
        """At most one arrow in and one arrow out at every vertex."""
        q = self.quiver
        return all(len(q.out_arrows(v)) <= 1 and len(q.in_arrows(v)) <= 1 for v in q.vertices)

    def paths_from(self, v: int) -> list[Path]:
        return [pth for pth in self.path_basis if pth.start == v]

    def relation_names(self) -> list[list[str]]:
        """Relations in composition order (rightmost applied first)."""
        return [[a.name for a in reversed(r)] for r in self.relations]

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.quiver.arrows],
            "relations": self.relation_names(),
            "field": self.p,
        }


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def build_algebra(quiver: Quiver, relations, p: int = 2, cap: int = PATH_CAP, name: str = "") -> BoundQuiverAlgebra:
    """Path basis by breadth-first extension, pruning relation-containing paths.

    ``relations`` are arrow-name lists in composition order.
    """
    if not _is_prime(p):
        raise SchemaError(f"field size {p} is not prime")
    rels = []
    for rel in relations:
        names = list(rel)
        if len(names) < 2:
            raise SchemaError(f"relation {names} has length < 2 (not admissible); {RELATION_ORDER_HINT}")
        chain = tuple(quiver.arrow(nm) for nm in reversed(names))
        for a, b in zip(chain, chain[1:]):
            if a.target != b.source:
                raise SchemaError(
                    f"relation {names} is not composable: {a.name} ends at {a.target} "
                    f"but {b.name} starts at {b.source}; {RELATION_ORDER_HINT}"
                )
        rels.append(chain)
    rels = tuple(rels)

    basis = []
    queue = deque(Path(v) for v in quiver.vertices)
    while queue:
        pth = queue.popleft()
        basis.append(pth)
        if len(basis) > cap:
            raise UnsupportedAlgebraError(
                f"path basis exceeds {cap} elements; the algebra is infinite-dimensional or too large"
            )
        for a in quiver.out_arrows(pth.end):
            nxt = pth.extend(a)
            if not any(nxt.contains(r) for r in rels):
                queue.append(nxt)
    return BoundQuiverAlgebra(quiver, rels, p, tuple(basis), name)


def line_quiver(n: int) -> Quiver:
    """1 <- 2 <- ... <- n, arrow ``a{v}`` going v -> v-1."""
    return Quiver(n, tuple(Arrow(f"a{v}", v, v - 1) for v in range(2, n + 1)))


def builtin(name: str) -> BoundQuiverAlgebra:
    if name.startswith("lineA:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad builtin algebra name {name!r}") from None
        if n < 1:
            raise UsageError("lineA:n needs n >= 1")
        return build_algebra(line_quiver(n), [], 2, name=name)
    if name == "paperNakayama":
        # 1 <- 2 <- 3 with the length-two path from 3 to 1 set to zero
        return build_algebra(line_quiver(3), [["a2", "a3"]], 2, name=name)
    raise UsageError(f"unknown builtin algebra {name!r}; expected lineA:<n> or paperNakayama")


def algebra_from_json(data: dict, name: str = "") -> BoundQuiverAlgebra:
    try:
        n = int(data["vertices"])
        arrows = tuple(Arrow(str(a["name"]), int(a["from"]), int(a["to"])) for a in data.get("arrows", []))
        relations = [list(map(str, r)) for r in data.get("relations", [])]
        p = int(data.get("field", 2))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed algebra file: {exc}; {RELATION_ORDER_HINT}") from exc
    return build_algebra(Quiver(n, arrows), relations, p, name=name)


def load_algebra(source: str) -> BoundQuiverAlgebra:
    """A builtin name or a path to a JSON algebra file."""
    if source.startswith("lineA:") or source == "paperNakayama":
        return builtin(source)
    path = FsPath(source)
    if not path.exists():
        raise UsageError(f"{source!r} is neither a builtin algebra nor an existing file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: invalid JSON ({exc})") from exc
    return algebra_from_json(data, name=path.stem)
