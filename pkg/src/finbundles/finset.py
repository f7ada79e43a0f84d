"""Finite sets and maps as index tables, plus the limits and colimits
everything else is built from.

Conventions, fixed so repeated runs are bit-identical:

- a set of size n is the index range 0..n-1; labels are display-only
- pairs are row-major: (i, j) -> i * right.size + j
- pullback carriers list their pairs in lexicographic order
- quotient classes are numbered by least representative
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class FinSetError(Exception):
    """Structural error in a finite-set construction."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CodMismatch(FinSetError):
    pass


class DomMismatch(FinSetError):
    pass


class BaseMismatch(FinSetError):
    pass


@dataclass(frozen=True)
class FinSet:
    """A finite set: the index range 0..size-1, optionally labelled."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError("labels must match size")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be pairwise distinct")

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i)

    def __iter__(self):
        return iter(range(self.size))


TERMINAL = FinSet(1)
EMPTY = FinSet(0)


@dataclass(frozen=True)
class FinFn:
    """A total function between finite sets, stored as an index table."""

    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size:
            raise ValueError("table length must equal dom.size")
        for v in self.table:
            if not (0 <= v < self.cod.size):
                raise ValueError("table entry %r out of codomain range" % (v,))

    def __call__(self, i: int) -> int:
        return self.table[i]

    def then(self, other: "FinFn") -> "FinFn":
        """Diagram-order composite: apply self first, then other."""
        assert self.cod == other.dom, "composition mismatch"
        return FinFn(self.dom, other.cod, tuple(other.table[v] for v in self.table))

    @staticmethod
    def identity(s: FinSet) -> "FinFn":
        return FinFn(s, s, tuple(range(s.size)))

    @staticmethod
    def constant(dom: FinSet, cod: FinSet, value: int) -> "FinFn":
        return FinFn(dom, cod, (value,) * dom.size)

    def is_bijection(self) -> bool:
        return self.dom.size == self.cod.size and len(set(self.table)) == self.dom.size

    def is_surjection(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_injection(self) -> bool:
        return len(set(self.table)) == self.dom.size

    def inverse(self) -> "FinFn":
        assert self.is_bijection(), "only bijections invert"
        table = [0] * self.cod.size
        for i, v in enumerate(self.table):
            table[v] = i
        return FinFn(self.cod, self.dom, tuple(table))


def is_bijection(f: FinFn) -> bool:
    return f.is_bijection()


def is_surjection(f: FinFn) -> bool:
    return f.is_surjection()


def compose(f: FinFn, g: FinFn) -> FinFn:
    """Algebraic composite f after g."""
    return g.then(f)


def all_functions(dom: FinSet, cod: FinSet):
    """All FinFns dom -> cod, in lexicographic table order."""
    if dom.size == 0:
        yield FinFn(dom, cod, ())
        return
    if cod.size == 0:
        return
    for table in itertools.product(range(cod.size), repeat=dom.size):
        yield FinFn(dom, cod, table)


@dataclass(frozen=True)
class IsoCertificate:
    """Evidence of an isomorphism: mutually inverse maps, verified on
    construction."""

    forward: FinFn
    backward: FinFn

    def __post_init__(self):
        if self.forward.dom != self.backward.cod or self.forward.cod != self.backward.dom:
            raise ValueError("forward/backward endpoints do not match")
        for i in range(self.forward.dom.size):
            if self.backward.table[self.forward.table[i]] != i:
                raise ValueError("backward . forward is not the identity", )
        for j in range(self.forward.cod.size):
            if self.forward.table[self.backward.table[j]] != j:
                raise ValueError("forward . backward is not the identity")


@dataclass(frozen=True)
class SliceObject:
    """An object of the slice over base: a map total -> base."""

    total: FinSet
    base: FinSet
    proj: FinFn

    def __post_init__(self):
        if self.proj.dom != self.total or self.proj.cod != self.base:
            raise ValueError("proj must run total -> base")


@dataclass(frozen=True)
class Product:
    carrier: FinSet
    left: FinSet
    right: FinSet
    p1: FinFn
    p2: FinFn

    def index(self, i: int, j: int) -> int:
        return i * self.right.size + j

    def split(self, k: int) -> tuple[int, int]:
        return divmod(k, self.right.size)

    def tuple_map(self, f: FinFn, g: FinFn) -> FinFn:
        """The pairing <f, g> into the product."""
        assert f.dom == g.dom
        assert f.cod == self.left and g.cod == self.right
        return FinFn(f.dom, self.carrier,
                     tuple(self.index(f.table[z], g.table[z]) for z in range(f.dom.size)))


def product(a: FinSet, b: FinSet) -> Product:
    carrier = FinSet(a.size * b.size)
    p1 = FinFn(carrier, a, tuple(k // b.size for k in range(carrier.size)))
    p2 = FinFn(carrier, b, tuple(k % b.size for k in range(carrier.size)))
    return Product(carrier, a, b, p1, p2)


@dataclass(frozen=True)
class Pullback:
    """The pullback of f and g: pairs (a, b) with f(a) = g(b), in
    lexicographic order."""

    carrier: FinSet
    pairs: tuple[tuple[int, int], ...]
    p1: FinFn
    p2: FinFn
    f: FinFn
    g: FinFn
    _index: dict = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: k for k, p in enumerate(self.pairs)})

    def index(self, a: int, b: int) -> int:
        return self._index[(a, b)]

    @property
    def slice(self) -> SliceObject:
        return SliceObject(self.carrier, self.f.cod, self.p1.then(self.f))

    def mediate(self, u: FinFn, v: FinFn) -> FinFn:
        """The unique map into the pullback induced by a cone (u, v)."""
        assert u.dom == v.dom
        assert u.cod == self.f.dom and v.cod == self.g.dom
        table = []
        for z in range(u.dom.size):
            if self.f.table[u.table[z]] != self.g.table[v.table[z]]:
                raise ValueError("not a cone over the cospan", )
            table.append(self.index(u.table[z], v.table[z]))
        return FinFn(u.dom, self.carrier, tuple(table))


def pullback(f: FinFn, g: FinFn) -> Pullback:
    if f.cod != g.cod:
        raise CodMismatch("pullback needs a common codomain", (f.cod, g.cod))
    pairs = tuple((a, b) for a in range(f.dom.size) for b in range(g.dom.size)
                  if f.table[a] == g.table[b])
    carrier = FinSet(len(pairs))
    p1 = FinFn(carrier, f.dom, tuple(a for a, _ in pairs))
    p2 = FinFn(carrier, g.dom, tuple(b for _, b in pairs))
    return Pullback(carrier, pairs, p1, p2, f, g)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        x, y = self.find(x), self.find(y)
        if x != y:
            # keep the smaller index as root so class numbering is canonical
            if y < x:
                x, y = y, x
            self.parent[y] = x

    def classes(self) -> list[list[int]]:
        members: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            members.setdefault(self.find(x), []).append(x)
        return [members[r] for r in sorted(members)]


@dataclass(frozen=True)
class Coequalizer:
    quotient: FinSet
    q: FinFn
    reps: tuple[int, ...]

    def factor(self, h: FinFn) -> FinFn:
        """Factor a coequalizing map h through q."""
        assert h.dom == self.q.dom
        table = tuple(h.table[r] for r in self.reps)
        u = FinFn(self.quotient, h.cod, table)
        if self.q.then(u) != h:
            raise ValueError("map does not coequalize the pair")
        return u


def coequalizer(f: FinFn, g: FinFn) -> Coequalizer:
    if f.dom != g.dom or f.cod != g.cod:
        raise DomMismatch("coequalizer needs a parallel pair", (f, g))
    uf = UnionFind(f.cod.size)
    for x in range(f.dom.size):
        uf.union(f.table[x], g.table[x])
    classes = uf.classes()
    quotient = FinSet(len(classes))
    index = {}
    reps = []
    for k, members in enumerate(classes):
        reps.append(members[0])
        for m in members:
            index[m] = k
    q = FinFn(f.cod, quotient, tuple(index[v] for v in range(f.cod.size)))
    return Coequalizer(quotient, q, tuple(reps))


@dataclass(frozen=True)
class PullbackAdjunction:
    """Base change along f: post-composition left adjoint to pullback.

    sigma sends a slice over f.dom to one over f.cod; star pulls a slice
    over f.cod back to f.dom.  unit_at/counit_at give the per-object
    comparison maps; the triangle identities hold on every input.
    """

    f: FinFn

    def _check_over(self, s: SliceObject, base: FinSet):
        if s.base != base:
            raise BaseMismatch("slice lives over the wrong base", (s.base, base))

    def sigma(self, s: SliceObject) -> SliceObject:
        self._check_over(s, self.f.dom)
        return SliceObject(s.total, self.f.cod, s.proj.then(self.f))

    def star(self, s: SliceObject) -> tuple[SliceObject, Pullback]:
        self._check_over(s, self.f.cod)
        pb = pullback(self.f, s.proj)
        return SliceObject(pb.carrier, self.f.dom, pb.p1), pb

    def unit_at(self, s: SliceObject) -> FinFn:
        self._check_over(s, self.f.dom)
        _, pb = self.star(self.sigma(s))
        table = tuple(pb.index(s.proj.table[z], z) for z in range(s.total.size))
        return FinFn(s.total, pb.carrier, table)

    def counit_at(self, s: SliceObject) -> FinFn:
        self._check_over(s, self.f.cod)
        _, pb = self.star(s)
        return pb.p2


def pullback_adjunction(f: FinFn) -> PullbackAdjunction:
    return PullbackAdjunction(f)


# JSON value forms ---------------------------------------------------------

def finset_to_json(s: FinSet) -> dict:
    out = {"size": s.size}
    if s.labels is not None:
        out["labels"] = list(s.labels)
    return out


def finset_from_json(data) -> FinSet:
    if isinstance(data, int):
        return FinSet(data)
    labels = data.get("labels")
    return FinSet(data["size"], tuple(labels) if labels is not None else None)


def finfn_to_json(f: FinFn) -> dict:
    return {"dom": finset_to_json(f.dom), "cod": finset_to_json(f.cod),
            "table": list(f.table)}


def finfn_from_json(data) -> FinFn:
    return FinFn(finset_from_json(data["dom"]), finset_from_json(data["cod"]),
                 tuple(data["table"]))
