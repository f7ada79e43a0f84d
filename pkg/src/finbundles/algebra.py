"""Internal groups and groupoids in finite sets, and their action
categories.

Groupoid orientation: src and tgt are chosen so that an arrow g acts on
points anchored at src(g) and moves them to tgt(g); compose(a, b) means
"a after b" and needs src(a) = tgt(b).  The convention is used
consistently everywhere (actions, orbit quotients, division maps).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .finset import (
    FinFn,
    FinSet,
    IsoCertificate,
    TERMINAL,
    UnionFind,
    product,
)


class AlgebraError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAssociative(AlgebraError):
    pass


class NoUnit(AlgebraError):
    pass


class NoInverse(AlgebraError):
    pass


class BadComposability(AlgebraError):
    pass


class BadIdentity(AlgebraError):
    pass


class BadInverse(AlgebraError):
    pass


class UnitLawFail(AlgebraError):
    pass


class AssocLawFail(AlgebraError):
    pass


class AnchorMismatch(AlgebraError):
    pass


class NotEquivariant(AlgebraError):
    pass


class AlgebraMismatch(AlgebraError):
    pass


@dataclass(frozen=True)
class FinGroup:
    carrier: FinSet
    mul: tuple[tuple[int, ...], ...]
    unit: int
    inv: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.carrier.size

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def __iter__(self):
        return iter(range(self.order))


def validate_group(mul, unit: int, inv, labels=None) -> FinGroup:
    """Check the group axioms on candidate tables; each failure names a
    violating element or triple."""
    n = len(mul)
    if n == 0:
        raise ValueError("empty carrier is not a group")
    mul = tuple(tuple(row) for row in mul)
    inv = tuple(inv)
    if any(len(row) != n for row in mul) or len(inv) != n:
        raise ValueError("tables are not square of matching size")
    if not (0 <= unit < n):
        raise ValueError("unit index out of range")
    for row in mul:
        for v in row:
            if not (0 <= v < n):
                raise ValueError("mul entry out of range")
    for v in inv:
        if not (0 <= v < n):
            raise ValueError("inv entry out of range")
    for a in range(n):
        if mul[unit][a] != a or mul[a][unit] != a:
            raise NoUnit("unit law fails", a)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    raise NotAssociative("associativity fails", (a, b, c))
    for a in range(n):
        if mul[inv[a]][a] != unit or mul[a][inv[a]] != unit:
            raise NoInverse("inverse law fails", a)
    carrier = FinSet(n, tuple(labels) if labels is not None else None)
    return FinGroup(carrier, mul, unit, inv)


@dataclass(frozen=True)
class FinGroupoid:
    objects: FinSet
    arrows: FinSet
    src: FinFn
    tgt: FinFn
    ident: FinFn
    comp: tuple[tuple[int | None, ...], ...]
    inv: FinFn

    @property
    def order(self) -> int:
        return self.arrows.size

    def composable(self, a: int, b: int) -> bool:
        return self.src.table[a] == self.tgt.table[b]

    def op(self, a: int, b: int) -> int:
        v = self.comp[a][b]
        assert v is not None, "arrows are not composable"
        return v

    def inverse(self, a: int) -> int:
        return self.inv.table[a]

    def identity_at(self, o: int) -> int:
        return self.ident.table[o]


def validate_groupoid(objects, arrows, src, tgt, ident, comp, inv) -> FinGroupoid:
    """Check the groupoid axioms, including the composability domain of
    the partial composition table."""
    n_obj = objects if isinstance(objects, int) else objects.size
    n_arr = arrows if isinstance(arrows, int) else arrows.size
    obj_set = FinSet(n_obj)
    arr_set = FinSet(n_arr)
    src_fn = FinFn(arr_set, obj_set, tuple(src))
    tgt_fn = FinFn(arr_set, obj_set, tuple(tgt))
    ident_fn = FinFn(obj_set, arr_set, tuple(ident))
    inv_fn = FinFn(arr_set, arr_set, tuple(inv))
    comp = tuple(tuple(row) for row in comp)
    if len(comp) != n_arr or any(len(row) != n_arr for row in comp):
        raise ValueError("composition table is not arrows x arrows")
    for a in range(n_arr):
        for b in range(n_arr):
            defined = comp[a][b] is not None
            composable = src_fn.table[a] == tgt_fn.table[b]
            if defined != composable:
                raise BadComposability("composition defined on the wrong pairs", (a, b))
            if defined:
                c = comp[a][b]
                if not (0 <= c < n_arr):
                    raise ValueError("comp entry out of range")
                if src_fn.table[c] != src_fn.table[b] or tgt_fn.table[c] != tgt_fn.table[a]:
                    raise BadComposability("composite has wrong endpoints", (a, b))
    for o in range(n_obj):
        e = ident_fn.table[o]
        if src_fn.table[e] != o or tgt_fn.table[e] != o:
            raise BadIdentity("identity arrow has wrong endpoints", o)
    for a in range(n_arr):
        if comp[a][ident_fn.table[src_fn.table[a]]] != a:
            raise BadIdentity("right identity law fails", a)
        if comp[ident_fn.table[tgt_fn.table[a]]][a] != a:
            raise BadIdentity("left identity law fails", a)
    for a in range(n_arr):
        for b in range(n_arr):
            if comp[a][b] is None:
                continue
            for c in range(n_arr):
                if comp[b][c] is None:
                    continue
                if comp[comp[a][b]][c] != comp[a][comp[b][c]]:
                    raise NotAssociative("associativity fails", (a, b, c))
    for a in range(n_arr):
        ia = inv_fn.table[a]
        if src_fn.table[ia] != tgt_fn.table[a] or tgt_fn.table[ia] != src_fn.table[a]:
            raise BadInverse("inverse has wrong endpoints", a)
        if comp[ia][a] != ident_fn.table[src_fn.table[a]]:
            raise BadInverse("left inverse law fails", a)
        if comp[a][ia] != ident_fn.table[tgt_fn.table[a]]:
            raise BadInverse("right inverse law fails", a)
    return FinGroupoid(obj_set, arr_set, src_fn, tgt_fn, ident_fn, comp, inv_fn)


def group_to_groupoid(g: FinGroup) -> FinGroupoid:
    """The one-object groupoid with the same composition table."""
    n = g.order
    return validate_groupoid(
        1, n,
        src=[0] * n, tgt=[0] * n, ident=[g.unit],
        comp=[[g.mul[a][b] for b in range(n)] for a in range(n)],
        inv=list(g.inv),
    )


def discrete_groupoid(objects) -> FinGroupoid:
    n = objects if isinstance(objects, int) else objects.size
    comp = [[a if a == b else None for b in range(n)] for a in range(n)]
    return validate_groupoid(n, n, src=list(range(n)), tgt=list(range(n)),
                             ident=list(range(n)), comp=comp, inv=list(range(n)))


def pair_groupoid(objects) -> FinGroupoid:
    """The codiscrete groupoid: exactly one arrow between any two objects.

    Arrow (t, s) from s to t is indexed t * n + s.
    """
    n = objects if isinstance(objects, int) else objects.size
    n_arr = n * n
    src = [k % n for k in range(n_arr)]
    tgt = [k // n for k in range(n_arr)]
    comp = [[None] * n_arr for _ in range(n_arr)]
    for a in range(n_arr):
        for b in range(n_arr):
            if src[a] == tgt[b]:
                comp[a][b] = tgt[a] * n + src[b]
    return validate_groupoid(n, n_arr, src=src, tgt=tgt,
                             ident=[o * n + o for o in range(n)], comp=comp,
                             inv=[src[a] * n + tgt[a] for a in range(n_arr)])


def group_bundle_groupoid(g: FinGroup, x: FinSet) -> FinGroupoid:
    """A constant bundle of groups over x: arrows (gi, xi) with
    src = tgt = xi, composed fibrewise.  Arrow index is gi * x.size + xi.
    """
    n = x.size
    n_arr = g.order * n
    src = [k % n for k in range(n_arr)]
    comp = [[None] * n_arr for _ in range(n_arr)]
    for a in range(n_arr):
        for b in range(n_arr):
            if a % n == b % n:
                comp[a][b] = g.mul[a // n][b // n] * n + (a % n)
    return validate_groupoid(n, n_arr, src=src, tgt=list(src),
                             ident=[g.unit * n + xi for xi in range(n)], comp=comp,
                             inv=[g.inv[k // n] * n + (k % n) for k in range(n_arr)])


@dataclass(frozen=True)
class ActionObject:
    """A carrier acted on by a group, or by a groupoid via an anchor map.

    act[g][p] is the result of g acting on p; in the groupoid case it is
    None exactly when src(g) != anchor(p).
    """

    algebra: FinGroup | FinGroupoid
    carrier: FinSet
    act: tuple[tuple[int | None, ...], ...]
    anchor: FinFn | None = None

    @property
    def is_group(self) -> bool:
        return isinstance(self.algebra, FinGroup)

    def anchor_of(self, p: int) -> int:
        if self.anchor is None:
            return 0
        return self.anchor.table[p]

    def defined(self, g: int, p: int) -> bool:
        return self.act[g][p] is not None

    def apply(self, g: int, p: int) -> int:
        v = self.act[g][p]
        assert v is not None, "action undefined on this pair"
        return v


def validate_action(alg, carrier: FinSet, act, anchor=None) -> ActionObject:
    """Check the unit and associativity laws of a candidate action table,
    and in the groupoid case the anchor bookkeeping."""
    act = tuple(tuple(row) for row in act)
    n = carrier.size
    if len(act) != alg.order or any(len(row) != n for row in act):
        raise ValueError("action table is not algebra x carrier")
    if isinstance(alg, FinGroup):
        if anchor is not None:
            raise ValueError("group actions take no anchor")
        for g in range(alg.order):
            for p in range(n):
                v = act[g][p]
                if v is None or not (0 <= v < n):
                    raise ValueError("action entry out of range")
        for p in range(n):
            if act[alg.unit][p] != p:
                raise UnitLawFail("unit must act as the identity", p)
        for g in range(alg.order):
            for h in range(alg.order):
                for p in range(n):
                    if act[alg.mul[g][h]][p] != act[g][act[h][p]]:
                        raise AssocLawFail("action is not associative", (g, h, p))
        return ActionObject(alg, carrier, act)
    if anchor is None:
        raise AnchorMismatch("groupoid actions need an anchor map")
    anchor = FinFn(carrier, alg.objects, tuple(anchor.table if isinstance(anchor, FinFn) else anchor))
    for g in range(alg.order):
        for p in range(n):
            v = act[g][p]
            should = alg.src.table[g] == anchor.table[p]
            if (v is not None) != should:
                raise AnchorMismatch("action defined on the wrong pairs", (g, p))
            if v is not None:
                if not (0 <= v < n):
                    raise ValueError("action entry out of range")
                if anchor.table[v] != alg.tgt.table[g]:
                    raise AnchorMismatch("acting must move the anchor to tgt", (g, p))
    for p in range(n):
        e = alg.ident.table[anchor.table[p]]
        if act[e][p] != p:
            raise UnitLawFail("identity arrows must act as the identity", p)
    for g in range(alg.order):
        for h in range(alg.order):
            if alg.comp[g][h] is None:
                continue
            gh = alg.comp[g][h]
            for p in range(n):
                if act[h][p] is None:
                    continue
                if act[gh][p] != act[g][act[h][p]]:
                    raise AssocLawFail("action is not associative", (g, h, p))
    return ActionObject(alg, carrier, act, anchor)


@dataclass(frozen=True)
class EquivariantMap:
    dom: ActionObject
    cod: ActionObject
    fn: FinFn

    def __post_init__(self):
        witness = equivariance_witness(self.dom, self.cod, self.fn)
        if witness is not None:
            raise NotEquivariant("map does not commute with the actions", witness)


def equivariance_witness(a: ActionObject, b: ActionObject, fn: FinFn):
    """None if fn is equivariant (and anchor-preserving), else a witness."""
    if a.algebra != b.algebra:
        raise AlgebraMismatch("objects live over different algebras")
    if fn.dom != a.carrier or fn.cod != b.carrier:
        raise ValueError("map endpoints do not match the carriers")
    if a.anchor is not None:
        for p in range(a.carrier.size):
            if b.anchor.table[fn.table[p]] != a.anchor.table[p]:
                return ("anchor", p)
    for g in range(a.algebra.order):
        row = a.act[g]
        for p in range(a.carrier.size):
            if row[p] is None:
                continue
            if fn.table[row[p]] != b.act[g][fn.table[p]]:
                return (g, p)
    return None


def trivial_action(alg, x: FinSet) -> ActionObject:
    """Every arrow acts as the identity.  In the groupoid case the carrier
    is objects x X with first-component anchor, and an arrow moves the
    object coordinate from src to tgt."""
    if isinstance(alg, FinGroup):
        act = tuple(tuple(range(x.size)) for _ in range(alg.order))
        return ActionObject(alg, x, act)
    prod = product(alg.objects, x)
    anchor = prod.p1
    act = []
    for g in range(alg.order):
        s, t = alg.src.table[g], alg.tgt.table[g]
        row = []
        for k in range(prod.carrier.size):
            o, xi = prod.split(k)
            row.append(prod.index(t, xi) if o == s else None)
        act.append(tuple(row))
    return ActionObject(alg, prod.carrier, tuple(act), anchor)


def self_action(g: FinGroup) -> ActionObject:
    """The group acting on itself by multiplication."""
    return ActionObject(g, g.carrier, g.mul)


def arrows_action(gpd: FinGroupoid) -> ActionObject:
    """The arrow carrier anchored at tgt, acted on by post-composition."""
    act = []
    for g in range(gpd.order):
        row = []
        for a in range(gpd.order):
            row.append(gpd.comp[g][a] if gpd.src.table[g] == gpd.tgt.table[a] else None)
        act.append(tuple(row))
    return ActionObject(gpd, gpd.arrows, tuple(act), gpd.tgt)


def terminal_action(alg) -> ActionObject:
    """The terminal object: a point for groups; the object set with the
    tgt-translation action for groupoids."""
    if isinstance(alg, FinGroup):
        return trivial_action(alg, TERMINAL)
    act = []
    for g in range(alg.order):
        row = [alg.tgt.table[g] if alg.src.table[g] == o else None
               for o in range(alg.objects.size)]
        act.append(tuple(row))
    return ActionObject(alg, alg.objects, tuple(act), FinFn.identity(alg.objects))


@dataclass(frozen=True)
class Orbits:
    quotient: FinSet
    q: FinFn
    reps: tuple[int, ...]


@lru_cache(maxsize=None)
def sigma(a: ActionObject) -> Orbits:
    """Orbit quotient with its canonical surjection; classes are numbered
    by least representative."""
    uf = UnionFind(a.carrier.size)
    for g in range(a.algebra.order):
        row = a.act[g]
        for p in range(a.carrier.size):
            if row[p] is not None:
                uf.union(p, row[p])
    classes = uf.classes()
    quotient = FinSet(len(classes))
    table = [0] * a.carrier.size
    reps = []
    for k, members in enumerate(classes):
        reps.append(members[0])
        for m in members:
            table[m] = k
    return Orbits(quotient, FinFn(a.carrier, quotient, tuple(table)), tuple(reps))


def sigma_mor(dom: ActionObject, cod: ActionObject, fn: FinFn) -> FinFn:
    """The induced map on orbit sets of an equivariant fn."""
    od, oc = sigma(dom), sigma(cod)
    return FinFn(od.quotient, oc.quotient,
                 tuple(oc.q.table[fn.table[r]] for r in od.reps))


@dataclass(frozen=True)
class ActionProduct:
    obj: ActionObject
    pairs: tuple[tuple[int, int], ...]
    p1: FinFn
    p2: FinFn

    def index(self, i: int, j: int) -> int:
        return self._index[(i, j)]

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: k for k, p in enumerate(self.pairs)})

    def tuple_map(self, f: FinFn, g: FinFn) -> FinFn:
        assert f.dom == g.dom
        return FinFn(f.dom, self.obj.carrier,
                     tuple(self.index(f.table[z], g.table[z]) for z in range(f.dom.size)))


@lru_cache(maxsize=None)
def action_product(a: ActionObject, b: ActionObject) -> ActionProduct:
    """The categorical product: plain pairs with the diagonal action for
    groups, anchored pairs (a pullback over the object set) for groupoids."""
    if a.algebra != b.algebra:
        raise AlgebraMismatch("product needs a common algebra")
    if a.is_group:
        pairs = tuple((i, j) for i in range(a.carrier.size) for j in range(b.carrier.size))
        anchor = None
    else:
        pairs = tuple((i, j) for i in range(a.carrier.size) for j in range(b.carrier.size)
                      if a.anchor.table[i] == b.anchor.table[j])
    carrier = FinSet(len(pairs))
    index = {p: k for k, p in enumerate(pairs)}
    act = []
    for g in range(a.algebra.order):
        row = []
        for (i, j) in pairs:
            if a.act[g][i] is None or b.act[g][j] is None:
                row.append(None)
            else:
                row.append(index[(a.act[g][i], b.act[g][j])])
        act.append(tuple(row))
    if a.is_group:
        obj = ActionObject(a.algebra, carrier, tuple(act))
    else:
        anchor = FinFn(carrier, a.algebra.objects,
                       tuple(a.anchor.table[i] for (i, _) in pairs))
        obj = ActionObject(a.algebra, carrier, tuple(act), anchor)
    p1 = FinFn(carrier, a.carrier, tuple(i for (i, _) in pairs))
    p2 = FinFn(carrier, b.carrier, tuple(j for (_, j) in pairs))
    return ActionProduct(obj, pairs, p1, p2)


@dataclass(frozen=True)
class UntwistIso:
    """The untwisting of a product with the self-action: forward sends
    (a, g) with the trivial action on the left factor to (g.a, g)."""

    trivial_side: ActionObject
    twisted_side: ActionObject
    cert: IsoCertificate
    forward: EquivariantMap
    backward: EquivariantMap


def untwist_iso(a: ActionObject) -> UntwistIso:
    g = a.algebra
    assert isinstance(g, FinGroup), "untwisting is stated for group actions"
    triv = trivial_action(g, a.carrier)
    left = action_product(triv, self_action(g))
    right = action_product(a, self_action(g))
    fwd_table = []
    for (p, h) in left.pairs:
        fwd_table.append(right.index(a.act[h][p], h))
    bwd_table = []
    for (p, h) in right.pairs:
        bwd_table.append(left.index(a.act[g.inv[h]][p], h))
    fwd = FinFn(left.obj.carrier, right.obj.carrier, tuple(fwd_table))
    bwd = FinFn(right.obj.carrier, left.obj.carrier, tuple(bwd_table))
    cert = IsoCertificate(fwd, bwd)
    return UntwistIso(left.obj, right.obj,
                      cert,
                      EquivariantMap(left.obj, right.obj, fwd),
                      EquivariantMap(right.obj, left.obj, bwd))


# Exhaustive enumeration of actions ----------------------------------------

def _closure(alg_mul, rows: dict[int, tuple[int, ...]], n: int):
    """Close a partial assignment of action rows under the multiplication
    table; None signals a conflict."""
    rows = dict(rows)
    changed = True
    while changed:
        changed = False
        items = list(rows.items())
        for ga, ra in items:
            for gb, rb in items:
                gc = alg_mul[ga][gb]
                rc = tuple(ra[rb[p]] for p in range(n))
                old = rows.get(gc)
                if old is None:
                    rows[gc] = rc
                    changed = True
                elif old != rc:
                    return None
    return rows


def all_group_actions(g: FinGroup, carrier: FinSet):
    """Every action table of g on the carrier, by constraint propagation:
    the unit row is forced and assigned rows force the rows of products.
    Rows are permutations because every group element is invertible.
    """
    n = carrier.size
    perms = [tuple(p) for p in itertools.permutations(range(n))]

    def rec(rows):
        rows = _closure(g.mul, rows, n)
        if rows is None:
            return
        missing = [e for e in range(g.order) if e not in rows]
        if not missing:
            yield ActionObject(g, carrier, tuple(rows[e] for e in range(g.order)))
            return
        e = missing[0]
        for r in perms:
            nxt = dict(rows)
            nxt[e] = r
            yield from rec(nxt)

    yield from rec({g.unit: tuple(range(n))})


def all_groupoid_actions(gpd: FinGroupoid, carrier: FinSet):
    """Every anchored action of the groupoid on the carrier: all anchor
    maps, then all arrow-wise fibre bijections consistent with
    composition."""
    n = carrier.size
    n_obj = gpd.objects.size
    for anchor_table in itertools.product(range(n_obj), repeat=n) if n_obj else ([()] if n == 0 else []):
        fibers = {o: [p for p in range(n) if anchor_table[p] == o] for o in range(n_obj)}
        if any(len(fibers[gpd.src.table[a]]) != len(fibers[gpd.tgt.table[a]])
               for a in range(gpd.order)):
            continue
        yield from _groupoid_actions_for_anchor(gpd, carrier, anchor_table, fibers)


def _groupoid_actions_for_anchor(gpd, carrier, anchor_table, fibers):
    n = carrier.size

    def closure(rows):
        rows = dict(rows)
        changed = True
        while changed:
            changed = False
            items = list(rows.items())
            for ga, ra in items:
                for gb, rb in items:
                    gc = gpd.comp[ga][gb]
                    if gc is None:
                        continue
                    rc = tuple(ra[rb[p]] if rb[p] is not None else None for p in range(n))
                    old = rows.get(gc)
                    if old is None:
                        rows[gc] = rc
                        changed = True
                    elif old != rc:
                        return None
        return rows

    ident_rows = {}
    for o in range(gpd.objects.size):
        e = gpd.ident.table[o]
        ident_rows[e] = tuple(p if anchor_table[p] == o else None for p in range(n))

    def rec(rows):
        rows = closure(rows)
        if rows is None:
            return
        missing = [a for a in range(gpd.order) if a not in rows]
        if not missing:
            act = tuple(rows[a] for a in range(gpd.order))
            yield ActionObject(gpd, carrier, act,
                               FinFn(carrier, gpd.objects, anchor_table))
            return
        a = missing[0]
        src_f = fibers[gpd.src.table[a]]
        tgt_f = fibers[gpd.tgt.table[a]]
        for image in itertools.permutations(tgt_f):
            row = [None] * n
            for p, v in zip(src_f, image):
                row[p] = v
            nxt = dict(rows)
            nxt[a] = tuple(row)
            yield from rec(nxt)

    yield from rec(ident_rows)


def all_actions(alg, carrier: FinSet):
    if isinstance(alg, FinGroup):
        yield from all_group_actions(alg, carrier)
    else:
        yield from all_groupoid_actions(alg, carrier)


def equivariant_maps(a: ActionObject, b: ActionObject):
    """Brute-force enumeration of the hom set of the action category."""
    from .finset import all_functions

    for fn in all_functions(a.carrier, b.carrier):
        if equivariance_witness(a, b, fn) is None:
            yield fn


# JSON fixture forms --------------------------------------------------------

def group_to_json(g: FinGroup) -> dict:
    return {"order": g.order, "mul": [list(r) for r in g.mul],
            "unit": g.unit, "inv": list(g.inv)}


def group_from_json(data) -> FinGroup:
    return validate_group(data["mul"], data["unit"], data["inv"])


def groupoid_to_json(g: FinGroupoid) -> dict:
    return {"objects": g.objects.size, "arrows": g.arrows.size,
            "src": list(g.src.table), "tgt": list(g.tgt.table),
            "ident": list(g.ident.table),
            "comp": [list(r) for r in g.comp], "inv": list(g.inv.table)}


def groupoid_from_json(data) -> FinGroupoid:
    return validate_groupoid(data["objects"], data["arrows"], data["src"],
                             data["tgt"], data["ident"], data["comp"], data["inv"])


def action_to_json(a: ActionObject, algebra_ref) -> dict:
    out = {"algebra": algebra_ref,
           "carrier": a.carrier.size,
           "act": [list(r) for r in a.act]}
    if a.anchor is not None:
        out["anchor"] = list(a.anchor.table)
    return out


def action_from_json(data, alg) -> ActionObject:
    carrier = FinSet(data["carrier"] if isinstance(data["carrier"], int)
                     else data["carrier"]["size"])
    anchor = data.get("anchor")
    if anchor is not None:
        anchor = FinFn(carrier, alg.objects, tuple(anchor))
    return validate_action(alg, carrier, data["act"], anchor)
