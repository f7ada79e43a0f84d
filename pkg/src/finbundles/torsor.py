"""Principal bundles over a base: the torsor predicate, the division map
and its laws, brute-force enumeration, and descent-data gluing.

A bundle projection in finite sets is an effective descent morphism
exactly when it is surjective (every surjection splits), so the predicate
checks surjectivity plus the freeness/transitivity condition: the
action-and-projection map onto the fibrewise pairs must be a bijection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .finset import (
    FinFn,
    FinSet,
    IsoCertificate,
    Pullback,
    SliceObject,
    UnionFind,
    product,
    pullback,
)
from .algebra import (
    ActionObject,
    FinGroup,
    all_actions,
    equivariance_witness,
    validate_action,
)


class TorsorError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSurjective(TorsorError):
    pass


class NotFreeTransitive(TorsorError):
    pass


class CocycleFail(TorsorError):
    pass


@dataclass(frozen=True)
class Bundle:
    """An action object with an action-invariant projection to a base."""

    action: ActionObject
    base: FinSet
    proj: FinFn

    def __post_init__(self):
        if self.proj.dom != self.action.carrier or self.proj.cod != self.base:
            raise ValueError("proj must run carrier -> base")
        for g in range(self.action.algebra.order):
            row = self.action.act[g]
            for p in range(self.action.carrier.size):
                if row[p] is not None and self.proj.table[row[p]] != self.proj.table[p]:
                    raise ValueError("projection is not action-invariant", (g, p))


@dataclass(frozen=True)
class TorsorWitness:
    """Evidence that a bundle is principal: the inverse of the
    action-and-projection map, stored as a division table on the fibrewise
    pairs, plus one fibre representative per base point."""

    bundle: Bundle
    pairs: tuple[tuple[int, int], ...]
    division: tuple[int, ...]
    reps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: k for k, p in enumerate(self.pairs)})

    def psi(self, p: int, q: int) -> int:
        """The unique algebra element moving q to p within a fibre."""
        return self.division[self._index[(p, q)]]

    def same_fiber(self, p: int, q: int) -> bool:
        return (p, q) in self._index


def _acting_pairs(a: ActionObject):
    for g in range(a.algebra.order):
        row = a.act[g]
        for p in range(a.carrier.size):
            if row[p] is not None:
                yield g, p


def is_principal_bundle(b: Bundle) -> TorsorWitness:
    """Decide the torsor predicate, extracting the division table from the
    inverse of (act, pr2) when it exists."""
    fibers: dict[int, list[int]] = {x: [] for x in range(b.base.size)}
    for p in range(b.action.carrier.size):
        fibers[b.proj.table[p]].append(p)
    for x in range(b.base.size):
        if not fibers[x]:
            raise NotSurjective("projection misses a base point", x)
    reps = tuple(fibers[x][0] for x in range(b.base.size))
    pb = pullback(b.proj, b.proj)
    hits: dict[tuple[int, int], list[int]] = {pair: [] for pair in pb.pairs}
    for g, p in _acting_pairs(b.action):
        hits[(b.action.apply(g, p), p)].append(g)
    division = []
    for pair in pb.pairs:
        sols = hits[pair]
        if len(sols) != 1:
            raise NotFreeTransitive("fibrewise pair has %d solutions" % len(sols),
                                    (pair, len(sols)))
        division.append(sols[0])
    return TorsorWitness(b, pb.pairs, tuple(division), reps)


@dataclass(frozen=True)
class DivisionReport:
    witness: TorsorWitness
    checked_pairs: int
    checked_translations: int


def division_map(w: TorsorWitness) -> DivisionReport:
    """Verify the division-map laws on every defined pair; a failure here
    would mean the witness itself is inconsistent, so it aborts."""
    a = w.bundle.action
    alg = a.algebra
    group = isinstance(alg, FinGroup)
    n_checked = 0
    for (p, q) in w.pairs:
        d = w.psi(p, q)
        assert a.apply(d, q) == p, "division must solve g.q = p"
        if p == q:
            expected = alg.unit if group else alg.ident.table[a.anchor_of(p)]
            assert d == expected, "division on the diagonal must be the identity"
        n_checked += 1
    n_trans = 0
    for (p, q) in w.pairs:
        d = w.psi(p, q)
        for g, pp in _acting_pairs(a):
            if pp == p:
                lhs = w.psi(a.apply(g, p), q)
                rhs = alg.mul[g][d] if group else alg.comp[g][d]
                assert lhs == rhs, "left translation law fails"
                n_trans += 1
            if pp == q:
                lhs = w.psi(p, a.apply(g, q))
                gi = alg.inv[g] if group else alg.inv.table[g]
                rhs = alg.mul[d][gi] if group else alg.comp[d][gi]
                assert lhs == rhs, "right translation law fails"
                n_trans += 1
    return DivisionReport(w, n_checked, n_trans)


def trivial_torsor(g: FinGroup, x: FinSet) -> TorsorWitness:
    """The canonical torsor over x: carrier x * G with first projection
    and left multiplication on the group coordinate."""
    prod = product(x, g.carrier)
    act = []
    for h in range(g.order):
        row = []
        for k in range(prod.carrier.size):
            x0, a = prod.split(k)
            row.append(prod.index(x0, g.mul[h][a]))
        act.append(tuple(row))
    action = validate_action(g, prod.carrier, act)
    return is_principal_bundle(Bundle(action, x, prod.p1))


def equivariant_iso_over_base(w1: TorsorWitness, w2: TorsorWitness) -> FinFn | None:
    """Search for an equivariant bijection commuting with the projections
    (and anchors).  Such a map is determined by the image of one fibre
    representative per base point, so only those images are enumerated.
    None when the bundles are not isomorphic."""
    b1, b2 = w1.bundle, w2.bundle
    if b1.base != b2.base or b1.action.algebra != b2.action.algebra:
        return None
    n = b1.action.carrier.size
    if n != b2.action.carrier.size:
        return None
    fibers2: dict[int, list[int]] = {x: [] for x in range(b1.base.size)}
    for q in range(n):
        fibers2[b2.proj.table[q]].append(q)
    candidates = []
    for x in range(b1.base.size):
        rep = w1.reps[x]
        anchor_needed = b1.action.anchor_of(rep)
        opts = [q for q in fibers2[x]
                if b2.action.anchor is None
                or b2.action.anchor.table[q] == anchor_needed]
        if not opts:
            return None
        candidates.append(opts)
    for combo in itertools.product(*candidates):
        table = [0] * n
        for p in range(n):
            x = b1.proj.table[p]
            table[p] = b2.action.apply(w1.psi(p, w1.reps[x]), combo[x])
        fn = FinFn(b1.action.carrier, b2.action.carrier, tuple(table))
        if not fn.is_bijection():
            continue
        if any(b2.proj.table[fn.table[p]] != b1.proj.table[p] for p in range(n)):
            continue
        if equivariance_witness(b1.action, b2.action, fn) is None:
            return fn
    return None


@dataclass(frozen=True)
class TorsorEnumeration:
    witnesses: tuple[TorsorWitness, ...]
    structures: int
    iso_classes: tuple[tuple[int, ...], ...]

    @property
    def iso_count(self) -> int:
        return len(self.iso_classes)

    def class_reps(self) -> tuple[TorsorWitness, ...]:
        return tuple(self.witnesses[cls[0]] for cls in self.iso_classes)


class BoundsExceeded(TorsorError):
    pass


@lru_cache(maxsize=None)
def _fiber_torsor_actions(alg, size: int):
    """Actions on a single fibre that already pass the predicate over a
    point.  The projection is invariant, so a candidate passes over the
    whole base exactly when every fibre block does; combining only the
    passing blocks prunes nothing that could have succeeded."""
    point = FinSet(1)
    out = []
    for a in all_actions(alg, FinSet(size)):
        try:
            is_principal_bundle(Bundle(a, point, FinFn.constant(a.carrier, point, 0)))
        except TorsorError:
            continue
        out.append(a)
    return tuple(out)


def _embed_fiber_action(a: ActionObject, points: tuple[int, ...], act, anchors):
    for g in range(a.algebra.order):
        row = a.act[g]
        for local, p in enumerate(points):
            if row[local] is not None:
                act[g][p] = points[row[local]]
    if a.anchor is not None:
        for local, p in enumerate(points):
            anchors[p] = a.anchor.table[local]


def enumerate_torsors(alg, x: FinSet, carrier: FinSet, max_carrier: int = 8) -> TorsorEnumeration:
    """Enumerate every (projection, action) structure on the carrier that
    passes the torsor predicate, and group the results into isomorphism
    classes by exhaustive bijection search.

    Invariance forces the action to restrict to each projection fibre, so
    candidates are assembled fibrewise from all actions on each fibre; a
    fibre whose pair count cannot match the action-and-projection count is
    pruned by cardinality before any table is built.
    """
    if carrier.size > max_carrier:
        raise BoundsExceeded("carrier too large to enumerate", carrier.size)
    group = isinstance(alg, FinGroup)
    witnesses = []
    for proj_table in itertools.product(range(x.size), repeat=carrier.size):
        fibers: dict[int, list[int]] = {b: [] for b in range(x.size)}
        for p, b in enumerate(proj_table):
            fibers[b].append(p)
        if any(not f for f in fibers.values()):
            continue
        if group and any(len(f) != alg.order for f in fibers.values()):
            continue
        proj = FinFn(carrier, x, proj_table)
        choices = [[(tuple(f), a) for a in _fiber_torsor_actions(alg, len(f))]
                   for f in (fibers[b] for b in range(x.size))]
        for combo in itertools.product(*choices):
            act = [[None] * carrier.size for _ in range(alg.order)]
            anchors = [0] * carrier.size
            for points, fiber_action in combo:
                _embed_fiber_action(fiber_action, points, act, anchors)
            if group:
                action = ActionObject(alg, carrier, tuple(tuple(r) for r in act))
            else:
                action = ActionObject(alg, carrier, tuple(tuple(r) for r in act),
                                      FinFn(carrier, alg.objects, tuple(anchors)))
            try:
                witnesses.append(is_principal_bundle(Bundle(action, x, proj)))
            except TorsorError:
                continue
    classes: list[list[int]] = []
    for i, w in enumerate(witnesses):
        for cls in classes:
            if equivariant_iso_over_base(witnesses[cls[0]], w) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    return TorsorEnumeration(tuple(witnesses), len(witnesses),
                             tuple(tuple(c) for c in classes))


# Descent data ---------------------------------------------------------------

@dataclass(frozen=True)
class DescentDatum:
    """An object over the total space of a surjection, with a gluing
    isomorphism between its two pullbacks to the fibrewise pairs."""

    over: SliceObject
    glue: IsoCertificate


@dataclass(frozen=True)
class DescentShape:
    pp: Pullback
    pb1: Pullback
    pb2: Pullback


def descent_pullbacks(f: FinFn, over: SliceObject) -> DescentShape:
    """The two canonical pullbacks of the slice to the fibrewise pairs of
    f; the glue certificate of a datum runs from the first to the second."""
    pp = pullback(f, f)
    pb1 = pullback(pp.p1, over.proj)
    pb2 = pullback(pp.p2, over.proj)
    return DescentShape(pp, pb1, pb2)


def _theta(shape: DescentShape, glue: IsoCertificate, w: int, y: int) -> int:
    k = shape.pb1.index(w, y)
    w2, y2 = shape.pb2.pairs[glue.forward.table[k]]
    if w2 != w:
        raise CocycleFail("glue does not live over the fibrewise pairs", (w, y))
    return y2


def validate_descent_datum(f: FinFn, d: DescentDatum) -> DescentShape:
    """Check the shape, unit and cocycle conditions; returns the pullback
    shape for reuse."""
    if d.over.base != f.dom:
        raise ValueError("datum must live over the total space of f")
    shape = descent_pullbacks(f, d.over)
    if (d.glue.forward.dom != shape.pb1.carrier
            or d.glue.forward.cod != shape.pb2.carrier):
        raise ValueError("glue endpoints do not match the canonical pullbacks")
    p = d.over.proj
    for w, (p1, p2) in enumerate(shape.pp.pairs):
        for y in range(d.over.total.size):
            if p.table[y] != p1:
                continue
            y2 = _theta(shape, d.glue, w, y)
            if p1 == p2 and y2 != y:
                raise CocycleFail("glue must be the identity on the diagonal", (w, y))
    for w12, (p1, p2) in enumerate(shape.pp.pairs):
        for w23, (q2, p3) in enumerate(shape.pp.pairs):
            if q2 != p2 or f.table[p1] != f.table[p3]:
                continue
            w13 = shape.pp.index(p1, p3)
            for y in range(d.over.total.size):
                if p.table[y] != p1:
                    continue
                step = _theta(shape, d.glue, w23, _theta(shape, d.glue, w12, y))
                direct = _theta(shape, d.glue, w13, y)
                if step != direct:
                    raise CocycleFail("cocycle condition fails", (p1, p2, p3, y))
    return shape


def canonical_descent_datum(f: FinFn, s: SliceObject) -> DescentDatum:
    """The datum obtained by pulling a slice over the base back along f:
    the glue transports (p1, z) to (p2, z)."""
    assert s.base == f.cod
    pb = pullback(f, s.proj)
    over = SliceObject(pb.carrier, f.dom, pb.p1)
    shape = descent_pullbacks(f, over)
    fwd = []
    for (w, k) in shape.pb1.pairs:
        p1, p2 = shape.pp.pairs[w]
        _, z = pb.pairs[k]
        fwd.append(shape.pb2.index(w, pb.index(p2, z)))
    bwd = []
    for (w, k) in shape.pb2.pairs:
        p1, p2 = shape.pp.pairs[w]
        _, z = pb.pairs[k]
        bwd.append(shape.pb1.index(w, pb.index(p1, z)))
    glue = IsoCertificate(FinFn(shape.pb1.carrier, shape.pb2.carrier, tuple(fwd)),
                          FinFn(shape.pb2.carrier, shape.pb1.carrier, tuple(bwd)))
    return DescentDatum(over, glue)


@dataclass(frozen=True)
class GluedSlice:
    result: SliceObject
    pullback: Pullback
    cert: IsoCertificate


def glue_descent_data(f: FinFn, d: DescentDatum) -> GluedSlice:
    """Quotient the datum by its gluing relation, producing a slice over
    the base whose pullback along f is certified isomorphic to the datum."""
    if not f.is_surjection():
        missed = min(set(range(f.cod.size)) - set(f.table))
        raise NotSurjective("cannot glue along a non-surjection", missed)
    shape = validate_descent_datum(f, d)
    p = d.over.proj
    uf = UnionFind(d.over.total.size)
    for w, (p1, _) in enumerate(shape.pp.pairs):
        for y in range(d.over.total.size):
            if p.table[y] == p1:
                uf.union(y, _theta(shape, d.glue, w, y))
    classes = uf.classes()
    quotient = FinSet(len(classes))
    cls_of = [0] * d.over.total.size
    for k, members in enumerate(classes):
        for m in members:
            cls_of[m] = k
    base_of = tuple(f.table[p.table[members[0]]] for members in classes)
    result = SliceObject(quotient, f.cod, FinFn(quotient, f.cod, base_of))
    pb = pullback(f, result.proj)
    fwd = FinFn(d.over.total, pb.carrier,
                tuple(pb.index(p.table[y], cls_of[y]) for y in range(d.over.total.size)))
    bwd_table = []
    for (p0, c) in pb.pairs:
        rep = classes[c][0]
        y = _theta(shape, d.glue, shape.pp.index(p.table[rep], p0), rep)
        bwd_table.append(y)
    bwd = FinFn(pb.carrier, d.over.total, tuple(bwd_table))
    cert = IsoCertificate(fwd, bwd)
    return GluedSlice(result, pb, cert)


# JSON forms -----------------------------------------------------------------

def bundle_to_json(b: Bundle, algebra_ref) -> dict:
    from .algebra import action_to_json

    return {"action": action_to_json(b.action, algebra_ref),
            "base": b.base.size,
            "proj": list(b.proj.table)}


def bundle_from_json(data, alg) -> Bundle:
    from .algebra import action_from_json

    action = action_from_json(data["action"], alg)
    base = FinSet(data["base"] if isinstance(data["base"], int) else data["base"]["size"])
    return Bundle(action, base, FinFn(action.carrier, base, tuple(data["proj"])))
