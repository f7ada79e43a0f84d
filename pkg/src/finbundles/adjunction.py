"""Adjunction presentations between slice and action categories, the
tensor/evaluation construction, both directions of the bundle <->
adjunction correspondence, and the Frobenius reciprocity checkers.

A presentation is a pair of computable functors with per-object unit and
counit components.  Categories of actions have unboundedly many objects,
so every law (triangle identities, naturality, reciprocity, over-base
comparisons) is verified on an explicit finite family and the reports
carry the family bounds used.
"""

from __future__ import annotations

from dataclasses import dataclass

from .finset import FinFn, FinSet, IsoCertificate, SliceObject, TERMINAL, pullback
from .algebra import (
    ActionObject,
    AlgebraMismatch,
    EquivariantMap,
    FinGroup,
    FinGroupoid,
    NotEquivariant,
    equivariance_witness,
    group_bundle_groupoid,
    sigma,
    sigma_mor,
    trivial_action,
)
from .categories import (
    ActionCategory,
    FamilyTooLarge,
    Mor,
    SliceCategory,
    SliceOverCategory,
    SlicedObj,
)
from .torsor import Bundle, TorsorWitness


class AdjunctionError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotOverBase(AdjunctionError):
    pass


class FrobeniusFail(AdjunctionError):
    pass


def _memo(fn):
    cache = {}

    def wrapped(arg):
        if arg not in cache:
            cache[arg] = fn(arg)
        return cache[arg]

    return wrapped


class AdjunctionPresentation:
    """A computable left/right functor pair with unit and counit
    components, between two of the wrapped categories."""

    def __init__(self, name, dom, cod, left_obj, left_mor, right_obj, right_mor,
                 unit_at, counit_at, over_iso_at=None):
        self.name = name
        self.dom = dom
        self.cod = cod
        self.left_obj = _memo(left_obj)
        self.left_mor = _memo(left_mor)
        self.right_obj = _memo(right_obj)
        self.right_mor = _memo(right_mor)
        self.unit_at = _memo(unit_at)
        self.counit_at = _memo(counit_at)
        self.over_iso_at = _memo(over_iso_at) if over_iso_at is not None else None

    def __repr__(self):
        return "AdjunctionPresentation(%s)" % self.name


# Tensor and evaluation ------------------------------------------------------

@dataclass(frozen=True)
class TensorResult:
    carrier: FinSet
    quotient_map: FinFn
    product: object
    reps: tuple[int, ...]
    sigma_cert: IsoCertificate

    def class_of(self, p: int, a: int) -> int:
        return self.quotient_map.table[self.product.index(p, a)]

    def rep_pair(self, k: int) -> tuple[int, int]:
        return self.product.pairs[self.reps[k]]


_tensor_cache: dict = {}


def tensor(w: TorsorWitness, a: ActionObject) -> TensorResult:
    """The quotient of the (anchored) product of the torsor carrier with a
    by the relation g.p (x) a = p (x) g^(-1).a, built as a coequalizer."""
    key = (w, a)
    if key in _tensor_cache:
        return _tensor_cache[key]
    from .finset import coequalizer
    from .algebra import action_product

    P = w.bundle.action
    if P.algebra != a.algebra:
        raise AlgebraMismatch("tensor needs a common algebra")
    alg = P.algebra
    group = isinstance(alg, FinGroup)
    prod = action_product(P, a)
    triples = []
    for g in range(alg.order):
        for (p, av) in prod.pairs:
            if group:
                triples.append((g, p, av))
            else:
                if alg.src.table[g] == P.anchor.table[p] and alg.tgt.table[g] == a.anchor.table[av]:
                    triples.append((g, p, av))
    dom = FinSet(len(triples))
    t1, t2 = [], []
    for (g, p, av) in triples:
        gi = alg.inv[g] if group else alg.inv.table[g]
        t1.append(prod.index(P.act[g][p], av))
        t2.append(prod.index(p, a.act[gi][av]))
    coeq = coequalizer(FinFn(dom, prod.obj.carrier, tuple(t1)),
                       FinFn(dom, prod.obj.carrier, tuple(t2)))
    orb = sigma(prod.obj)
    fwd = FinFn(coeq.quotient, orb.quotient,
                tuple(orb.q.table[r] for r in coeq.reps))
    bwd = FinFn(orb.quotient, coeq.quotient,
                tuple(coeq.q.table[r] for r in orb.reps))
    result = TensorResult(coeq.quotient, coeq.q, prod, coeq.reps,
                          IsoCertificate(fwd, bwd))
    _tensor_cache[key] = result
    return result


@dataclass(frozen=True)
class EvaluationResult:
    fn: FinFn
    equivariant: EquivariantMap
    domain: object
    tensor: TensorResult


def _trivial_point(alg, triv_carrier_size: int, anchor_obj: int, value: int) -> int:
    """Index of a value inside a trivial-action carrier (which is
    objects x value pairs in the groupoid case)."""
    if isinstance(alg, FinGroup):
        return value
    return anchor_obj * triv_carrier_size + value


def evaluation(w: TorsorWitness, a: ActionObject) -> EvaluationResult:
    """The evaluation map out of the product with the tensor, for torsors
    over a point: (p', class of p (x) a) -> psi(p', p).a.  Independence of
    the representative is checked exhaustively."""
    from .algebra import action_product

    assert w.bundle.base.size == 1, "evaluation is defined for torsors over a point"
    t = tensor(w, a)
    P = w.bundle.action
    alg = P.algebra
    group = isinstance(alg, FinGroup)
    triv = trivial_action(alg, t.carrier)
    dom_prod = action_product(P, triv)
    members: dict[int, list[int]] = {}
    for idx, cls in enumerate(t.quotient_map.table):
        members.setdefault(cls, []).append(idx)
    table = []
    for (p, tv) in dom_prod.pairs:
        cls = tv if group else tv % t.carrier.size
        values = set()
        for m in members[cls]:
            p0, a0 = t.product.pairs[m]
            values.add(a.apply(w.psi(p, p0), a0))
        assert len(values) == 1, "evaluation depends on the representative"
        table.append(values.pop())
    fn = FinFn(dom_prod.obj.carrier, a.carrier, tuple(table))
    return EvaluationResult(fn, EquivariantMap(dom_prod.obj, a, fn), dom_prod, t)


def transpose_down(w: TorsorWitness, a: ActionObject, f: FinFn) -> EquivariantMap:
    """Send a plain map into the tensor to the equivariant map out of the
    product with the torsor."""
    from .finset import CodMismatch
    from .algebra import action_product

    t = tensor(w, a)
    if f.cod != t.carrier:
        raise CodMismatch("map must land in the tensor carrier", f.cod)
    ev = evaluation(w, a)
    P = w.bundle.action
    alg = P.algebra
    triv_z = trivial_action(alg, f.dom)
    dom_prod = action_product(P, triv_z)
    table = []
    for (p, zv) in dom_prod.pairs:
        if isinstance(alg, FinGroup):
            z = zv
            tv = f.table[z]
        else:
            z = zv % f.dom.size
            tv = P.anchor.table[p] * t.carrier.size + f.table[z]
        table.append(ev.fn.table[ev.domain.index(p, tv)])
    fn = FinFn(dom_prod.obj.carrier, a.carrier, tuple(table))
    return EquivariantMap(dom_prod.obj, a, fn)


def transpose_up(w: TorsorWitness, a: ActionObject, g) -> FinFn:
    """The inverse transpose: factor an equivariant map out of the product
    through the tensor quotient.  A raw map is accepted and checked for
    equivariance first."""
    from .algebra import action_product, equivariance_witness

    t = tensor(w, a)
    P = w.bundle.action
    alg = P.algebra
    group = isinstance(alg, FinGroup)
    if isinstance(g, EquivariantMap):
        g_map = g
    else:
        z = _z_size_from(g.dom.size, P, group)
        dom_prod = action_product(P, trivial_action(alg, z))
        witness = equivariance_witness(dom_prod.obj, a, g)
        if witness is not None:
            raise NotEquivariant("map does not commute with the actions", witness)
        g_map = EquivariantMap(dom_prod.obj, a, g)
    dom_prod = action_product(P, trivial_action(alg, _z_of(g_map, P, group)))
    assert dom_prod.obj == g_map.dom, "map must come from the product with a trivial factor"
    z_size = _z_of(g_map, P, group).size
    table = [0] * z_size
    seen = [set() for _ in range(z_size)]
    for (p, zv) in dom_prod.pairs:
        z = zv if group else zv % z_size
        cls = t.class_of(p, g_map.fn.table[dom_prod.index(p, zv)])
        seen[z].add(cls)
    for z in range(z_size):
        assert len(seen[z]) == 1, "factorisation through the quotient is not constant"
        table[z] = seen[z].pop()
    return FinFn(FinSet(z_size), t.carrier, tuple(table))


def _z_size_from(n: int, P: ActionObject, group: bool) -> FinSet:
    # the product with a trivial factor has carrier |P| * |Z| in both the
    # plain and the anchored case (each carrier point pairs with each
    # trivial point at its own anchor)
    total = P.carrier.size
    return FinSet(n // total) if total else FinSet(0)


def _z_of(g_map: EquivariantMap, P: ActionObject, group: bool) -> FinSet:
    return _z_size_from(g_map.fn.dom.size, P, group)


# The bundle -> adjunction direction ----------------------------------------

def bundle_to_adjunction(w: TorsorWitness) -> AdjunctionPresentation:
    """The adjunction induced by a torsor: the left adjoint pairs the
    carrier with a slice fibrewise, the right adjoint is the tensor with
    its induced projection, the counit is fibrewise evaluation."""
    b = w.bundle
    alg = b.action.algebra
    group = isinstance(alg, FinGroup)
    X = b.base
    dom = SliceCategory(X)
    cod = ActionCategory(alg)
    P = b.action

    def left_data(o: SliceObject):
        pb = pullback(b.proj, o.proj)
        act = []
        for g in range(alg.order):
            row = []
            for (p, wv) in pb.pairs:
                v = P.act[g][p]
                row.append(None if v is None else pb.index(v, wv))
            act.append(tuple(row))
        if group:
            obj = ActionObject(alg, pb.carrier, tuple(act))
        else:
            anchor = FinFn(pb.carrier, alg.objects,
                           tuple(P.anchor.table[p] for (p, _) in pb.pairs))
            obj = ActionObject(alg, pb.carrier, tuple(act), anchor)
        return obj, pb

    left_data = _memo(left_data)

    def right_data(a: ActionObject):
        t = tensor(w, a)
        proj_table = tuple(b.proj.table[t.rep_pair(k)[0]] for k in range(t.carrier.size))
        return SliceObject(t.carrier, X, FinFn(t.carrier, X, proj_table)), t

    right_data = _memo(right_data)

    def left_obj(o):
        return left_data(o)[0]

    def left_mor(m: Mor):
        lo, pbo = left_data(m.dom)
        lc, pbc = left_data(m.cod)
        table = tuple(pbc.index(p, m.fn.table[wv]) for (p, wv) in pbo.pairs)
        return Mor(lo, lc, FinFn(lo.carrier, lc.carrier, table))

    def right_obj(a):
        return right_data(a)[0]

    def right_mor(n: Mor):
        roA, tA = right_data(n.dom)
        roB, tB = right_data(n.cod)
        table = []
        for k in range(tA.carrier.size):
            p, av = tA.rep_pair(k)
            table.append(tB.class_of(p, n.fn.table[av]))
        return Mor(roA, roB, FinFn(roA.total, roB.total, tuple(table)))

    def unit_at(o: SliceObject):
        lo, pbo = left_data(o)
        ro, t = right_data(lo)
        table = []
        for wv in range(o.total.size):
            p = w.reps[o.proj.table[wv]]
            table.append(t.class_of(p, pbo.index(p, wv)))
        return Mor(o, ro, FinFn(o.total, ro.total, tuple(table)))

    def counit_at(a: ActionObject):
        ro, t = right_data(a)
        lo, pbo = left_data(ro)
        table = []
        for (pprime, k) in pbo.pairs:
            p0, a0 = t.rep_pair(k)
            table.append(a.apply(w.psi(pprime, p0), a0))
        return Mor(lo, a, FinFn(lo.carrier, a.carrier, tuple(table)))

    def over_iso_at(o: SliceObject):
        lo, pbo = left_data(o)
        orb = sigma(lo)
        table = tuple(pbo.pairs[orb.reps[k]][1] for k in range(orb.quotient.size))
        return FinFn(orb.quotient, o.total, table)

    pres = AdjunctionPresentation(
        "bundle(|G|=%d, |X|=%d, |P|=%d)" % (alg.order, X.size, P.carrier.size),
        dom, cod, left_obj, left_mor, right_obj, right_mor, unit_at, counit_at,
        over_iso_at)
    pres.witness = w
    pres.left_data = left_data
    pres.right_data = right_data
    return pres


# Stock presentations --------------------------------------------------------

def sigma_presentation(alg) -> AdjunctionPresentation:
    """Orbit quotient left adjoint to the trivial-action functor."""
    dom = ActionCategory(alg)
    cod = SliceCategory(TERMINAL)
    group = isinstance(alg, FinGroup)

    def as_slice(s: FinSet) -> SliceObject:
        return SliceObject(s, TERMINAL, FinFn.constant(s, TERMINAL, 0))

    def left_obj(a):
        return as_slice(sigma(a).quotient)

    def left_mor(m: Mor):
        return Mor(left_obj(m.dom), left_obj(m.cod), sigma_mor(m.dom, m.cod, m.fn))

    def right_obj(v: SliceObject):
        return trivial_action(alg, v.total)

    def right_mor(m: Mor):
        rd, rc = right_obj(m.dom), right_obj(m.cod)
        if group:
            fn = FinFn(rd.carrier, rc.carrier, m.fn.table)
        else:
            n_to = m.cod.total.size
            table = tuple((k // m.dom.total.size) * n_to + m.fn.table[k % m.dom.total.size]
                          for k in range(rd.carrier.size))
            fn = FinFn(rd.carrier, rc.carrier, table)
        return Mor(rd, rc, fn)

    def unit_at(a: ActionObject):
        orb = sigma(a)
        rla = right_obj(left_obj(a))
        if group:
            fn = FinFn(a.carrier, rla.carrier, orb.q.table)
        else:
            table = tuple(a.anchor.table[p] * orb.quotient.size + orb.q.table[p]
                          for p in range(a.carrier.size))
            fn = FinFn(a.carrier, rla.carrier, table)
        return Mor(a, rla, fn)

    def counit_at(v: SliceObject):
        lrv = left_obj(right_obj(v))
        orb = sigma(right_obj(v))
        if group:
            table = orb.reps
        else:
            table = tuple(r % v.total.size for r in orb.reps)
        return Mor(lrv, v, FinFn(lrv.total, v.total, table))

    return AdjunctionPresentation("sigma(|alg|=%d)" % alg.order, dom, cod,
                                  left_obj, left_mor, right_obj, right_mor,
                                  unit_at, counit_at)


def fixedpoints_presentation(g: FinGroup) -> AdjunctionPresentation:
    """The trivial-action functor left adjoint to fixed points.  It is
    over the base but fails Frobenius reciprocity for nontrivial groups,
    so it is the stock negative control."""
    dom = SliceCategory(TERMINAL)
    cod = ActionCategory(g)

    def fixed(a: ActionObject):
        pts = tuple(p for p in range(a.carrier.size)
                    if all(a.act[h][p] == p for h in range(g.order)))
        return pts

    fixed = _memo(fixed)

    def left_obj(v: SliceObject):
        return trivial_action(g, v.total)

    def left_mor(m: Mor):
        return Mor(left_obj(m.dom), left_obj(m.cod),
                   FinFn(m.dom.total, m.cod.total, m.fn.table))

    def right_obj(a: ActionObject):
        pts = fixed(a)
        s = FinSet(len(pts))
        return SliceObject(s, TERMINAL, FinFn.constant(s, TERMINAL, 0))

    def right_mor(n: Mor):
        ptsA, ptsB = fixed(n.dom), fixed(n.cod)
        indexB = {p: i for i, p in enumerate(ptsB)}
        table = tuple(indexB[n.fn.table[p]] for p in ptsA)
        return Mor(right_obj(n.dom), right_obj(n.cod),
                   FinFn(FinSet(len(ptsA)), FinSet(len(ptsB)), table))

    def unit_at(v: SliceObject):
        la = left_obj(v)
        pts = fixed(la)
        index = {p: i for i, p in enumerate(pts)}
        rla = right_obj(la)
        return Mor(v, rla, FinFn(v.total, rla.total,
                                 tuple(index[z] for z in range(v.total.size))))

    def counit_at(a: ActionObject):
        pts = fixed(a)
        lra = left_obj(right_obj(a))
        return Mor(lra, a, FinFn(lra.carrier, a.carrier, pts))

    def over_iso_at(v: SliceObject):
        orb = sigma(left_obj(v))
        return FinFn(orb.quotient, v.total, orb.reps)

    return AdjunctionPresentation("trivial-dashv-fixed(|G|=%d)" % g.order,
                                  dom, cod, left_obj, left_mor, right_obj,
                                  right_mor, unit_at, counit_at, over_iso_at)


def pullback_presentation(f: FinFn) -> AdjunctionPresentation:
    """Base change along a map of finite sets, as a presentation."""
    from .finset import pullback_adjunction

    adj = pullback_adjunction(f)
    dom = SliceCategory(f.dom)
    cod = SliceCategory(f.cod)

    star = _memo(lambda s: adj.star(s))

    def left_obj(s):
        return adj.sigma(s)

    def left_mor(m: Mor):
        return Mor(left_obj(m.dom), left_obj(m.cod), m.fn)

    def right_obj(s):
        return star(s)[0]

    def right_mor(m: Mor):
        so, pbo = star(m.dom)
        sc, pbc = star(m.cod)
        table = tuple(pbc.index(x, m.fn.table[v]) for (x, v) in pbo.pairs)
        return Mor(so, sc, FinFn(so.total, sc.total, table))

    def unit_at(s):
        fn = adj.unit_at(s)
        return Mor(s, right_obj(left_obj(s)), fn)

    def counit_at(s):
        fn = adj.counit_at(s)
        return Mor(left_obj(right_obj(s)), s, fn)

    return AdjunctionPresentation("basechange(%s)" % (f.table,), dom, cod,
                                  left_obj, left_mor, right_obj, right_mor,
                                  unit_at, counit_at)


def compose_presentations(outer: AdjunctionPresentation,
                          inner: AdjunctionPresentation,
                          name: str | None = None) -> AdjunctionPresentation:
    assert inner.cod == outer.dom, "presentations do not compose"
    dom, cod = inner.dom, outer.cod

    def unit_at(o):
        lo = inner.left_obj(o)
        return dom.compose(inner.right_mor(outer.unit_at(lo)), inner.unit_at(o))

    def counit_at(a):
        ra = outer.right_obj(a)
        return cod.compose(outer.counit_at(a), outer.left_mor(inner.counit_at(ra)))

    return AdjunctionPresentation(
        name or "%s;%s" % (inner.name, outer.name), dom, cod,
        lambda o: outer.left_obj(inner.left_obj(o)),
        lambda m: outer.left_mor(inner.left_mor(m)),
        lambda a: inner.right_obj(outer.right_obj(a)),
        lambda m: inner.right_mor(outer.right_mor(m)),
        unit_at, counit_at)


def corrupt_counit(pres: AdjunctionPresentation, style: int) -> AdjunctionPresentation:
    """A deliberately broken copy of a presentation: the counit components
    are post-composed with a collapsing (non-injective) map whenever the
    target carrier has at least two points, so reciprocity genuinely fails.
    Used as a negative control."""

    def collapse(n: int) -> tuple[int, ...]:
        if n < 2:
            return tuple(range(n))
        hit = 1 + (style % (n - 1))
        return tuple(0 if i == hit else i for i in range(n))

    def counit_at(a):
        m = pres.counit_at(a)
        fold = collapse(m.fn.cod.size)
        return Mor(m.dom, m.cod,
                   FinFn(m.fn.dom, m.fn.cod, tuple(fold[v] for v in m.fn.table)))

    return AdjunctionPresentation(
        "%s!corrupt%d" % (pres.name, style), pres.dom, pres.cod,
        pres.left_obj, pres.left_mor, pres.right_obj, pres.right_mor,
        pres.unit_at, counit_at, pres.over_iso_at)


# Frobenius checks -----------------------------------------------------------

def frobenius_canonical_map(pres: AdjunctionPresentation, a, wobj) -> Mor:
    """The comparison map from the left adjoint applied to a product with
    a right-adjoint value, into the plain product."""
    ra = pres.right_obj(a)
    prod_d = pres.dom.product(ra, wobj)
    lp1 = pres.left_mor(prod_d.p1)
    lp2 = pres.left_mor(prod_d.p2)
    left_leg = pres.cod.compose(pres.counit_at(a), lp1)
    prod_c = pres.cod.product(a, pres.left_obj(wobj))
    return prod_c.pair(left_leg, lp2)


def _obj_desc(cat, o) -> str:
    if isinstance(o, SliceObject):
        return "slice(total=%d,proj=%s)" % (o.total.size, list(o.proj.table))
    if isinstance(o, ActionObject):
        return "action(carrier=%d)" % o.carrier.size
    if isinstance(o, SlicedObj):
        return "%s/%s" % (_obj_desc(None, o.obj), list(o.arrow.fn.table))
    return repr(o)


def check_frobenius(pres: AdjunctionPresentation, cod_objs, dom_objs,
                    max_pairs: int = 20000, max_witnesses: int = 3) -> dict:
    """Assert bijectivity of the canonical map on every family pair.  A
    pair whose comparison map cannot even be assembled (a corrupted
    presentation) counts as a failure for that pair."""
    cod_objs = list(cod_objs)
    dom_objs = list(dom_objs)
    if len(cod_objs) * len(dom_objs) > max_pairs:
        raise FamilyTooLarge("frobenius family too large",
                             len(cod_objs) * len(dom_objs))
    failures = []
    checked = 0
    for a in cod_objs:
        for wobj in dom_objs:
            checked += 1
            try:
                m = frobenius_canonical_map(pres, a, wobj)
                ok = pres.cod.is_iso(m)
            except (AssertionError, ValueError, KeyError):
                ok = False
            if not ok and len(failures) < max_witnesses:
                failures.append({"cod_obj": _obj_desc(pres.cod, a),
                                 "dom_obj": _obj_desc(pres.dom, wobj)})
    return {"check": "frobenius", "presentation": pres.name,
            "family": {"cod_objects": len(cod_objs), "dom_objects": len(dom_objs)},
            "pairs": checked, "passed": not failures, "witnesses": failures}


def slice_adjunction(pres: AdjunctionPresentation, b) -> AdjunctionPresentation:
    """The sliced form of a presentation over an object of its codomain."""
    rb = pres.right_obj(b)
    dom2 = SliceOverCategory(pres.dom, rb)
    cod2 = SliceOverCategory(pres.cod, b)

    def left_obj(o: SlicedObj):
        lm = pres.left_mor(o.arrow)
        arrow = pres.cod.compose(pres.counit_at(b), lm)
        return SlicedObj(pres.left_obj(o.obj), arrow)

    def left_mor(m: Mor):
        inner = pres.left_mor(Mor(m.dom.obj, m.cod.obj, m.fn))
        return Mor(left_obj(m.dom), left_obj(m.cod), inner.fn)

    def right_obj(o: SlicedObj):
        return SlicedObj(pres.right_obj(o.obj), pres.right_mor(o.arrow))

    def right_mor(m: Mor):
        inner = pres.right_mor(Mor(m.dom.obj, m.cod.obj, m.fn))
        return Mor(right_obj(m.dom), right_obj(m.cod), inner.fn)

    def unit_at(o: SlicedObj):
        u = pres.unit_at(o.obj)
        return Mor(o, right_obj(left_obj(o)), u.fn)

    def counit_at(o: SlicedObj):
        e = pres.counit_at(o.obj)
        return Mor(left_obj(right_obj(o)), o, e.fn)

    return AdjunctionPresentation("%s@%s" % (pres.name, _obj_desc(pres.cod, b)),
                                  dom2, cod2, left_obj, left_mor, right_obj,
                                  right_mor, unit_at, counit_at)


def check_stably_frobenius(pres: AdjunctionPresentation, slice_objs,
                           dom_objs, cod_objs, hom_cap: int = 4000,
                           max_pairs: int = 20000) -> dict:
    """Run the reciprocity check on every sliced form of the presentation
    over the supplied objects; families in the sliced categories are all
    structure morphisms from the supplied base families."""
    results = []
    dom_objs = list(dom_objs)
    cod_objs = list(cod_objs)
    for b in slice_objs:
        sliced = slice_adjunction(pres, b)
        dom_fam = list(sliced.dom.objects_over(dom_objs, hom_cap))
        cod_fam = list(sliced.cod.objects_over(cod_objs, hom_cap))
        rep = check_frobenius(sliced, cod_fam, dom_fam, max_pairs=max_pairs)
        rep["slice_at"] = _obj_desc(pres.cod, b)
        results.append(rep)
    return {"check": "stably_frobenius", "presentation": pres.name,
            "slices": len(results),
            "passed": all(r["passed"] for r in results),
            "results": results}


def check_triangles(pres: AdjunctionPresentation, dom_objs, cod_objs,
                    max_witnesses: int = 3) -> dict:
    failures = []
    for o in dom_objs:
        lo = pres.left_obj(o)
        composite = pres.cod.compose(pres.counit_at(lo), pres.left_mor(pres.unit_at(o)))
        if composite.fn != pres.cod.identity(lo).fn:
            if len(failures) < max_witnesses:
                failures.append({"triangle": "left", "at": _obj_desc(pres.dom, o)})
    for a in cod_objs:
        ra = pres.right_obj(a)
        composite = pres.dom.compose(pres.right_mor(pres.counit_at(a)), pres.unit_at(ra))
        if composite.fn != pres.dom.identity(ra).fn:
            if len(failures) < max_witnesses:
                failures.append({"triangle": "right", "at": _obj_desc(pres.cod, a)})
    return {"check": "triangles", "presentation": pres.name,
            "objects": len(list(dom_objs)) + len(list(cod_objs)),
            "passed": not failures, "witnesses": failures}


def check_naturality(pres: AdjunctionPresentation, dom_mors, cod_mors,
                     max_witnesses: int = 3) -> dict:
    """Unit and counit naturality squares on families of morphisms."""
    failures = []
    for m in dom_mors:
        lhs = pres.dom.compose(pres.unit_at(m.cod), m)
        rhs = pres.dom.compose(pres.right_mor(pres.left_mor(m)), pres.unit_at(m.dom))
        if lhs.fn != rhs.fn and len(failures) < max_witnesses:
            failures.append({"square": "unit"})
    for n in cod_mors:
        lhs = pres.cod.compose(n, pres.counit_at(n.dom))
        rhs = pres.cod.compose(pres.counit_at(n.cod), pres.left_mor(pres.right_mor(n)))
        if lhs.fn != rhs.fn and len(failures) < max_witnesses:
            failures.append({"square": "counit"})
    return {"check": "naturality", "presentation": pres.name,
            "passed": not failures, "witnesses": failures}


def _cod_action(lobj):
    return lobj.obj if isinstance(lobj, SlicedObj) else lobj


def check_over_base(pres: AdjunctionPresentation, dom_objs, dom_mors=None,
                    max_witnesses: int = 3) -> dict:
    """Verify the over-base comparison: the orbit quotient of each left
    value maps bijectively and naturally onto the underlying object."""
    if pres.over_iso_at is None:
        raise NotOverBase("presentation carries no over-base comparison")
    failures = []
    dom_objs = list(dom_objs)
    for o in dom_objs:
        lo = _cod_action(pres.left_obj(o))
        comp = pres.over_iso_at(o)
        orb = sigma(lo)
        under = pres.dom.carrier(o)
        if comp.dom != orb.quotient or comp.cod != under or not comp.is_bijection():
            if len(failures) < max_witnesses:
                failures.append({"at": _obj_desc(pres.dom, o), "reason": "not a bijection"})
            continue
        if isinstance(pres.left_obj(o), SlicedObj):
            arrow = pres.left_obj(o).arrow.fn
            x_size = pres.dom.base.size
            for k in range(orb.quotient.size):
                rep = orb.reps[k]
                xval = arrow.table[rep] % x_size if not isinstance(
                    pres.cod.base_cat.algebra, FinGroup) else arrow.table[rep]
                if o.proj.table[comp.table[k]] != xval:
                    if len(failures) < max_witnesses:
                        failures.append({"at": _obj_desc(pres.dom, o),
                                         "reason": "projection mismatch"})
                    break
    if dom_mors is None:
        dom_mors = []
    for m in dom_mors:
        lo = _cod_action(pres.left_obj(m.dom))
        lc = _cod_action(pres.left_obj(m.cod))
        lm = pres.left_mor(m)
        induced = sigma_mor(lo, lc, lm.fn)
        lhs = induced.then(pres.over_iso_at(m.cod))
        rhs = pres.over_iso_at(m.dom).then(m.fn)
        if lhs != rhs and len(failures) < max_witnesses:
            failures.append({"square": "over", "at": _obj_desc(pres.dom, m.dom)})
    return {"check": "over_base", "presentation": pres.name,
            "objects": len(dom_objs), "passed": not failures,
            "witnesses": failures}


# The adjunction -> bundle direction ----------------------------------------

def adjunction_to_bundle(pres: AdjunctionPresentation, dom_objs, cod_objs,
                         dom_mors=None) -> Bundle:
    """Validate a presentation on the family, then extract its bundle:
    the left value at the terminal slice, projected by the orbit quotient
    through the over-base comparison."""
    over = check_over_base(pres, dom_objs, dom_mors)
    if not over["passed"]:
        raise NotOverBase("presentation is not over the base", over["witnesses"])
    frob = check_frobenius(pres, cod_objs, dom_objs)
    if not frob["passed"]:
        raise FrobeniusFail("reciprocity fails on the family", frob["witnesses"])
    term = pres.dom.terminal()
    p_act = pres.left_obj(term)
    assert isinstance(p_act, ActionObject), "codomain must be an action category"
    orb = sigma(p_act)
    proj = orb.q.then(pres.over_iso_at(term))
    return Bundle(p_act, pres.dom.base, proj)


# Slice factorisation --------------------------------------------------------

def factor_to_slice(pres: AdjunctionPresentation) -> AdjunctionPresentation:
    """Refactor a presentation over the base into one landing in the slice
    of the action category over the trivial action on the base."""
    if pres.over_iso_at is None:
        raise NotOverBase("factorisation needs the over-base comparison")
    dom = pres.dom
    assert isinstance(dom, SliceCategory)
    assert isinstance(pres.cod, ActionCategory)
    alg = pres.cod.algebra
    group = isinstance(alg, FinGroup)
    X = dom.base
    triv_x = trivial_action(alg, X)
    cod2 = SliceOverCategory(pres.cod, triv_x)

    def kappa(o: SliceObject) -> Mor:
        lo = pres.left_obj(o)
        orb = sigma(lo)
        comp = pres.over_iso_at(o)
        table = []
        for p in range(lo.carrier.size):
            xval = o.proj.table[comp.table[orb.q.table[p]]]
            if group:
                table.append(xval)
            else:
                table.append(lo.anchor.table[p] * X.size + xval)
        return pres.cod.mor(lo, triv_x, FinFn(lo.carrier, triv_x.carrier, tuple(table)))

    kappa = _memo(kappa)

    def left_obj(o: SliceObject):
        return SlicedObj(pres.left_obj(o), kappa(o))

    def left_mor(m: Mor):
        inner = pres.left_mor(m)
        return Mor(left_obj(m.dom), left_obj(m.cod), inner.fn)

    term = dom.terminal()
    m1 = dom.compose(pres.right_mor(kappa(term)), pres.unit_at(term))

    def right_data(o2: SlicedObj):
        rn = pres.right_mor(o2.arrow)
        return dom.pullback(m1, rn)

    right_data = _memo(right_data)

    def right_obj(o2: SlicedObj):
        return right_data(o2).obj

    def right_mor(m2: Mor):
        pb_a = right_data(m2.dom)
        pb_b = right_data(m2.cod)
        rm = pres.right_mor(Mor(m2.dom.obj, m2.cod.obj, m2.fn))
        leg = dom.compose(rm, pb_a.p2)
        return Mor(right_obj(m2.dom), right_obj(m2.cod),
                   pb_b.mediate(pb_a.p1, leg).fn)

    def unit_at(o: SliceObject):
        pb = right_data(left_obj(o))
        med = pb.mediate(dom.bang(o), pres.unit_at(o))
        return Mor(o, pb.obj, med.fn)

    def counit_at(o2: SlicedObj):
        pb = right_data(o2)
        lp2 = pres.left_mor(pb.p2)
        eps = pres.cod.compose(pres.counit_at(o2.obj), lp2)
        lr = left_obj(pb.obj)
        return cod2.mor(lr, o2, eps.fn)

    def over_iso_at(o: SliceObject):
        return pres.over_iso_at(o)

    return AdjunctionPresentation("factored(%s)" % pres.name, dom, cod2,
                                  left_obj, left_mor, right_obj, right_mor,
                                  unit_at, counit_at, over_iso_at)


def slice_forget_presentation(action_cat: ActionCategory, anchor: ActionObject
                              ) -> AdjunctionPresentation:
    """Forgetting the structure morphism, left adjoint to pairing with the
    anchor object."""
    dom = SliceOverCategory(action_cat, anchor)
    cod = action_cat

    def left_obj(o2: SlicedObj):
        return o2.obj

    def left_mor(m: Mor):
        return Mor(m.dom.obj, m.cod.obj, m.fn)

    prod = _memo(lambda a: action_cat.product(a, anchor))

    def right_obj(a: ActionObject):
        pr = prod(a)
        return SlicedObj(pr.obj, pr.p2)

    def right_mor(n: Mor):
        pr_a, pr_b = prod(n.dom), prod(n.cod)
        leg = action_cat.compose(n, pr_a.p1)
        return Mor(right_obj(n.dom), right_obj(n.cod),
                   pr_b.pair(leg, pr_a.p2).fn)

    def unit_at(o2: SlicedObj):
        pr = prod(o2.obj)
        med = pr.pair(action_cat.identity(o2.obj), o2.arrow)
        return Mor(o2, right_obj(o2.obj), med.fn)

    def counit_at(a: ActionObject):
        pr = prod(a)
        return Mor(left_obj(right_obj(a)), a, pr.p1.fn)

    return AdjunctionPresentation("forget-slice", dom, cod, left_obj, left_mor,
                                  right_obj, right_mor, unit_at, counit_at)


def corollary_slice_criterion(pres: AdjunctionPresentation, dom_objs, cod_objs,
                              stable_slices, hom_cap: int = 4000) -> dict:
    """Compare the single-slice reciprocity criterion (slicing only at the
    trivial action on the base) against the full stable check."""
    assert isinstance(pres.cod, ActionCategory)
    alg = pres.cod.algebra
    x = pres.dom.base
    triv_x = trivial_action(alg, x)
    sliced = slice_adjunction(pres, triv_x)
    dom_fam = list(sliced.dom.objects_over(dom_objs, hom_cap))
    cod_fam = list(sliced.cod.objects_over(cod_objs, hom_cap))
    criterion = check_frobenius(sliced, cod_fam, dom_fam)
    full = check_stably_frobenius(pres, stable_slices, dom_objs, cod_objs, hom_cap)
    return {"check": "corollary_slice_criterion", "presentation": pres.name,
            "criterion_passed": criterion["passed"],
            "stable_passed": full["passed"],
            "agree": criterion["passed"] == full["passed"],
            "passed": criterion["passed"] == full["passed"]}


# Slice/groupoid translation -------------------------------------------------

@dataclass(frozen=True)
class SliceGroupoidTranslation:
    """The identity-on-data translation between fibrewise group actions
    over a base (actions of the bundle-of-groups groupoid) and group
    actions equipped with an invariant map to the base."""

    group: FinGroup
    base: FinSet
    groupoid: FinGroupoid

    def to_anchored(self, a: ActionObject, u: FinFn) -> ActionObject:
        assert isinstance(a.algebra, FinGroup) and a.algebra == self.group
        assert u.dom == a.carrier and u.cod == self.base
        n = self.base.size
        act = []
        for arrow in range(self.groupoid.order):
            gi, xi = arrow // n, arrow % n
            act.append(tuple(a.act[gi][p] if u.table[p] == xi else None
                             for p in range(a.carrier.size)))
        return ActionObject(self.groupoid, a.carrier, tuple(act),
                            FinFn(a.carrier, self.groupoid.objects, u.table))

    def from_anchored(self, ga: ActionObject) -> tuple[ActionObject, FinFn]:
        assert ga.algebra == self.groupoid
        n = self.base.size
        act = []
        for gi in range(self.group.order):
            act.append(tuple(ga.act[gi * n + ga.anchor.table[p]][p]
                             for p in range(ga.carrier.size)))
        plain = ActionObject(self.group, ga.carrier, tuple(act))
        return plain, FinFn(ga.carrier, self.base, ga.anchor.table)


def slice_groupoid_equivalence(g: FinGroup, x: FinSet) -> SliceGroupoidTranslation:
    return SliceGroupoidTranslation(g, x, group_bundle_groupoid(g, x))


# Natural transformations of left adjoints ----------------------------------

def torsor_map_to_transform(pres1, pres2, t: FinFn):
    """The natural transformation of left adjoints induced by a map of
    torsors over the same base (components act on the carrier factor)."""

    def component(o: SliceObject) -> Mor:
        lo1, pb1 = pres1.left_data(o)
        lo2, pb2 = pres2.left_data(o)
        table = tuple(pb2.index(t.table[p], wv) for (p, wv) in pb1.pairs)
        return Mor(lo1, lo2, FinFn(lo1.carrier, lo2.carrier, table))

    return component


def transform_to_torsor_map(pres1, pres2, component) -> FinFn:
    """Evaluate a natural transformation of left adjoints at the terminal
    slice and read off the underlying map of torsor carriers."""
    term = pres1.dom.terminal()
    lo1, pb1 = pres1.left_data(term)
    lo2, pb2 = pres2.left_data(term)
    m = component(term)
    p_carrier1 = pres1.witness.bundle.action.carrier
    p_carrier2 = pres2.witness.bundle.action.carrier
    table = [0] * p_carrier1.size
    for p in range(p_carrier1.size):
        k = pb1.index(p, pres1.witness.bundle.proj.table[p])
        table[p] = pb2.pairs[m.fn.table[k]][0]
    return FinFn(p_carrier1, p_carrier2, tuple(table))
