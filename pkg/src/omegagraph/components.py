"""Exact symbolic components of G - X for finite X.

``delete`` decomposes the infinite graph minus a finite vertex set into

* explicit finite components,
* infinite families (one descriptor standing for "each remaining copy of
  this fan is its own component"), and
* big components: an explicit finite part plus strip tails and whole fan
  families absorbed into one connected piece,

each carrying its exact neighbourhood inside X.  Everything is computed
by instantiating the finitely many periods/copies that X can touch and
running union-find over explicit vertices plus one symbolic node per
strip tail and per fan family; beyond the stabilization bound the
pattern is untouched, so the symbolic parts are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ids import VertexId, core, fanv, pfanv, stripv
from .pattern import PatternGraph, truncate
from . import oracle as _oracle


class NotNestedError(ValueError):
    pass


class UnknownComponentError(KeyError):
    pass


class NotASubsetError(ValueError):
    pass


class NotCriticalError(ValueError):
    pass


class YContainedInXError(ValueError):
    pass


# A family handle names one omega-indexed batch of fan copies.
#   ("fan", fan_id)            copies of a core fan
#   ("pfan", strip_id, t)      copies of a strip's periodic fan at period t
Handle = tuple


def handle_sort_key(h: Handle):
    return (h[0], h[1], h[2] if len(h) > 2 else -1)


@dataclass(frozen=True)
class TailSeg:
    strip: str
    start: int  # all strip material from this period onward


@dataclass(frozen=True)
class ComponentDescriptor:
    kind: str  # "finite" | "big" | "family"
    vertices: frozenset  # explicit part
    tails: tuple[TailSeg, ...]
    families: tuple[tuple[Handle, frozenset], ...]  # (handle, excluded copies)
    neighborhood: frozenset

    def key(self):
        return (
            self.kind,
            tuple(sorted(v.sort_key() for v in self.vertices)),
            tuple((t.strip, t.start) for t in self.tails),
            tuple((h, tuple(sorted(e))) for h, e in self.families),
        )

    def sort_key(self):
        if self.vertices:
            return (0,) + min(v.sort_key() for v in self.vertices), self.key()
        if self.tails:
            t = self.tails[0]
            return (1, t.strip, t.start), self.key()
        h, _ = self.families[0]
        return (2,) + tuple(handle_sort_key(h)), self.key()

    def is_infinite_family(self) -> bool:
        return self.kind == "family"

    def handle(self) -> Handle:
        assert self.kind == "family"
        return self.families[0][0]

    def excluded(self) -> frozenset:
        assert self.kind == "family"
        return self.families[0][1]


def copy_vertices(g: PatternGraph, handle: Handle, k: int) -> frozenset:
    if handle[0] == "fan":
        f = g.fan(handle[1])
        return frozenset(fanv(f.id, k, l) for l in f.locals)
    s = g.strip(handle[1])
    return frozenset(pfanv(s.id, handle[2], k, l) for l in s.periodic_fan.locals)


def handle_attach_vertices(g: PatternGraph, handle: Handle) -> frozenset:
    if handle[0] == "fan":
        return frozenset(core(c) for c in set(g.fan(handle[1]).attach))
    s = g.strip(handle[1])
    return frozenset(stripv(s.id, handle[2], p) for p in set(s.periodic_fan.attach))


def is_critical(g: PatternGraph, Y) -> bool:
    """Exact decision: Y is critical iff it matches a fan declaration.

    In this graph class the only infinite same-neighbourhood component
    families are fan copy batches, so the critical sets are exactly the
    attachment sets of core fans and the per-period attachment sets of
    periodic fans.
    """
    Y = frozenset(Y)
    for v in Y:
        g.check_vertex(v)
    for f in g.fans:
        if Y == frozenset(core(c) for c in set(f.attach)):
            return True
    if not Y:
        return any(not f.attach for f in g.fans)
    sample = next(iter(Y))
    if sample.kind != "strip":
        return False
    if any(v.kind != "strip" or v.owner != sample.owner or v.t != sample.t for v in Y):
        return False
    s = g.strip(sample.owner)
    if not s.periodic_fan:
        return False
    return {v.local for v in Y} == set(s.periodic_fan.attach)


@dataclass(frozen=True)
class CXFamily:
    """The symbolic set C_X(Y): components of G - X with N(C) = Y."""

    Y: frozenset
    explicit: tuple[ComponentDescriptor, ...]
    families: tuple[ComponentDescriptor, ...]

    def is_infinite(self) -> bool:
        return bool(self.families)

    def is_empty(self) -> bool:
        return not self.explicit and not self.families


class ComponentSystem:
    """Components of G - X with derived caches, immutable after build."""

    def __init__(self, g: PatternGraph, X):
        self.g = g
        self.X = frozenset(X)
        for v in self.X:
            g.check_vertex(v)
        self._build()

    # -- construction -----------------------------------------------------

    def _build(self):
        g, X = self.g, self.X
        # horizon per strip: X touches only periods below it, minus one
        self.T: dict[str, int] = {}
        for s in g.strips:
            mentioned = [v.t for v in X if v.kind in ("strip", "pfan") and v.owner == s.id]
            mentioned += [t for _, t, _ in s.attachments]
            self.T[s.id] = max(mentioned) + 2 if mentioned else 0
        # copies of each family meeting X get instantiated explicitly
        self.excl: dict[Handle, frozenset] = {}
        for f in g.fans:
            self.excl[("fan", f.id)] = frozenset(v.k for v in X if v.kind == "fan" and v.owner == f.id)
        for s in g.strips:
            if s.periodic_fan:
                for t in range(self.T[s.id]):
                    self.excl[("pfan", s.id, t)] = frozenset(
                        v.k for v in X if v.kind == "pfan" and v.owner == s.id and v.t == t
                    )

        explicit: list[VertexId] = [core(c) for c in g.core_vertices]
        for s in g.strips:
            for t in range(self.T[s.id]):
                explicit.extend(stripv(s.id, t, l) for l in s.locals)
        for handle, excl in self.excl.items():
            for k in sorted(excl):
                explicit.extend(copy_vertices(g, handle, k))
        alive = [v for v in explicit if v not in X]
        nodes = [("v", v) for v in alive]
        nodes += [("tail", s.id) for s in g.strips]
        nodes += [("fam",) + h for h in self.excl]

        uf = _oracle.UnionFind(nodes)
        nmarks: dict[tuple, set] = {n: set() for n in nodes}

        def wire(a, b):
            # a, b are node keys; vertex nodes may reference deleted vertices
            a_del = a[0] == "v" and a[1] in X
            b_del = b[0] == "v" and b[1] in X
            if a_del and b_del:
                return
            if a_del:
                nmarks[b].add(a[1])
            elif b_del:
                nmarks[a].add(b[1])
            else:
                uf.union(a, b)

        def vk(v):
            return ("v", v)

        for a, b in g.core_edges:
            wire(vk(core(a)), vk(core(b)))
        for s in g.strips:
            Ts = self.T[s.id]
            for t in range(Ts):
                for a, b in s.internal_edges:
                    wire(vk(stripv(s.id, t, a)), vk(stripv(s.id, t, b)))
                for a, b in s.step_edges:
                    if t + 1 < Ts:
                        wire(vk(stripv(s.id, t, a)), vk(stripv(s.id, t + 1, b)))
                    else:
                        wire(vk(stripv(s.id, t, a)), ("tail", s.id))
            for c, t, l in s.attachments:
                wire(vk(core(c)), vk(stripv(s.id, t, l)))
        for d, sid in g.dominations:
            s = g.strip(sid)
            tgt = s.domination_target()
            for t in range(self.T[sid]):
                wire(vk(core(d)), vk(stripv(sid, t, tgt)))
            wire(vk(core(d)), ("tail", sid))
        for handle, excl in self.excl.items():
            fan = g.fan(handle[1]) if handle[0] == "fan" else g.strip(handle[1]).periodic_fan
            anchors = sorted(handle_attach_vertices(g, handle), key=VertexId.sort_key)
            for av in anchors:
                wire(("fam",) + handle, vk(av))
            for k in sorted(excl):
                for a, b in fan.edges:
                    if handle[0] == "fan":
                        wire(vk(fanv(fan.id, k, a)), vk(fanv(fan.id, k, b)))
                    else:
                        wire(vk(pfanv(handle[1], handle[2], k, a)), vk(pfanv(handle[1], handle[2], k, b)))
                for l, c in fan.attach_edges:
                    if handle[0] == "fan":
                        wire(vk(fanv(fan.id, k, l)), vk(core(c)))
                    else:
                        wire(vk(pfanv(handle[1], handle[2], k, l)), vk(stripv(handle[1], handle[2], c)))

        # gather classes
        classes: dict[tuple, dict] = {}
        for n in nodes:
            root = uf.find(n)
            cls = classes.setdefault(root, {"verts": set(), "tails": [], "fams": [], "N": set()})
            if n[0] == "v":
                cls["verts"].add(n[1])
            elif n[0] == "tail":
                cls["tails"].append(n[1])
            else:
                cls["fams"].append(tuple(n[1:]))
            cls["N"] |= nmarks[n]

        self._node_desc: dict[tuple, ComponentDescriptor] = {}
        self._vertex_desc: dict[VertexId, ComponentDescriptor] = {}
        descs: list[ComponentDescriptor] = []
        for root, cls in classes.items():
            members = [n for n in nodes if uf.find(n) == root]
            if not cls["verts"] and not cls["tails"] and len(cls["fams"]) == 1:
                handle = cls["fams"][0]
                desc = ComponentDescriptor(
                    "family",
                    frozenset(),
                    (),
                    ((handle, self.excl[handle]),),
                    frozenset(cls["N"]),
                )
            else:
                verts = set(cls["verts"])
                fams = {h: self.excl[h] for h in cls["fams"]}
                tails = {}
                for sid in cls["tails"]:
                    t0 = self.T[sid]
                    s = self.g.strip(sid)
                    while t0 > 0 and self._period_clean(sid, t0 - 1):
                        for l in s.locals:
                            verts.discard(stripv(sid, t0 - 1, l))
                        fams.pop(("pfan", sid, t0 - 1), None)
                        t0 -= 1
                    tails[sid] = t0
                kind = "big" if tails or fams else "finite"
                desc = ComponentDescriptor(
                    kind,
                    frozenset(verts),
                    tuple(TailSeg(sid, t0) for sid, t0 in sorted(tails.items())),
                    tuple(sorted(((h, e) for h, e in fams.items()), key=lambda he: handle_sort_key(he[0]))),
                    frozenset(cls["N"]),
                )
            descs.append(desc)
            for n in members:
                if n[0] == "v":
                    self._vertex_desc[n[1]] = desc
                else:
                    self._node_desc[n] = desc

        descs.sort(key=ComponentDescriptor.sort_key)
        self.descriptors: tuple = tuple(descs)
        self.explicit_descriptors = tuple(d for d in descs if d.kind != "family")
        self.family_descriptors = tuple(d for d in descs if d.kind == "family")
        self._by_key = {d.key(): d for d in descs}

        by_nbhd: dict[frozenset, dict] = {}
        for d in descs:
            slot = by_nbhd.setdefault(d.neighborhood, {"explicit": [], "families": []})
            slot["families" if d.kind == "family" else "explicit"].append(d)
        self._by_nbhd = by_nbhd
        self._crit = frozenset(N for N, slot in by_nbhd.items() if slot["families"])
        self._cx_minus = tuple(
            d for d in self.explicit_descriptors if d.neighborhood not in self._crit
        )
        excl_tops = [max(e) + 2 for e in self.excl.values() if e]
        self.stabilization_bound = max([1] + list(self.T.values()) + excl_tops)

    def _period_clean(self, sid: str, t: int) -> bool:
        s = self.g.strip(sid)
        if any(stripv(sid, t, l) in self.X for l in s.locals):
            return False
        if s.periodic_fan and self.excl.get(("pfan", sid, t)):
            return False
        return True

    # -- queries -----------------------------------------------------------

    def descriptor(self, key) -> ComponentDescriptor:
        try:
            return self._by_key[key]
        except KeyError:
            raise UnknownComponentError(key) from None

    def tail_descriptor(self, strip_id: str) -> ComponentDescriptor:
        return self._node_desc[("tail", strip_id)]

    def tail_start(self, strip_id: str) -> int:
        d = self.tail_descriptor(strip_id)
        for seg in d.tails:
            if seg.strip == strip_id:
                return seg.start
        raise AssertionError(f"tail of {strip_id} lost")

    def handle_descriptor(self, handle: Handle) -> ComponentDescriptor:
        """The descriptor whose material includes the copies of handle."""
        if handle[0] == "pfan" and handle[2] >= self.T.get(handle[1], 0):
            return self.tail_descriptor(handle[1])
        return self._node_desc[("fam",) + handle]

    def handle_excluded(self, handle: Handle) -> frozenset:
        return self.excl.get(handle, frozenset())

    def locate(self, v: VertexId) -> ComponentDescriptor:
        """Descriptor of the component containing v (v must avoid X)."""
        self.g.check_vertex(v)
        if v in self.X:
            raise UnknownComponentError(f"{v} lies in the deleted set")
        if v in self._vertex_desc:
            return self._vertex_desc[v]
        if v.kind == "strip":
            return self.tail_descriptor(v.owner)
        if v.kind == "fan":
            return self.handle_descriptor(("fan", v.owner))
        if v.kind == "pfan":
            return self.handle_descriptor(("pfan", v.owner, v.t))
        raise UnknownComponentError(v)

    def family(self, Y) -> CXFamily:
        Y = frozenset(Y)
        if not Y <= self.X:
            raise NotASubsetError(f"{sorted(map(str, Y - self.X))} not inside X")
        slot = self._by_nbhd.get(Y, {"explicit": (), "families": ()})
        return CXFamily(Y, tuple(slot["explicit"]), tuple(slot["families"]))

    def crit(self) -> frozenset:
        return self._crit

    def cx_minus(self) -> tuple:
        return self._cx_minus

    def member_count_below(self, desc: ComponentDescriptor, copies: int) -> int:
        assert desc.kind == "family"
        excl = desc.excluded()
        return copies - sum(1 for k in excl if k < copies)


def delete(g: PatternGraph, X) -> ComponentSystem:
    """Exact component decomposition of G - X."""
    return ComponentSystem(g, X)


def family(cs: ComponentSystem, Y) -> CXFamily:
    return cs.family(Y)


def crit_of(cs: ComponentSystem) -> frozenset:
    return cs.crit()


def cx_minus(cs: ComponentSystem) -> tuple:
    return cs.cx_minus()


def _probe_vertex(g: PatternGraph, desc: ComponentDescriptor) -> VertexId:
    if desc.kind == "family":
        handle, excl = desc.families[0]
        k = 0
        while k in excl:
            k += 1
        return min(copy_vertices(g, handle, k), key=VertexId.sort_key)
    if desc.vertices:
        return min(desc.vertices, key=VertexId.sort_key)
    seg = desc.tails[0]
    s = g.strip(seg.strip)
    return stripv(seg.strip, seg.start, min(s.locals))


def bonding_c(cs: ComponentSystem, cs_prime: ComponentSystem, desc: ComponentDescriptor) -> ComponentDescriptor:
    """Map a component of G - X' to the component of G - X including it."""
    if cs.g is not cs_prime.g and cs.g != cs_prime.g:
        raise NotNestedError("component systems over different graphs")
    if not cs.X <= cs_prime.X:
        raise NotNestedError(f"{sorted(map(str, cs.X))} does not nest into {sorted(map(str, cs_prime.X))}")
    if desc.key() not in cs_prime._by_key:
        raise UnknownComponentError(desc.key())
    if cs.X == cs_prime.X:
        return desc
    return cs.locate(_probe_vertex(cs.g, desc))


def unique_component_meeting(cs: ComponentSystem, Y) -> ComponentDescriptor:
    """The unique component of G - X meeting the critical set Y."""
    Y = frozenset(Y)
    if not is_critical(cs.g, Y):
        raise NotCriticalError(f"{sorted(map(str, Y))} is not critical")
    if Y <= cs.X:
        raise YContainedInXError(f"{sorted(map(str, Y))} is contained in X")
    hits = {cs.locate(v).key() for v in Y - cs.X}
    assert len(hits) == 1, "critical set met by more than one component"
    return cs.descriptor(hits.pop())


# ---------------------------------------------------------------------------
# Oracle comparison

def materialize(cs: ComponentSystem, desc: ComponentDescriptor, periods: int, copies: int) -> list[frozenset]:
    """Concrete vertex sets of desc inside the (periods, copies) truncation.

    A family descriptor yields one set per member copy below the bound;
    other descriptors yield a single set.
    """
    g = cs.g
    if desc.kind == "family":
        handle, excl = desc.families[0]
        return [copy_vertices(g, handle, k) for k in range(copies) if k not in excl]
    base = set(desc.vertices)
    for seg in desc.tails:
        s = g.strip(seg.strip)
        for t in range(seg.start, periods):
            base.update(stripv(seg.strip, t, l) for l in s.locals)
            if s.periodic_fan:
                for k in range(copies):
                    base.update(pfanv(seg.strip, t, k, l) for l in s.periodic_fan.locals)
    for handle, excl in desc.families:
        for k in range(copies):
            if k not in excl:
                base.update(copy_vertices(g, handle, k))
    return [frozenset(base)]


def oracle_mismatch(cs: ComponentSystem, periods: int, copies: int):
    """Compare symbolic components against brute force on a truncation.

    Returns None on exact agreement, else a human-readable mismatch.
    Bounds must be at least the recorded stabilization bound.
    """
    if min(periods, copies) < cs.stabilization_bound:
        raise ValueError("truncation bounds below stabilization bound")
    fg = truncate(cs.g, periods, copies)
    got = {c.vertices: c.neighborhood for c in _oracle.components_after_deletion(fg, cs.X)}
    want = {}
    for desc in cs.descriptors:
        for piece in materialize(cs, desc, periods, copies):
            if piece in want:
                return f"overlapping symbolic pieces at {sorted(map(str, piece))[:4]}"
            want[piece] = desc.neighborhood
    if set(want) != set(got):
        only_sym = [sorted(map(str, p))[:4] for p in set(want) - set(got)]
        only_ora = [sorted(map(str, p))[:4] for p in set(got) - set(want)]
        return f"component sets differ; symbolic-only={only_sym[:3]} oracle-only={only_ora[:3]}"
    for piece, nb in want.items():
        if got[piece] != nb:
            return (
                f"neighborhood mismatch on {sorted(map(str, piece))[:4]}: "
                f"symbolic={sorted(map(str, nb))} oracle={sorted(map(str, got[piece]))}"
            )
    return None
