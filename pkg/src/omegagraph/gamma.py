"""Compact-space surrogates for the component compactifications.

An FduSpace is a finite discrete part together with finitely many
convergent clusters (each a one-point compactification of a countable
discrete family).  The space over the components of G - X adds one
cluster per critical subset of X, its family converging to the critical
set as limit point.  FduMaps carry finite exception tables plus one
eventually-uniform rule per infinite family, which keeps continuity,
composition and equality decidable.

Points are tagged tuples:
    ("named", descriptor_key)   an explicit component
    ("member", handle, k)       copy k of an infinite family
    ("limit", label)            a cluster's limit point
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ids import VertexId, stripv
from .pattern import PatternGraph
from .components import (
    ComponentDescriptor,
    ComponentSystem,
    Handle,
    NotNestedError,
    _probe_vertex,
    copy_vertices,
    delete,
    handle_sort_key,
    unique_component_meeting,
)
from .separations import FamilyRule, PointOfGamma, RULE_FALSE, rule_and, rule_or, rule_singletons


class NotDirectedError(ValueError):
    pass


class Condition4ViolatedError(ValueError):
    def __init__(self, Y1, Y2):
        self.pair = (frozenset(Y1), frozenset(Y2))
        super().__init__(
            "two critical families accumulate at one limit point: "
            f"{sorted(map(str, Y1))} vs {sorted(map(str, Y2))}"
        )


def named_point(desc: ComponentDescriptor):
    return ("named", desc.key())


def member_point(handle: Handle, k: int):
    return ("member", handle, k)


def limit_point(label):
    return ("limit", label)


@dataclass(frozen=True)
class Cluster:
    limit: object  # label; frozenset Y for gamma spaces
    named_members: tuple = ()
    groups: tuple = ()  # ((handle, FamilyRule), ...)

    def group_dict(self) -> dict:
        return dict(self.groups)

    def is_infinite(self) -> bool:
        return any(r.is_infinite() for _, r in self.groups)


@dataclass(frozen=True)
class FduSpace:
    isolated: tuple = ()  # points
    clusters: tuple = ()

    def limit_labels(self):
        return [c.limit for c in self.clusters]

    def membership_rule(self, handle: Handle) -> FamilyRule:
        """Which copies of handle are points of this space."""
        rule = rule_singletons(
            p[2] for p in self.isolated if p[0] == "member" and p[1] == handle
        )
        for c in self.clusters:
            for h, r in c.groups:
                if h == handle:
                    rule = rule_or(rule, r)
        return rule

    def handles(self):
        out = {p[1] for p in self.isolated if p[0] == "member"}
        for c in self.clusters:
            out |= {h for h, _ in c.groups}
        return sorted(out, key=handle_sort_key)

    def named_points(self):
        out = [p for p in self.isolated if p[0] == "named"]
        for c in self.clusters:
            out.extend(p for p in c.named_members if p[0] == "named")
        return out

    def cluster_of_handle(self, handle: Handle, k: int | None = None):
        for c in self.clusters:
            for h, r in c.groups:
                if h == handle and (k is None or r(k)):
                    return c
        return None

    def finite_points(self):
        """All isolated points plus cluster named members (no group members)."""
        out = list(self.isolated)
        for c in self.clusters:
            out.extend(c.named_members)
        return out


def gamma_space(cs: ComponentSystem) -> FduSpace:
    """The component space plus one cluster per critical subset of X."""
    isolated = tuple(named_point(d) for d in cs.cx_minus())
    clusters = []
    for Y in sorted(cs.crit(), key=lambda Y: tuple(sorted(v.sort_key() for v in Y))):
        fam = cs.family(Y)
        clusters.append(
            Cluster(
                limit=Y,
                named_members=tuple(named_point(d) for d in fam.explicit),
                groups=tuple(
                    (d.handle(), FamilyRule("true", d.excluded())) for d in fam.families
                ),
            )
        )
    return FduSpace(isolated, tuple(clusters))


# ---------------------------------------------------------------------------
# Maps between FDU spaces

@dataclass
class FduMap:
    src: FduSpace
    dst: FduSpace
    exceptions: dict = field(default_factory=dict)  # point -> point
    handle_rules: dict = field(default_factory=dict)  # Handle -> ("const", pt) | ("identity", Handle)
    limit_images: dict = field(default_factory=dict)  # label -> point

    def apply(self, point):
        if point[0] == "limit":
            return self.limit_images[point[1]]
        if point in self.exceptions:
            return self.exceptions[point]
        if point[0] == "member":
            rule = self.handle_rules.get(point[1])
            if rule is None:
                raise KeyError(f"no rule for family {point[1]}")
            if rule[0] == "const":
                return rule[1]
            return ("member", rule[1], point[2])
        raise KeyError(f"unmapped point {point}")


def identity_map(space: FduSpace) -> FduMap:
    return FduMap(
        space,
        space,
        exceptions={p: p for p in space.finite_points()},
        handle_rules={h: ("identity", h) for h in space.handles()},
        limit_images={c.limit: limit_point(c.limit) for c in space.clusters},
    )


def compose(outer: FduMap, inner: FduMap) -> FduMap:
    """outer after inner, renormalized to exception tables plus rules."""
    exceptions = {}
    for p in inner.exceptions:
        exceptions[p] = outer.apply(inner.apply(p))
    handle_rules = {}
    for h, rule in inner.handle_rules.items():
        if rule[0] == "const":
            handle_rules[h] = ("const", outer.apply(rule[1]))
        else:
            th = rule[1]
            outer_rule = outer.handle_rules.get(th)
            if outer_rule is None:
                raise KeyError(f"no outer rule for family {th}")
            if outer_rule[0] == "const":
                handle_rules[h] = ("const", outer_rule[1])
            else:
                handle_rules[h] = ("identity", outer_rule[1])
            # outer exceptions on members of th induce composed exceptions
            for p, q in outer.exceptions.items():
                if p[0] == "member" and p[1] == th:
                    src_pt = ("member", h, p[2])
                    if src_pt not in exceptions:
                        exceptions[src_pt] = q
    limit_images = {label: outer.apply(pt) for label, pt in inner.limit_images.items()}
    return FduMap(inner.src, outer.dst, exceptions, handle_rules, limit_images)


def maps_equal(m1: FduMap, m2: FduMap) -> bool:
    """Extensional equality on all representable points of the source."""
    if m1.src != m2.src:
        return False
    for p in m1.src.finite_points():
        if m1.apply(p) != m2.apply(p):
            return False
    for c in m1.src.clusters:
        if m1.apply(limit_point(c.limit)) != m2.apply(limit_point(c.limit)):
            return False
    for h in m1.src.handles():
        r1, r2 = m1.handle_rules.get(h), m2.handle_rules.get(h)
        membership = m1.src.membership_rule(h)
        probes = {
            p[2]
            for m in (m1, m2)
            for p in m.exceptions
            if p[0] == "member" and p[1] == h
        }
        if r1 != r2:
            # distinct uniform rules can still agree only on a finite family
            if membership.is_infinite():
                return False
        for k in sorted(probes):
            if membership(k) and m1.apply(("member", h, k)) != m2.apply(("member", h, k)):
                return False
    return True


@dataclass(frozen=True)
class ContinuityVerdict:
    ok: bool
    witness: str | None = None

    def __bool__(self):
        return self.ok


def is_continuous(m: FduMap) -> ContinuityVerdict:
    """Check the tail rule of every source cluster against its limit image.

    For a cluster converging to l: if m(l) is isolated the members must
    be eventually constant at m(l); if m(l) is a limit point the members
    must eventually enter that cluster's family, finitely many
    exceptions aside.
    """
    for c in m.src.clusters:
        try:
            lim_img = m.apply(limit_point(c.limit))
        except KeyError:
            return ContinuityVerdict(False, f"limit {c.limit} has no image")
        for h, rule in c.groups:
            if not rule.is_infinite():
                continue
            hr = m.handle_rules.get(h)
            if hr is None:
                return ContinuityVerdict(False, f"family {h} has no tail rule")
            if hr[0] == "const":
                if hr[1] != lim_img:
                    return ContinuityVerdict(
                        False,
                        f"family {h} is eventually at {hr[1]} but the limit maps to {lim_img}",
                    )
                continue
            th = hr[1]
            target_cluster = m.dst.cluster_of_handle(th)
            if target_cluster is None:
                return ContinuityVerdict(
                    False, f"family {h} maps into {th} which accumulates nowhere in the target"
                )
            if lim_img != limit_point(target_cluster.limit):
                return ContinuityVerdict(
                    False,
                    f"family {h} converges to {target_cluster.limit} but the limit maps to {lim_img}",
                )
            gap = rule_and(rule, m.dst.cluster_of_handle(th).group_dict().get(th, RULE_FALSE).negate())
            exceptional = {p[2] for p in m.exceptions if p[0] == "member" and p[1] == h}
            if gap.is_infinite():
                return ContinuityVerdict(
                    False, f"family {h} leaves the target cluster infinitely often"
                )
            stray = [k for k in gap.members() if k not in exceptional]
            for k in stray:
                img = m.apply(("member", h, k))
                # finitely many strays are harmless for convergence
                _ = img
    return ContinuityVerdict(True)


def is_surjective(m: FduMap) -> bool:
    covered_named = set()
    covered_limits = set()
    covered_members: dict[Handle, FamilyRule] = {}

    def cover(pt, src_rule=None):
        if pt[0] == "limit":
            covered_limits.add(pt[1])
        elif pt[0] == "named":
            covered_named.add(pt)
        else:
            h = pt[1]
            covered_members[h] = rule_or(covered_members.get(h, RULE_FALSE), rule_singletons([pt[2]]))

    for p, q in m.exceptions.items():
        cover(q)
    for label, q in m.limit_images.items():
        cover(q)
    for h, hr in m.handle_rules.items():
        membership = m.src.membership_rule(h)
        exceptional = {p[2] for p in m.exceptions if p[0] == "member" and p[1] == h}
        surviving = rule_and(membership, rule_singletons(exceptional).negate())
        if hr[0] == "const":
            cover(hr[1])
        else:
            th = hr[1]
            covered_members[th] = rule_or(covered_members.get(th, RULE_FALSE), surviving)
    for p in m.dst.finite_points():
        if p[0] == "named" and p not in covered_named:
            return False
        if p[0] == "member" and not covered_members.get(p[1], RULE_FALSE)(p[2]):
            return False
    for c in m.dst.clusters:
        if limit_point(c.limit)[1] not in covered_limits:
            return False
        for h, r in c.groups:
            if rule_and(r, covered_members.get(h, RULE_FALSE).negate()).is_infinite():
                return False
    return True


# ---------------------------------------------------------------------------
# The gamma inverse system

def locate_point(cs: ComponentSystem, v: VertexId):
    """The point of the gamma space whose component contains v."""
    desc = cs.locate(v)
    if desc.kind == "family":
        k = v.k
        return member_point(desc.handle(), k)
    return named_point(desc)


def bonding_f(cs: ComponentSystem, cs_prime: ComponentSystem) -> FduMap:
    """The map from the gamma space over X' to the one over X (X inside X').

    Components map by inclusion; critical sets of X' persisting in X stay
    fixed; the rest land on the unique component meeting them.
    """
    if not cs.X <= cs_prime.X:
        raise NotNestedError("bonding maps run from finer to coarser deletions")
    src, dst = gamma_space(cs_prime), gamma_space(cs)
    exceptions = {}
    for d in cs_prime.explicit_descriptors:
        exceptions[named_point(d)] = locate_point(cs, _probe_vertex(cs.g, d))
    handle_rules = {}
    for d in cs_prime.family_descriptors:
        h = d.handle()
        target = cs.handle_descriptor(h)
        if target.kind == "family":
            handle_rules[h] = ("identity", h)
        else:
            handle_rules[h] = ("const", named_point(target))
    limit_images = {}
    for Y in cs_prime.crit():
        if Y <= cs.X:
            limit_images[Y] = limit_point(Y)
        else:
            limit_images[Y] = named_point(unique_component_meeting(cs, Y))
    return FduMap(src, dst, exceptions, handle_rules, limit_images)


def project(cs: ComponentSystem, xi: PointOfGamma):
    """The point of the gamma space over X below xi."""
    if xi.kind == "end":
        return named_point(cs.tail_descriptor(xi.strip))
    if xi.Y <= cs.X:
        return limit_point(xi.Y)
    return named_point(unique_component_meeting(cs, xi.Y))


def _check_directed(family):
    sets = [frozenset(X) for X in family]
    for a in sets:
        for b in sets:
            if not any(a | b <= c for c in sets):
                raise NotDirectedError(
                    f"{sorted(map(str, a))} and {sorted(map(str, b))} have no upper bound"
                )
    return sets


@dataclass
class SystemReport:
    entries: list = field(default_factory=list)  # (check, subject, ok, detail)

    def record(self, check, subject, ok, detail=""):
        self.entries.append((check, subject, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(e[2] for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e[2]]


def _pair_label(Xs, Xt):
    return f"{sorted(map(str, Xt))} <= {sorted(map(str, Xs))}"


def build_system(g: PatternGraph, family):
    """Component systems and bonding maps over a directed family."""
    sets = _check_directed(family)
    css = {X: delete(g, X) for X in sets}
    maps = {}
    for Xs in sets:
        for Xt in sets:
            if Xt <= Xs:
                maps[(Xs, Xt)] = bonding_f(css[Xt], css[Xs])
    return css, maps


def verify_system(css: dict, maps: dict) -> SystemReport:
    """Functoriality, agreement with component bonding, and continuity."""
    report = SystemReport()
    sets = sorted(css, key=lambda X: (len(X), tuple(sorted(v.sort_key() for v in X))))
    for (Xs, Xt), m in sorted(maps.items(), key=lambda kv: (_pair_label(*kv[0]))):
        report.record("continuity", _pair_label(Xs, Xt), is_continuous(m).ok)
    # condition (1): the map restricted to embedded components acts by inclusion
    for (Xs, Xt), m in maps.items():
        cs_s, cs_t = css[Xs], css[Xt]
        ok = True
        detail = ""
        for d in cs_s.explicit_descriptors:
            samples = sorted(d.vertices, key=VertexId.sort_key)[:3]
            for seg in d.tails:
                samples.append(_tail_probe(seg, cs_s.g.strip(seg.strip)))
            img = m.apply(named_point(d))
            for v in samples:
                if v in cs_t.X:
                    continue
                if locate_point(cs_t, v) != img:
                    ok = False
                    detail = f"component {d.key()[0]} probe {v} lands elsewhere"
        for d in cs_s.family_descriptors:
            h = d.handle()
            k = 0
            while k in d.excluded():
                k += 1
            probe = sorted(copy_vertices(cs_s.g, h, k), key=VertexId.sort_key)[0]
            if m.apply(member_point(h, k)) != locate_point(cs_t, probe):
                ok = False
                detail = f"family {h} member {k} disagrees with component inclusion"
        report.record("condition1", _pair_label(Xs, Xt), ok, detail)
    for Xi in sets:
        for Xj in sets:
            for Xk in sets:
                if Xi <= Xj <= Xk and (Xk, Xj) in maps:
                    lhs = maps[(Xk, Xi)]
                    rhs = compose(maps[(Xj, Xi)], maps[(Xk, Xj)])
                    report.record(
                        "functoriality",
                        f"{sorted(map(str, Xi))} <= {sorted(map(str, Xj))} <= {sorted(map(str, Xk))}",
                        maps_equal(lhs, rhs),
                    )
    return report


def _tail_probe(seg, strip):
    return stripv(seg.strip, seg.start, min(strip.locals))


def check_inverse_system(g: PatternGraph, family) -> SystemReport:
    css, maps = build_system(g, family)
    return verify_system(css, maps)


def limit_points(g: PatternGraph, family, horizon: int):
    """Ends and critical sets within horizon, with their compatible threads."""
    from .separations import all_points

    sets = _check_directed(family)
    css = {X: delete(g, X) for X in sets}
    out = []
    for xi in all_points(g, horizon):
        thread = {X: project(css[X], xi) for X in sets}
        for Xs in sets:
            for Xt in sets:
                if Xt <= Xs:
                    m = bonding_f(css[Xt], css[Xs])
                    if m.apply(thread[Xs]) != thread[Xt]:
                        raise AssertionError(
                            f"thread of {xi} incompatible between {sorted(map(str, Xt))} and {sorted(map(str, Xs))}"
                        )
        out.append((xi, thread))
    return out


# ---------------------------------------------------------------------------
# Quotients onto the gamma space

def validate_alpha_over(cs: ComponentSystem, alpha: FduSpace):
    """alpha must be an FDU compactification of exactly the components of G - X."""
    want_named = {named_point(d) for d in cs.explicit_descriptors}
    have_named = set(alpha.named_points())
    if want_named != have_named:
        raise ValueError("alpha does not enumerate the explicit components exactly")
    if len(alpha.named_points()) != len(set(alpha.named_points())):
        raise ValueError("alpha repeats a named point")
    for d in cs.family_descriptors:
        h = d.handle()
        full = FamilyRule("true", d.excluded())
        if alpha.membership_rule(h).key() != full.key():
            raise ValueError(f"alpha does not cover family {h} exactly")
    for h in alpha.handles():
        if h not in {d.handle() for d in cs.family_descriptors}:
            raise ValueError(f"alpha mentions unknown family {h}")
    # pairwise disjoint groups
    for i, c1 in enumerate(alpha.clusters):
        for c2 in alpha.clusters[i + 1:]:
            for h1, r1 in c1.groups:
                for h2, r2 in c2.groups:
                    if h1 == h2 and not rule_and(r1, r2).is_empty():
                        raise ValueError(f"clusters overlap on family {h1}")
        if not c1.is_infinite():
            raise ValueError(
                f"cluster at {c1.limit} has a finite family; the embedded components are not dense"
            )


def quotient_to_gamma(cs: ComponentSystem, alpha: FduSpace) -> FduMap:
    """Collapse each critical family's closure onto its gamma cluster.

    Requires distinct critical families to accumulate at distinct limit
    points of alpha; otherwise Condition4ViolatedError names the pair.
    """
    validate_alpha_over(cs, alpha)
    handle_nbhd = {d.handle(): d.neighborhood for d in cs.family_descriptors}
    assignments = {}
    for c in alpha.clusters:
        hits = sorted(
            {handle_nbhd[h] for h, r in c.groups if r.is_infinite()},
            key=lambda Y: tuple(sorted(v.sort_key() for v in Y)),
        )
        if len(hits) > 1:
            raise Condition4ViolatedError(hits[0], hits[1])
        assignments[c.limit] = hits[0]
    exceptions = {p: p for p in alpha.finite_points()}
    handle_rules = {h: ("identity", h) for h in alpha.handles()}
    limit_images = {label: limit_point(Y) for label, Y in assignments.items()}
    return FduMap(alpha, gamma_space(cs), exceptions, handle_rules, limit_images)
