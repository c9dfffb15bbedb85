"""Shared fixtures: the shipped graphs plus a randomized pattern generator."""

from __future__ import annotations

import itertools
import random

import pytest

from omegagraph import fixture_graphs
from omegagraph.ids import VertexId, core, fanv, pfanv, stripv
from omegagraph.pattern import PatternGraph, validate

FIXTURE_NAMES = ("star", "ray", "comb", "domray", "thetafan", "combo")


@pytest.fixture(scope="session")
def fixtures() -> dict[str, PatternGraph]:
    return fixture_graphs.all_fixtures()


def random_pattern(seed: int) -> PatternGraph:
    """A random valid pattern graph; goes through validate on purpose."""
    rng = random.Random(seed)
    fresh = (f"n{i}" for i in itertools.count())

    core_vertices = [next(fresh) for _ in range(rng.randint(0, 3))]
    core_edges = [
        [a, b]
        for a, b in itertools.combinations(core_vertices, 2)
        if rng.random() < 0.4
    ]

    def template(max_verts=2):
        verts = [next(fresh) for _ in range(rng.randint(1, max_verts))]
        edges = [[a, b] for a, b in zip(verts, verts[1:])]
        return verts, edges

    def fan_raw(fid, attach_pool, allow_empty):
        verts, edges = template()
        k = rng.randint(0 if allow_empty else 1, min(2, len(attach_pool))) if attach_pool else 0
        attach = rng.sample(attach_pool, k) if k else []
        attach_edges = [[rng.choice(verts), a] for a in attach]
        return {
            "id": fid,
            "template": {"vertices": verts, "edges": edges},
            "attach": attach,
            "attach_edges": attach_edges,
        }

    strips = []
    for i in range(rng.randint(0, 2)):
        verts, edges = template()
        sraw = {
            "id": f"s{i}",
            "period": {"vertices": verts, "edges": edges},
            "step_edges": [[rng.choice(verts), rng.choice(verts)] for _ in range(rng.randint(1, 2))],
            "attachments": [
                {"core": rng.choice(core_vertices), "period": rng.randint(0, 2), "local": rng.choice(verts)}
                for _ in range(rng.randint(0, 2))
                if core_vertices
            ],
            "dominated_vertex": rng.choice(verts),
        }
        if rng.random() < 0.4:
            sraw["periodic_fan"] = fan_raw(f"pf{i}", verts, allow_empty=False)
        strips.append(sraw)

    fans = [
        fan_raw(f"f{i}", core_vertices, allow_empty=True)
        for i in range(rng.randint(0, 2))
    ]
    dominations = [
        {"core": c, "strip": s["id"]}
        for c in core_vertices
        for s in strips
        if rng.random() < 0.25
    ]
    return validate(
        {
            "core": {"vertices": core_vertices, "edges": core_edges},
            "strips": strips,
            "fans": fans,
            "dominations": dominations,
        }
    )


def vertex_pool(g: PatternGraph, periods: int = 3, copies: int = 3) -> list[VertexId]:
    """Plausible deletion candidates with small coordinates."""
    pool = [core(c) for c in g.core_vertices]
    for s in g.strips:
        for t in range(periods):
            pool.extend(stripv(s.id, t, l) for l in s.locals)
            if s.periodic_fan:
                for k in range(copies):
                    pool.extend(pfanv(s.id, t, k, l) for l in s.periodic_fan.locals)
    for f in g.fans:
        for k in range(copies):
            pool.extend(fanv(f.id, k, l) for l in f.locals)
    return sorted(pool, key=VertexId.sort_key)


def random_deletion(g: PatternGraph, rng: random.Random, max_size: int = 4) -> frozenset:
    pool = vertex_pool(g)
    if not pool:
        return frozenset()
    return frozenset(rng.sample(pool, rng.randint(0, min(max_size, len(pool)))))
