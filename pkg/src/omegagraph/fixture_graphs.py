"""Shipped example graphs, loaded from the bundled JSON spec files.

STAR      one core vertex with an omega fan of pendant leaves.
RAY       a bare one-way infinite path.
COMB      a ray carrying an omega leaf fan at every period.
DOMRAY    a ray dominated by one core vertex.
THETAFAN  two core vertices joined by omega disjoint paths of length 2.
COMBO     fan on {a,b} plus a dominated strip that carries a periodic fan.
"""

from __future__ import annotations

import importlib.resources
import json

from .pattern import PatternGraph, validate

_NAMES = ("star", "ray", "comb", "domray", "thetafan", "combo")


def fixture_path(name: str):
    if name not in _NAMES:
        raise KeyError(f"unknown fixture {name!r}; have {_NAMES}")
    return importlib.resources.files(__package__).joinpath("fixtures", f"{name}.json")


def load_fixture(name: str) -> PatternGraph:
    with fixture_path(name).open() as fh:
        return validate(json.load(fh))


def star() -> PatternGraph:
    return load_fixture("star")


def ray() -> PatternGraph:
    return load_fixture("ray")


def comb() -> PatternGraph:
    return load_fixture("comb")


def domray() -> PatternGraph:
    return load_fixture("domray")


def thetafan() -> PatternGraph:
    return load_fixture("thetafan")


def combo() -> PatternGraph:
    return load_fixture("combo")


def all_fixtures() -> dict[str, PatternGraph]:
    return {name: load_fixture(name) for name in _NAMES}
