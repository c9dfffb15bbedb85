"""Command-line front end.

Subcommands: analyze, components, critical, classify, limit,
check-tangle, distinguish, export-dot, report.

Spec files are JSON documents with top-level keys "core" (vertices,
edges), "strips", "fans", "dominations"; see the shipped fixtures for
examples.  Vertex tokens follow the grammar

    core:name   strip:s/t/local   fan:f/k/local   pfan:s/t/k/local

and points of the limit space are written ``end:s1`` or
``crit:{core:a,core:b}``.  Exit codes: 0 success, 1 spec/input errors,
2 internal invariant failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from .ids import VertexId, format_vertex, parse_vertex
from .pattern import (
    PatternGraph,
    PatternValidationError,
    UnknownVertexError,
    truncate,
    validate,
)
from . import classify as _classify
from . import components as _components
from . import gamma as _gamma
from . import separations as _separations
from .dot import truncation_dot


class CliError(Exception):
    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# JSON shapes (deterministic: canonical ordering everywhere)

def _tokens(vs) -> list[str]:
    return [format_vertex(v) for v in sorted(vs, key=VertexId.sort_key)]


def _handle_json(h) -> dict:
    if h[0] == "fan":
        return {"kind": "fan", "fan": h[1]}
    return {"kind": "pfan", "strip": h[1], "period": h[2]}


def _desc_json(desc) -> dict:
    return {
        "kind": desc.kind,
        "explicit": _tokens(desc.vertices),
        "tails": [{"strip": t.strip, "from": t.start} for t in desc.tails],
        "families": [
            {"handle": _handle_json(h), "excluded": sorted(e)} for h, e in desc.families
        ],
        "neighborhood": _tokens(desc.neighborhood),
    }


def _rule_json(rule) -> dict:
    return {"base": rule.base, "flips": sorted(rule.flips)}


def _separation_json(sep) -> dict:
    side = sep.side
    return {
        "X": _tokens(sep.cs.X),
        "side": {
            "explicit": [_desc_json(sep.cs.descriptor(k)) for k in sorted(side.explicit_in)],
            "families": [
                {"handle": _handle_json(h), "rule": _rule_json(side.rules[h])}
                for h in sorted(side.rules, key=_components.handle_sort_key)
                if not side.rules[h].is_empty()
            ],
        },
    }


def _point_token(xi) -> str:
    return str(xi)


def _parse_point(g: PatternGraph, token: str):
    if token.startswith("end:"):
        sid = token[4:]
        g.strip(sid)
        return _separations.end_point(sid)
    if token.startswith("crit:{") and token.endswith("}"):
        inner = token[len("crit:{"):-1]
        vs = [parse_vertex(t.strip()) for t in inner.split(",") if t.strip()]
        return _separations.crit_point(g, vs)
    raise CliError(f"bad point token {token!r}; use end:s1 or crit:{{core:a,core:b}}")


def _parse_vertices(g: PatternGraph, csv: str) -> frozenset:
    out = []
    for tok in csv.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            v = parse_vertex(tok)
            g.check_vertex(v)
        except (ValueError, UnknownVertexError):
            raise CliError(f"UnknownVertex({tok!r})") from None
        out.append(v)
    return frozenset(out)


def _parse_family(g: PatternGraph, text: str) -> list[frozenset]:
    """Semicolon-separated brace groups: "{};{strip:s1/0/p}"."""
    out = []
    for grp in text.split(";"):
        grp = grp.strip()
        if not (grp.startswith("{") and grp.endswith("}")):
            raise CliError(f"bad family group {grp!r}; wrap vertex lists in braces")
        out.append(_parse_vertices(g, grp[1:-1]))
    return out


def _load(path: str) -> PatternGraph:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return validate(raw)
    except PatternValidationError as exc:
        lines = "\n".join(str(v) for v in exc.violations)
        raise CliError(f"invalid pattern graph:\n{lines}") from None


# ---------------------------------------------------------------------------
# Report assembly

def _summary_json(g: PatternGraph) -> dict:
    return {
        "core_vertices": list(g.core_vertices),
        "core_edges": [list(e) for e in g.core_edges],
        "strips": [s.id for s in g.strips],
        "fans": [f.id for f in g.fans],
        "periodic_fans": {s.id: s.periodic_fan.id for s in g.strips if s.periodic_fan},
        "dominations": [list(d) for d in g.dominations],
    }


def _classification_json(g: PatternGraph) -> dict:
    c = _classify.trichotomy(g)
    witnesses = []
    for w in c.end_witnesses:
        entry = {"strip": w.strip, "tough": w.tough}
        if w.tough:
            entry["isolating_set"] = _tokens(w.isolating_set)
        else:
            entry["periodic_fan"] = w.periodic_fan
        witnesses.append(entry)
    return {
        "tough": c.tough,
        "end_tough": c.end_tough,
        "trichotomy": c.trichotomy,
        "end_witnesses": witnesses,
    }


def _critical_json(g: PatternGraph, max_size: int, horizon: int) -> dict:
    sets = _classify.enumerate_critical(g, max_size, horizon)
    return {
        "bounds": {"max_size": max_size, "period_horizon": horizon},
        "sets": [_tokens(Y) for Y in sets],
    }


def _default_family(g: PatternGraph, horizon: int) -> list[frozenset]:
    seeds = _classify.enumerate_critical(g, 4, max(horizon, 1))[:2]
    if not seeds:
        if g.core_vertices:
            seeds = [frozenset({parse_vertex(f"core:{min(g.core_vertices)}")})]
        elif g.strips:
            s = g.strips[0]
            seeds = [frozenset({parse_vertex(f"strip:{s.id}/0/{min(s.locals)}")})]
    family = {frozenset()}
    for Y in seeds:
        family.add(frozenset(Y))
    if len(seeds) == 2:
        family.add(frozenset(seeds[0] | seeds[1]))
    return sorted(family, key=lambda X: (len(X), tuple(sorted(v.sort_key() for v in X))))


def _system_json(g: PatternGraph, family) -> dict:
    report = _gamma.check_inverse_system(g, family)
    return {
        "family": [_tokens(X) for X in family],
        "ok": report.ok,
        "checks": [
            {"check": c, "subject": s, "ok": ok, "detail": d}
            for c, s, ok, d in sorted(report.entries)
        ],
    }


def _components_json(g: PatternGraph, X) -> dict:
    cs = _components.delete(g, X)
    return {
        "X": _tokens(X),
        "components": [_desc_json(d) for d in cs.descriptors],
        "crit": [_tokens(Y) for Y in sorted(cs.crit(), key=lambda Y: (len(Y), _tokens(Y)))],
        "cx_minus": [_desc_json(d) for d in cs.cx_minus()],
        "stabilization_bound": cs.stabilization_bound,
    }


def _tangle_json(g: PatternGraph, xi, max_base: int, horizon: int) -> dict:
    seps = _enumerate_seps(g, max_base, horizon)
    orientation = _separations.induced_orientation(xi, seps)
    verdict = _separations.check_tangle(orientation, g)
    out = {
        "point": _point_token(xi),
        "bounds": {"max_base_size": max_base, "period_horizon": horizon},
        "separations": len(seps),
        "ok": verdict.ok,
    }
    if verdict.violation:
        out["consistency_violation"] = [
            _separation_json(o.sep) for o in verdict.violation
        ]
    if verdict.star is not None:
        out["forbidden_star"] = [_separation_json(o.sep) for o in verdict.star]
    return out


def _enumerate_seps(g: PatternGraph, max_base: int, horizon: int):
    pool = [parse_vertex(f"core:{c}") for c in g.core_vertices]
    for s in g.strips:
        pool.extend(parse_vertex(f"strip:{s.id}/{t}/{l}") for t in range(horizon) for l in s.locals)
    pool.sort(key=VertexId.sort_key)
    seps = []
    seen = set()
    for r in range(max_base + 1):
        for combo in itertools.combinations(pool, r):
            cs = _components.delete(g, combo)
            for sep in _separations.enumerate_tame_separations(cs):
                uk = sep.underlying_key()
                if uk not in seen:
                    seen.add(uk)
                    seps.append(sep)
    return seps


def _distinguish_json(g: PatternGraph, xi1, xi2) -> dict:
    sep = _separations.distinguish(g, xi1, xi2)
    o1 = _separations.orient_by_point(xi1, sep)
    return {
        "points": [_point_token(xi1), _point_token(xi2)],
        "separation": _separation_json(sep),
        "first_point_toward_side": o1.toward_side,
    }


def _analysis_report(g: PatternGraph, args, full: bool) -> dict:
    horizon = args.horizon
    family = _default_family(g, horizon)
    report = {
        "seed": args.seed,
        "summary": _summary_json(g),
        "classification": _classification_json(g),
        "critical": _critical_json(g, max_size=4, horizon=horizon),
        "gamma_system": _system_json(g, family),
    }
    if full:
        report["components"] = [_components_json(g, X) for X in family]
        pts = _separations.all_points(g, horizon)
        report["tangles"] = [_tangle_json(g, xi, 1, min(horizon, 2)) for xi in pts]
        report["distinguish"] = [
            _distinguish_json(g, a, b) for a, b in itertools.combinations(pts, 2)
        ]
    return report


# ---------------------------------------------------------------------------
# Output plumbing

def _emit(obj, args) -> None:
    if args.json:
        print(json.dumps(obj, sort_keys=True, indent=2))
        return
    print(_render_text(obj))


def _render_text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key in obj:
            val = obj[key]
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val if val or val in (0, False) else '[]'}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(_render_text(item, indent))
                lines.append(pad + "-")
            else:
                lines.append(f"{pad}- {item}")
        if lines and lines[-1] == pad + "-":
            lines.pop()
        return "\n".join(lines)
    return f"{pad}{obj}"


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_analyze(args) -> int:
    g = _load(args.spec)
    report = _analysis_report(g, args, full=False)
    _emit(report, args)
    return 0 if report["gamma_system"]["ok"] else 2


def _cmd_report(args) -> int:
    g = _load(args.spec)
    report = _analysis_report(g, args, full=True)
    _emit(report, args)
    bad = not report["gamma_system"]["ok"] or any(not t["ok"] for t in report["tangles"])
    return 2 if bad else 0


def _cmd_components(args) -> int:
    g = _load(args.spec)
    X = _parse_vertices(g, args.delete or "")
    _emit(_components_json(g, X), args)
    return 0


def _cmd_critical(args) -> int:
    g = _load(args.spec)
    _emit(_critical_json(g, args.max_size, args.horizon), args)
    return 0


def _cmd_classify(args) -> int:
    g = _load(args.spec)
    _emit(_classification_json(g), args)
    return 0


def _cmd_limit(args) -> int:
    g = _load(args.spec)
    family = _parse_family(g, args.family)
    try:
        pts = _gamma.limit_points(g, family, args.horizon)
    except _gamma.NotDirectedError as exc:
        raise CliError(f"NotDirected: {exc}") from None
    css = {X: _components.delete(g, X) for X in {X for _, th in pts for X in th}}
    out = {
        "family": [_tokens(X) for X in family],
        "horizon": args.horizon,
        "points": [
            {
                "point": _point_token(xi),
                "thread": {
                    "{" + ",".join(_tokens(X)) + "}": _point_json(pt, css[X])
                    for X, pt in sorted(
                        thread.items(), key=lambda it: (len(it[0]), _tokens(it[0]))
                    )
                },
            }
            for xi, thread in pts
        ],
    }
    _emit(out, args)
    return 0


def _desc_brief(desc) -> str:
    bits = []
    if desc.vertices:
        vs = _tokens(desc.vertices)
        bits.append(vs[0] + (f"+{len(vs) - 1}" if len(vs) > 1 else ""))
    bits.extend(f"tail:{t.strip}@{t.start}" for t in desc.tails)
    for h, _ in desc.families:
        bits.append("fam:" + (h[1] if h[0] == "fan" else f"{h[1]}@{h[2]}"))
    return f"{desc.kind}[{' '.join(bits)}]"


def _point_json(pt, cs=None) -> str:
    if pt[0] == "limit":
        return "limit:{" + ",".join(_tokens(pt[1])) + "}"
    if pt[0] == "member":
        h = pt[1]
        tag = f"fan:{h[1]}" if h[0] == "fan" else f"pfan:{h[1]}/{h[2]}"
        return f"member:{tag}/{pt[2]}"
    if cs is not None:
        return "component:" + _desc_brief(cs.descriptor(pt[1]))
    return "component:" + "|".join(map(str, pt[1][1]))[:64]


def _cmd_check_tangle(args) -> int:
    g = _load(args.spec)
    xi = _parse_point(g, args.point)
    if not args.seps.startswith("auto:"):
        raise CliError("only --seps auto:<max base size> is supported")
    max_base = int(args.seps.split(":", 1)[1])
    out = _tangle_json(g, xi, max_base, args.horizon)
    _emit(out, args)
    return 0 if out["ok"] else 2


def _cmd_distinguish(args) -> int:
    g = _load(args.spec)
    xi1 = _parse_point(g, args.a)
    xi2 = _parse_point(g, args.b)
    try:
        _emit(_distinguish_json(g, xi1, xi2), args)
    except _separations.PointsEqualError:
        raise CliError("PointsEqual: the two points coincide") from None
    except _separations.NotFoundWithinHorizonError as exc:
        raise CliError(f"NotFoundWithinHorizon({exc.horizon})", code=2) from None
    return 0


def _cmd_export_dot(args) -> int:
    g = _load(args.spec)
    print(truncation_dot(truncate(g, args.periods, args.copies)), end="")
    return 0


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("spec", help="path to a pattern graph JSON file")
    p.add_argument("--json", action="store_true", help="emit canonical JSON")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
    p.add_argument("--horizon", type=int, default=2, help="period horizon for enumerations")
    p.add_argument("--copies", type=int, default=3, help="fan copy bound for truncations")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="omegagraph",
        description="Analyze finitely presented infinite graphs.",
        epilog=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classification, critical sets, gamma system check")
    _add_common(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("report", help="full analysis report including tangles")
    _add_common(p)
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("components", help="components of G - X")
    _add_common(p)
    p.add_argument("--delete", default="", help="comma-separated vertex tokens")
    p.set_defaults(fn=_cmd_components)

    p = sub.add_parser("critical", help="enumerate critical vertex sets")
    _add_common(p)
    p.add_argument("--max-size", type=int, default=4)
    p.set_defaults(fn=_cmd_critical)

    p = sub.add_parser("classify", help="tough / end-tough trichotomy")
    _add_common(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("limit", help="limit points over a directed family")
    _add_common(p)
    p.add_argument("--family", required=True, help='e.g. "{};{strip:s1/0/p}"')
    p.set_defaults(fn=_cmd_limit)

    p = sub.add_parser("check-tangle", help="verify a point's induced orientation")
    _add_common(p)
    p.add_argument("--point", required=True, help="end:s1 or crit:{core:a}")
    p.add_argument("--seps", default="auto:1", help="auto:<max base size>")
    p.set_defaults(fn=_cmd_check_tangle)

    p = sub.add_parser("distinguish", help="separate two limit points")
    _add_common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(fn=_cmd_distinguish)

    p = sub.add_parser("export-dot", help="DOT of a truncation")
    _add_common(p)
    p.add_argument("--periods", type=int, default=3)
    p.set_defaults(fn=_cmd_export_dot)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except UnknownVertexError as exc:
        print(f"UnknownVertex({exc.vertex})", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
