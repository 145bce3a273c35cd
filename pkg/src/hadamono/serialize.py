"""JSON wire formats for spaces, points, duals, pair sets, objectives and problem files.

Rationals always travel as strings ("p/q") so nothing is rounded.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .dual import DualElement, Term
from .monotone import Pair, PairSet
from .quasilin import BoundVector
from .rational import ValidationError, as_rational
from .spaces import Euclidean, EuclidPoint, Space, SpokePoint, SpokeTree, tree_point, validate_point

SCHEMA = "hadamono/1"


class ProblemError(ValidationError):
    """Malformed problem file; the message starts with the JSON path of the fault."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


# --- encoding -----------------------------------------------------------------


def space_to_json(space: Space) -> dict:
    if isinstance(space, SpokeTree):
        return {"kind": "SpokeTree"}
    return {"kind": "Euclidean", "dim": space.dim}


def point_to_json(p) -> dict:
    if isinstance(p, SpokePoint):
        return {"spoke": p.spoke, "radius": str(p.radius)}
    return {"coords": [str(c) for c in p.coords]}


def dual_to_json(phi: DualElement) -> dict:
    return {
        "terms": [
            {"alpha": str(t.alpha), "t": str(t.t), "tail": point_to_json(t.tail), "head": point_to_json(t.head)}
            for t in phi.terms
        ]
    }


def pair_to_json(p: Pair) -> dict:
    return {"point": point_to_json(p.point), "dual": dual_to_json(p.dual)}


def pairset_to_json(M: PairSet) -> dict:
    return {"space": space_to_json(M.space), "pairs": [pair_to_json(p) for p in M]}


def objective_to_json(f) -> dict:
    from .varfun import Add, Const, Coupling, SqDist

    if isinstance(f, SqDist):
        return {"op": "sqdist", "anchor": point_to_json(f.anchor), "scale": str(f.scale)}
    if isinstance(f, Coupling):
        return {"op": "coupling", "base": point_to_json(f.base), "dual": dual_to_json(f.dual)}
    if isinstance(f, Const):
        return {"op": "const", "value": str(f.value)}
    if isinstance(f, Add):
        out = {"op": "add", "args": [objective_to_json(g) for g in f.args]}
        if f.weights is not None:
            out["weights"] = [str(w) for w in f.weights]
        return out
    raise ValidationError(f"unknown objective {f!r}")


def jsonable(v: Any) -> Any:
    """Best-effort conversion of report payloads to JSON-ready values."""
    from .report import CheckReport
    from .varfun import Add, Const, Coupling, SqDist

    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (SpokePoint, EuclidPoint)):
        return point_to_json(v)
    if isinstance(v, DualElement):
        return dual_to_json(v)
    if isinstance(v, Pair):
        return pair_to_json(v)
    if isinstance(v, PairSet):
        return pairset_to_json(v)
    if isinstance(v, BoundVector):
        return {"tail": point_to_json(v.tail), "head": point_to_json(v.head)}
    if isinstance(v, (SqDist, Coupling, Const, Add)):
        return objective_to_json(v)
    if isinstance(v, CheckReport):
        return v.to_json()
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return repr(v)


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, ensure_ascii=False)


# --- decoding -----------------------------------------------------------------


def _rat(v, where: str) -> Fraction:
    try:
        return as_rational(v)
    except ValidationError as exc:
        raise ProblemError(where, str(exc)) from None


def space_from_json(d, where: str = "space") -> Space:
    if not isinstance(d, dict) or "kind" not in d:
        raise ProblemError(where, "expected an object with a 'kind' field")
    kind = d["kind"]
    if kind in ("SpokeTree", "spoke_tree", "spoke-tree"):
        return SpokeTree()
    if kind in ("Euclidean", "euclidean"):
        try:
            return Euclidean(d.get("dim"))
        except ValidationError as exc:
            raise ProblemError(f"{where}.dim", str(exc)) from None
    raise ProblemError(f"{where}.kind", f"unknown space kind {kind!r}")


class Resolver:
    """Decodes entities for one space, resolving string references to named entities."""

    def __init__(self, space: Space, points=None, duals=None, sets=None, grids=None):
        self.space = space
        self.points = points if points is not None else {}
        self.duals = duals if duals is not None else {}
        self.sets = sets if sets is not None else {}
        self.grids = grids if grids is not None else {}

    def point(self, d, where: str):
        if isinstance(d, str):
            if d not in self.points:
                raise ProblemError(where, f"unknown point {d!r}")
            return self.points[d]
        if not isinstance(d, dict):
            raise ProblemError(where, "expected a point object or a point name")
        try:
            if isinstance(self.space, SpokeTree):
                if "spoke" not in d or "radius" not in d:
                    raise ProblemError(where, "spoke-tree point needs 'spoke' and 'radius'")
                p = tree_point(d["spoke"], _rat(d["radius"], f"{where}.radius"))
            else:
                if "coords" not in d or not isinstance(d["coords"], list):
                    raise ProblemError(where, "Euclidean point needs a 'coords' list")
                p = EuclidPoint(tuple(_rat(c, f"{where}.coords[{i}]") for i, c in enumerate(d["coords"])))
            validate_point(self.space, p)
        except ProblemError:
            raise
        except ValidationError as exc:
            raise ProblemError(where, str(exc)) from None
        return p

    def dual(self, d, where: str) -> DualElement:
        if isinstance(d, str):
            if d not in self.duals:
                raise ProblemError(where, f"unknown dual {d!r}")
            return self.duals[d]
        if not isinstance(d, dict) or not isinstance(d.get("terms"), list):
            raise ProblemError(where, "expected a dual object with a 'terms' list or a dual name")
        terms = []
        for i, t in enumerate(d["terms"]):
            w = f"{where}.terms[{i}]"
            if not isinstance(t, dict):
                raise ProblemError(w, "expected a term object")
            for key in ("tail", "head"):
                if key not in t:
                    raise ProblemError(w, f"missing {key!r}")
            terms.append(
                Term(
                    _rat(t.get("alpha", 1), f"{w}.alpha"),
                    _rat(t.get("t", 1), f"{w}.t"),
                    self.point(t["tail"], f"{w}.tail"),
                    self.point(t["head"], f"{w}.head"),
                )
            )
        return DualElement(tuple(terms))

    def pair(self, d, where: str) -> Pair:
        if not isinstance(d, dict) or "point" not in d:
            raise ProblemError(where, "expected a pair object with 'point' and 'dual'")
        return Pair(self.point(d["point"], f"{where}.point"), self.dual(d.get("dual", {"terms": []}), f"{where}.dual"))

    def pairset(self, d, where: str) -> PairSet:
        if isinstance(d, str):
            if d not in self.sets:
                raise ProblemError(where, f"unknown pair set {d!r}")
            return self.sets[d]
        if isinstance(d, dict):
            if "space" in d and space_from_json(d["space"], f"{where}.space") != self.space:
                raise ProblemError(f"{where}.space", "pair set space differs from the problem space")
            items = d.get("pairs")
        else:
            items = d
        if not isinstance(items, list):
            raise ProblemError(where, "expected a list of pairs")
        return PairSet(self.space, [self.pair(p, f"{where}.pairs[{i}]") for i, p in enumerate(items)])

    def grid(self, d, where: str) -> list:
        if isinstance(d, str):
            if d not in self.grids:
                raise ProblemError(where, f"unknown grid {d!r}")
            return self.grids[d]
        if not isinstance(d, list):
            raise ProblemError(where, "expected a list of points")
        return [self.point(p, f"{where}[{i}]") for i, p in enumerate(d)]

    def objective(self, d, where: str):
        from .varfun import Add, Const, Coupling, SqDist

        if not isinstance(d, dict) or "op" not in d:
            raise ProblemError(where, "expected an objective object with an 'op' field")
        op = d["op"]
        try:
            if op == "sqdist":
                return SqDist(self.point(d.get("anchor"), f"{where}.anchor"), _rat(d.get("scale", 1), f"{where}.scale"))
            if op == "coupling":
                return Coupling(self.point(d.get("base"), f"{where}.base"), self.dual(d.get("dual"), f"{where}.dual"))
            if op == "const":
                return Const(_rat(d.get("value"), f"{where}.value"))
            if op == "add":
                args = d.get("args")
                if not isinstance(args, list):
                    raise ProblemError(f"{where}.args", "expected a list")
                ws = d.get("weights")
                weights = None if ws is None else tuple(_rat(w, f"{where}.weights[{i}]") for i, w in enumerate(ws))
                return Add(tuple(self.objective(a, f"{where}.args[{i}]") for i, a in enumerate(args)), weights)
        except ProblemError:
            raise
        except ValidationError as exc:
            raise ProblemError(where, str(exc)) from None
        raise ProblemError(f"{where}.op", f"unknown objective op {op!r}")


@dataclass
class Problem:
    space: Space
    points: dict = field(default_factory=dict)
    duals: dict = field(default_factory=dict)
    pair_sets: dict = field(default_factory=dict)
    ground_sets: dict = field(default_factory=dict)
    objectives: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)

    @property
    def resolver(self) -> Resolver:
        sets = {**self.pair_sets, **self.ground_sets}
        return Resolver(self.space, self.points, self.duals, sets, self.grids)


_SECTIONS = ("points", "duals", "pair_sets", "ground_sets", "objectives", "grids", "samples")


def load_problem(data) -> Problem:
    """Decode a problem file (already parsed JSON) with path-qualified diagnostics."""
    if not isinstance(data, dict):
        raise ProblemError("$", "problem file must be a JSON object")
    if "space" not in data:
        raise ProblemError("$", "missing 'space'")
    unknown = set(data) - {"space", "schema", *_SECTIONS}
    if unknown:
        raise ProblemError("$", f"unknown top-level keys {sorted(unknown)}")
    prob = Problem(space_from_json(data["space"], "space"))
    names: set[str] = set()
    for sec in _SECTIONS:
        block = data.get(sec, {})
        if not isinstance(block, dict):
            raise ProblemError(sec, "expected an object mapping names to entities")
        for name in block:
            if name in names:
                raise ProblemError(f"{sec}.{name}", "duplicate name")
            names.add(name)
    r = prob.resolver
    for name, d in data.get("points", {}).items():
        prob.points[name] = r.point(d, f"points.{name}")
    for name, d in data.get("duals", {}).items():
        prob.duals[name] = r.dual(d, f"duals.{name}")
    for name, d in data.get("grids", {}).items():
        prob.grids[name] = r.grid(d, f"grids.{name}")
    for name, d in data.get("pair_sets", {}).items():
        prob.pair_sets[name] = r.pairset(d, f"pair_sets.{name}")
    r = prob.resolver
    for name, d in data.get("ground_sets", {}).items():
        prob.ground_sets[name] = r.pairset(d, f"ground_sets.{name}")
    r = prob.resolver
    for name, d in data.get("objectives", {}).items():
        prob.objectives[name] = r.objective(d, f"objectives.{name}")
    for name, d in data.get("samples", {}).items():
        prob.samples[name] = _sample(r, d, f"samples.{name}")
    return prob


def _sample(r: Resolver, d, where: str):
    from .flatness import DEFAULT_LAMBDAS, FlSample

    if not isinstance(d, dict) or "base" not in d:
        raise ProblemError(where, "sample needs a 'base' point")
    lams = tuple(_rat(x, f"{where}.lambdas[{i}]") for i, x in enumerate(d.get("lambdas", DEFAULT_LAMBDAS)))
    base2 = r.point(d["base2"], f"{where}.base2") if "base2" in d else None
    tuples = None
    if "tuples" in d:
        tuples = tuple(
            (r.point(t[0], f"{where}.tuples[{i}][0]"), r.point(t[1], f"{where}.tuples[{i}][1]"), _rat(t[2], f"{where}.tuples[{i}][2]"))
            for i, t in enumerate(d["tuples"])
        )
    try:
        return FlSample(r.point(d["base"], f"{where}.base"), lams, base2, tuples)
    except ValidationError as exc:
        raise ProblemError(where, str(exc)) from None
