"""Problem files: JSON schema, loading, serialization, bundled models.

A problem file carries the variables, the box hierarchy with its
constraints, and the named views (cuts).  ``gt`` is accepted as sugar for
``geq_plus`` with an offset of 1 and is normalized at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

import jsonschema

from .constraints import Constraint, EqConst, GeqPlus, NeqConst, NeqVars
from .errors import SchemaError
from .hierarchy import BoxSpec, BoxTree, Cut, build_hierarchy, validate_cut
from .solver import Solver, solver_for
from .store import VariableDecl

_ID_PATTERN = r"^[A-Za-z][A-Za-z0-9_.-]*$"

_BOX_SCHEMA = {
    "type": "object",
    "required": ["code", "label"],
    "additionalProperties": False,
    "properties": {
        "code": {"type": "string", "pattern": _ID_PATTERN},
        "label": {"type": "string"},
        "children": {"type": "array", "items": {"$ref": "#/$defs/box"}},
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "args"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "pattern": _ID_PATTERN},
                    "kind": {
                        "enum": ["neq_vars", "geq_plus", "neq_const", "eq_const", "gt"]
                    },
                    "args": {"type": "array", "minItems": 2, "maxItems": 3},
                },
            },
        },
    },
}

PROBLEM_SCHEMA = {
    "$defs": {"box": _BOX_SCHEMA},
    "type": "object",
    "required": ["name", "variables", "hierarchy", "views"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "variables": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "lower", "upper"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "pattern": _ID_PATTERN},
                    "lower": {"type": "integer"},
                    "upper": {"type": "integer"},
                },
            },
        },
        "hierarchy": {"$ref": "#/$defs/box"},
        "views": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "cut"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "cut": {"type": "array", "minItems": 1, "items": {"type": "string"}},
                },
            },
        },
    },
}


@dataclass
class Problem:
    """A loaded model: variables, hierarchy, constraints and views."""

    name: str
    variables: list[VariableDecl]
    tree: BoxTree
    constraints: dict[str, Constraint] = field(default_factory=dict)
    views: dict[str, Cut] = field(default_factory=dict)

    def fresh_solver(self) -> Solver:
        """A new solver with every problem constraint posted, in order.

        Contradictions hit while posting are left for ``solve`` to report.
        """
        solver, _ = solver_for(self.variables, self.constraints.values())
        return solver


def load_problem(text: str) -> Problem:
    """Parse and validate a problem file."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(PROBLEM_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(raw))
    if error is not None:
        path = "/".join(str(part) for part in error.absolute_path)
        raise SchemaError(error.message, path=path)
    return _build(raw)


def load_problem_file(path: str) -> Problem:
    with open(path, "r", encoding="utf-8") as handle:
        return load_problem(handle.read())


def _build(raw: dict[str, Any]) -> Problem:
    variables: list[VariableDecl] = []
    names: set[str] = set()
    for i, var in enumerate(raw["variables"]):
        if var["name"] in names:
            raise SchemaError(f"duplicate variable {var['name']!r}", path=f"variables/{i}")
        if var["lower"] > var["upper"]:
            raise SchemaError("lower bound exceeds upper bound", path=f"variables/{i}")
        names.add(var["name"])
        variables.append(VariableDecl(var["name"], var["lower"], var["upper"]))
    bounds = {v.name: (v.lower, v.upper) for v in variables}

    seen_ids: set[str] = set()
    seen_codes: set[str] = set()
    spec = _build_box(raw["hierarchy"], "hierarchy", bounds, seen_ids, seen_codes)
    tree, ordered = build_hierarchy(spec)
    constraints = {c.id: c for c in ordered}

    views: dict[str, Cut] = {}
    for i, view in enumerate(raw["views"]):
        if view["name"] in views:
            raise SchemaError(f"duplicate view {view['name']!r}", path=f"views/{i}")
        cut = Cut(name=view["name"], boxes=frozenset(view["cut"]))
        for code in view["cut"]:
            if code not in tree.nodes:
                raise SchemaError(f"unknown box {code!r}", path=f"views/{i}/cut")
        uncovered = validate_cut(tree, cut)
        if uncovered:
            raise SchemaError(
                f"cut does not cover constraints: {', '.join(uncovered)}",
                path=f"views/{i}/cut",
            )
        views[view["name"]] = cut

    return Problem(
        name=raw["name"], variables=variables, tree=tree, constraints=constraints, views=views
    )


def _build_box(
    raw: dict[str, Any],
    path: str,
    bounds: dict[str, tuple[int, int]],
    seen_ids: set[str],
    seen_codes: set[str],
) -> BoxSpec:
    code = raw["code"]
    if code in seen_codes:
        raise SchemaError(f"duplicate box code {code!r}", path=f"{path}/code")
    seen_codes.add(code)
    spec = BoxSpec(code=code, label=raw["label"])
    for i, item in enumerate(raw.get("constraints", [])):
        spec.constraints.append(
            _build_constraint(item, f"{path}/constraints/{i}", bounds, seen_ids)
        )
    for i, child in enumerate(raw.get("children", [])):
        spec.children.append(
            _build_box(child, f"{path}/children/{i}", bounds, seen_ids, seen_codes)
        )
    return spec


def _build_constraint(
    raw: dict[str, Any],
    path: str,
    bounds: dict[str, tuple[int, int]],
    seen_ids: set[str],
) -> Constraint:
    cid, kind, args = raw["id"], raw["kind"], raw["args"]
    if cid in seen_ids:
        raise SchemaError(f"duplicate constraint id {cid!r}", path=f"{path}/id")
    seen_ids.add(cid)

    def var(index: int) -> str:
        name = args[index]
        if not isinstance(name, str) or name not in bounds:
            raise SchemaError(f"unknown variable {name!r}", path=f"{path}/args/{index}")
        return name

    def integer(index: int) -> int:
        value = args[index]
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError(f"expected an integer, got {value!r}", path=f"{path}/args/{index}")
        return value

    def unary_const(x: str, k: int) -> int:
        lo, hi = bounds[x]
        if not lo <= k <= hi:
            raise SchemaError(
                f"constant {k} outside the domain [{lo}..{hi}] of {x!r}", path=f"{path}/args/1"
            )
        return k

    if kind == "neq_vars":
        _expect_arity(args, 2, path)
        return NeqVars(id=cid, x=var(0), y=var(1))
    if kind == "gt":
        _expect_arity(args, 2, path)
        return GeqPlus(id=cid, x=var(0), y=var(1), k=1)
    if kind == "geq_plus":
        _expect_arity(args, 3, path)
        return GeqPlus(id=cid, x=var(0), y=var(1), k=integer(2))
    if kind == "neq_const":
        _expect_arity(args, 2, path)
        x = var(0)
        return NeqConst(id=cid, x=x, k=unary_const(x, integer(1)))
    if kind == "eq_const":
        _expect_arity(args, 2, path)
        x = var(0)
        return EqConst(id=cid, x=x, k=unary_const(x, integer(1)))
    raise SchemaError(f"unknown constraint kind {kind!r}", path=f"{path}/kind")


def _expect_arity(args: list, arity: int, path: str) -> None:
    if len(args) != arity:
        raise SchemaError(f"expected {arity} args, got {len(args)}", path=f"{path}/args")


# --------------------------------------------------------------- serialization


def serialize_problem(problem: Problem) -> str:
    """Render a problem back to its JSON file form (round-trips with load)."""
    return json.dumps(
        {
            "name": problem.name,
            "variables": [
                {"name": v.name, "lower": v.lower, "upper": v.upper}
                for v in problem.variables
            ],
            "hierarchy": _serialize_box(problem, problem.tree.root),
            "views": [
                {"name": view.name, "cut": sorted(view.boxes, key=problem.tree.preorder_index)}
                for view in problem.views.values()
            ],
        },
        indent=2,
    )


def _serialize_box(problem: Problem, code: str) -> dict[str, Any]:
    node = problem.tree.nodes[code]
    box: dict[str, Any] = {"code": node.code, "label": node.label}
    if node.constraint_ids:
        box["constraints"] = [
            _serialize_constraint(problem.constraints[cid]) for cid in node.constraint_ids
        ]
    if node.children:
        box["children"] = [_serialize_box(problem, child) for child in node.children]
    return box


def _serialize_constraint(constraint: Constraint) -> dict[str, Any]:
    if isinstance(constraint, NeqVars):
        return {"id": constraint.id, "kind": "neq_vars", "args": [constraint.x, constraint.y]}
    if isinstance(constraint, GeqPlus):
        return {
            "id": constraint.id,
            "kind": "geq_plus",
            "args": [constraint.x, constraint.y, constraint.k],
        }
    if isinstance(constraint, NeqConst):
        return {"id": constraint.id, "kind": "neq_const", "args": [constraint.x, constraint.k]}
    if isinstance(constraint, EqConst):
        return {"id": constraint.id, "kind": "eq_const", "args": [constraint.x, constraint.k]}
    raise SchemaError(f"constraint {constraint.id!r} has no file form")


# ------------------------------------------------------------------- bundled


def bundled_path(name: str) -> str:
    """Filesystem path of a bundled problem (e.g. ``conference``)."""
    return str(resources.files("explaincp.data").joinpath(f"{name}.json"))


def load_bundled(name: str) -> Problem:
    return load_problem(
        resources.files("explaincp.data").joinpath(f"{name}.json").read_text("utf-8")
    )


def conference_problem() -> Problem:
    """The bundled seminar-scheduling model used throughout the tests."""
    return load_bundled("conference")
