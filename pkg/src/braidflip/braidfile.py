"""Braid description files.

A description is YAML (JSON is a subset)::

    name: circling
    comment: strand 1 circles strand 0
    strands:
      - [{kind: linear, t: [0, 1], from: [0, 0], to: [0, 0]}]
      - [{kind: arc, t: [0, 1], center: [0, 0], radius: 0.333, angle: [0, 2pi]}]

Numbers may be written with ``pi`` (``2pi``, ``-pi/2``, ``pi*3/4``).  Errors
carry the line number of the offending node.
"""

from __future__ import annotations

import ast
import json
import math
import operator
import re
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import BraidFormatError, InvalidStrandSystem
from .kinetic import ArcSegment, LinearSegment, StrandSystem, Trajectory


@dataclass(frozen=True)
class BraidDescription:
    name: str
    system: StrandSystem
    comment: str = ""


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_number(text: str) -> float:
    expr = re.sub(r"(\d)\s*pi", r"\1*pi", text.strip())
    tree = ast.parse(expr, mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(text)

    return ev(tree)


def _line(node) -> int:
    return node.start_mark.line + 1


def _number(node) -> float:
    if not isinstance(node, yaml.ScalarNode):
        raise BraidFormatError("expected a number", _line(node))
    try:
        value = _eval_number(node.value)
    except (ValueError, SyntaxError, ZeroDivisionError):
        raise BraidFormatError(f"cannot read {node.value!r} as a number", _line(node)) from None
    if not math.isfinite(value):
        raise BraidFormatError(f"non-finite number {node.value!r}", _line(node))
    return value


def _pair(node, what: str) -> tuple[float, float]:
    if not isinstance(node, yaml.SequenceNode) or len(node.value) != 2:
        raise BraidFormatError(f"{what} must be a list of two numbers", _line(node))
    return (_number(node.value[0]), _number(node.value[1]))


def _mapping(node, what: str) -> dict[str, yaml.Node]:
    if not isinstance(node, yaml.MappingNode):
        raise BraidFormatError(f"{what} must be a mapping", _line(node))
    out = {}
    for key, value in node.value:
        if not isinstance(key, yaml.ScalarNode):
            raise BraidFormatError("mapping keys must be plain strings", _line(key))
        out[key.value] = value
    return out


def _field(fields: dict, name: str, parent) -> yaml.Node:
    if name not in fields:
        raise BraidFormatError(f"missing field {name!r}", _line(parent))
    return fields[name]


def _segment(node):
    fields = _mapping(node, "segment")
    kind_node = _field(fields, "kind", node)
    kind = kind_node.value if isinstance(kind_node, yaml.ScalarNode) else None
    t0, t1 = _pair(_field(fields, "t", node), "t")
    if kind == "linear":
        expected = {"kind", "t", "from", "to"}
        seg = LinearSegment(t0, t1, _pair(_field(fields, "from", node), "from"),
                            _pair(_field(fields, "to", node), "to"))
    elif kind == "arc":
        expected = {"kind", "t", "center", "radius", "angle"}
        radius = _number(_field(fields, "radius", node))
        if radius < 0:
            raise BraidFormatError("radius must be nonnegative", _line(fields["radius"]))
        a0, a1 = _pair(_field(fields, "angle", node), "angle")
        seg = ArcSegment(t0, t1, _pair(_field(fields, "center", node), "center"), radius, a0, a1)
    else:
        raise BraidFormatError(f"segment kind must be 'linear' or 'arc', got {kind!r}", _line(kind_node))
    extra = set(fields) - expected
    if extra:
        raise BraidFormatError(f"unknown segment fields {sorted(extra)}", _line(node))
    return seg


def loads(text: str) -> BraidDescription:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise BraidFormatError(f"syntax error: {exc.problem}", line) from None
    if root is None:
        raise BraidFormatError("empty braid description", 1)
    fields = _mapping(root, "braid description")
    unknown = set(fields) - {"name", "comment", "strands"}
    if unknown:
        raise BraidFormatError(f"unknown top-level fields {sorted(unknown)}", _line(root))
    name = fields["name"].value if "name" in fields else ""
    comment = fields["comment"].value if "comment" in fields else ""
    strands_node = _field(fields, "strands", root)
    if not isinstance(strands_node, yaml.SequenceNode) or not strands_node.value:
        raise BraidFormatError("strands must be a non-empty list", _line(strands_node))

    trajectories = []
    for k, strand in enumerate(strands_node.value):
        if not isinstance(strand, yaml.SequenceNode) or not strand.value:
            raise BraidFormatError(f"strand {k} must be a non-empty list of segments", _line(strand))
        segs = tuple(_segment(s) for s in strand.value)
        try:
            tr = Trajectory(segs)
            StrandSystem((tr,))
        except InvalidStrandSystem as exc:
            raise BraidFormatError(f"strand {k}: {exc}", _line(strand)) from None
        trajectories.append(tr)
    return BraidDescription(str(name), StrandSystem(tuple(trajectories)), str(comment))


def load(path: str | Path) -> BraidDescription:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BraidFormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _segment_dict(seg) -> dict:
    if isinstance(seg, LinearSegment):
        return {"kind": "linear", "t": [seg.t0, seg.t1], "from": list(seg.start), "to": list(seg.end)}
    return {"kind": "arc", "t": [seg.t0, seg.t1], "center": list(seg.center),
            "radius": seg.radius, "angle": [seg.angle0, seg.angle1]}


def to_dict(desc: BraidDescription) -> dict:
    return {
        "name": desc.name,
        "comment": desc.comment,
        "strands": [[_segment_dict(s) for s in tr.segments] for tr in desc.system.strands],
    }


def dumps(desc: BraidDescription) -> str:
    """Canonical serialization (JSON, which the loader also reads)."""
    return json.dumps(to_dict(desc), indent=2) + "\n"
