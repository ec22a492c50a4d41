"""Well-formedness checking and routing simulation for composite-structure models."""

import json

from ._core import (
    Model,
    SimError,
    class_interfaces,
    classify_link,
    link_origin,
    parse_dsl,
    parse_json,
    serialize_json,
    synthesize,
    transported_interfaces,
    validate_integrity,
)
from . import _core

__all__ = [
    "Model",
    "SimError",
    "check",
    "class_interfaces",
    "classify_link",
    "link_origin",
    "load",
    "parse_dsl",
    "parse_json",
    "serialize_json",
    "simulate",
    "synthesize",
    "transported_interfaces",
    "validate_integrity",
]


def load(path):
    """Parse a .csm or .csm.json file and prepare it for checking."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    parse = parse_json if str(path).endswith(".json") else parse_dsl
    return _core.prepare(parse(text, str(path)))


def check(model, downgrade=()):
    """Run the rules; returns the report as a dict."""
    return json.loads(_core.check_json(model, list(downgrade)))


def simulate(model, root=None, injections=(), full=False):
    """Route requests through `root`; returns {"events": [...], **summary}."""
    root = root or model.root
    if root is None:
        raise ValueError("no root class given")
    text = _core.simulate_json_lines(model, root, [list(i) for i in injections], full)
    lines = [json.loads(line) for line in text.splitlines()]
    result = dict(lines[-1])
    result["events"] = lines[:-1]
    return result
