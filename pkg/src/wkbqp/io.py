"""JSON helpers shared by the command line and the scripts."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .quiver import QuiverWithPotential
from .surface import IdealTriangulation, fixture
from .wkb.differential import QuadraticDifferential

SCHEMA_VERSION = 1


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_json(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def write_json(obj: Any, out: str | Path | None = None) -> str:
    text = dumps(obj)
    if out is not None:
        Path(out).write_text(text)
    return text


def load_triangulation(ref: str) -> IdealTriangulation:
    """A JSON file, or a fixture name such as ``torus_d2``."""
    p = Path(ref)
    if p.exists():
        data = read_json(p)
        if "triangulation" in data and "triangles" not in data:
            data = data["triangulation"]
        return IdealTriangulation.from_json(data)
    return fixture(ref)


def load_qp(ref: str) -> QuiverWithPotential:
    data = read_json(ref)
    if "qp" in data and "quiver" not in data:
        data = data["qp"]
    return QuiverWithPotential.from_json(data)


def load_differential(ref: str) -> QuadraticDifferential:
    return QuadraticDifferential.from_json(read_json(ref))
