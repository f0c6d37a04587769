"""Input system description (JSON, schema version 1)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SpecFileError

SCHEMA_VERSION = 1


@dataclass
class TargetSpec:
    kind: str
    vertices: list[list[float]]
    source: str = "vertices"


@dataclass
class SystemSpec:
    A: list[list[float]]
    b: list[float]
    targets: list[TargetSpec] = field(default_factory=list)
    options: dict = field(default_factory=dict)


def halfspace_rays(inequalities, tol: float = 1e-12) -> list[list[float]]:
    """Extreme rays of ``{x in R^2_+ : a1 x1 + a2 x2 >= 0 for each row}``.

    Candidate directions are the orthant axes and the boundary line of each
    inequality; the feasible candidates with smallest and largest polar
    angle span the cone.
    """
    rows = np.asarray(inequalities, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != 3:
        raise SpecFileError("halfspace inequalities must be rows [a1, a2, rhs]")
    if np.any(np.abs(rows[:, 2]) > tol):
        raise SpecFileError("halfspace targets must be cones: every rhs must be 0")
    a = rows[:, :2]
    cands = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    for a1, a2 in a:
        if abs(a1) + abs(a2) <= tol:
            continue
        d = np.array([-a2, a1])
        cands.extend([d, -d])
    feas = []
    for d in cands:
        if np.all(d >= -tol) and np.any(d > tol) and np.all(a @ d >= -tol * np.abs(d).max()):
            d = np.where(d < 0, 0.0, d)
            feas.append(d)
    if not feas:
        raise SpecFileError("halfspace target is the zero cone")
    angles = [np.arctan2(d[1], d[0]) for d in feas]
    lo = feas[int(np.argmin(angles))]
    hi = feas[int(np.argmax(angles))]
    if abs(max(angles) - min(angles)) <= tol:
        return [lo.tolist()]
    return [lo.tolist(), hi.tolist()]


def parse(data: dict) -> SystemSpec:
    if not isinstance(data, dict):
        raise SpecFileError("top level must be a JSON object")
    schema = data.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise SpecFileError(f"unsupported schema {schema!r}; expected {SCHEMA_VERSION}")
    try:
        A = [[float(v) for v in row] for row in data["A"]]
        b = [float(v) for v in data["b"]]
    except KeyError as exc:
        raise SpecFileError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"A and b must be numeric arrays: {exc}") from None
    n = len(b)
    if len(A) != n or any(len(row) != n for row in A):
        raise SpecFileError(f"A must be {n}x{n} to match b")
    targets = []
    for i, t in enumerate(data.get("targets", [])):
        kind = t.get("kind", "cone")
        if kind not in ("cone", "polytope"):
            raise SpecFileError(f"targets[{i}].kind must be 'cone' or 'polytope'")
        verts = [[float(v) for v in vert] for vert in t.get("vertices", [])]
        if any(len(v) != n for v in verts):
            raise SpecFileError(f"targets[{i}] vertices must have {n} entries")
        targets.append(TargetSpec(kind, verts))
    hs = data.get("halfspace_target")
    if hs is not None:
        if n != 2:
            raise SpecFileError("halfspace targets are supported only for n = 2")
        targets.append(TargetSpec("cone", halfspace_rays(hs.get("inequalities", [])),
                                  source="halfspace"))
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise SpecFileError("options must be an object")
    return SystemSpec(A, b, targets, options)


def load(path) -> SystemSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    return parse(data)
