"""Report assembly and canonical JSON serialisation.

Canonical form: keys sorted, two-space indent, every float written with 17
significant digits. Re-serialising a parsed report reproduces it byte for
byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict

import numpy as np

from . import __version__
from .cones import GeneratorCone
from .controllability import ControllabilityReport, PolyhedralityVerdict, limit_residuals

REPORT_SCHEMA = 1


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2) -> str:
    """Canonical JSON text for plain data (dict/list/str/int/float/bool/None)."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None:
            return "null"
        if isinstance(o, bool):
            return "true" if o else "false"
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return _fmt_float(o)
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return enc(obj, 0) + "\n"


def loads(text: str):
    return json.loads(text)


def _num(x):
    if x is None:
        return None
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    return float(x)


def _vec(v) -> list[float] | None:
    return None if v is None else [float(x) for x in np.asarray(v, dtype=float).ravel()]


def _mat(m) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(m, dtype=float)]


def _complex(values) -> list[list[float]]:
    return [[float(np.real(z)), float(np.imag(z))] for z in np.asarray(values, dtype=complex)]


def _cone(C: GeneratorCone | None):
    if C is None:
        return None
    return {"labels": list(C.labels), "generators": _mat(C.generators.T)}


def _verdict(v: PolyhedralityVerdict | None):
    if v is None:
        return None
    out = {
        "kind": v.kind,
        "polyhedral": v.polyhedral,
        "method": v.method,
        "k_vert": v.k_vert,
        "direct_k": v.direct_k,
        "k_max": v.k_max,
        "method_agreement": {
            "spectral": v.polyhedral,
            "direct": v.direct_k is not None,
            "agree": v.agreement,
        },
        "failing_condition": v.failing_condition,
        "simplicial": v.simplicial,
        "generators": _cone(v.generators),
        "a2_spectrum": None if v.a2_spectrum is None else _complex(v.a2_spectrum),
        "vf_contained": v.vf_contained,
    }
    r = v.recursion
    if r is not None:
        out["recursion"] = {
            "holds": r.holds,
            "degree_nm": r.degree_nm,
            "coefficients": _vec(r.coefficients),
            "failing_condition": r.failing_condition,
            "note": r.note,
        }
    return out


def build(report: ControllabilityReport, command: str) -> dict:
    sys = report.system
    s = sys.spectral
    lc = report.limit
    targets = []
    for kind, t in zip(report.target_kinds, report.targets):
        targets.append({
            "kind": kind,
            "point": _vec(t.point),
            "status": t.status,
            "horizon": t.horizon,
            "horizon_bounded": t.horizon_bounded,
            "witness": _vec(t.witness),
            "objective": _num(t.objective),
            "residual": _num(t.residual),
            "inputs": _vec(t.inputs),
            "replay_error": _num(t.replay_error),
        })
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "status": report.status,
        "disagreements": list(report.disagreements),
        "provenance": {
            "tool": "poscon",
            "version": __version__,
            "tolerances": {k: _num(v) for k, v in asdict(sys.tol).items()},
        },
        "system": {"A": _mat(sys.A), "b": _vec(sys.b), "n": sys.n,
                   "full_rank": sys.full_rank},
        "structure": {
            "irreducible": sys.structure.irreducible,
            "cyclicity_h": sys.h,
            "permutation": list(sys.structure.permutation),
            "block_sizes": list(sys.structure.block_sizes),
        },
        "spectral": {
            "eigenvalues": _complex(s.eigenvalues),
            "rho": float(s.rho),
            "dominant": _complex(s.dominant),
            "nondominant": _complex(s.nondominant),
            "h": s.h,
        },
        "limit": {
            "C_lim": _cone(lc.C_lim),
            "v_f": _cone(lc.v_f),
            "residuals": limit_residuals(sys, lc),
            "squarings": lc.squarings,
        },
        "conset_f": _verdict(report.finite),
        "conset_inf": _verdict(report.infinite),
        "special_case": _cone(report.special_case),
        "targets": targets,
    }
