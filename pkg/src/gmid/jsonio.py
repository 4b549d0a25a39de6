"""Canonical JSON encoding and schema validation for the external surfaces.

Both the CLI and the HTTP service serialize through canonical_json so that
identical payloads produce byte-identical answers: keys sorted, compact
separators, floats in Python's shortest round-trip form, NaN/Inf rejected.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .dde_sim import History, Trajectory, TransportField
from .errors import ValidationError
from .quasipoly import DelaySystem
from .rootfinder import Rectangle, RootSet
from .synthesis import ChainSpec, GmidCertificate


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, float) and not math.isfinite(value):
        raise ValidationError("non-finite float in JSON payload")
    return value


def canonical_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def certificate_to_json(cert: GmidCertificate) -> dict:
    out = {
        "system": cert.system.to_json(),
        "s0": cert.s0,
        "multiplicity": cert.multiplicity,
        "residuals": list(cert.derivative_residuals),
        "dominance": cert.dominance.value,
        "stable": cert.stable,
    }
    if cert.neutral_chain is not None:
        out["chain_zeta"] = list(cert.neutral_chain)
    return out


def rootset_to_json(rs: RootSet) -> dict:
    return {
        "roots": [
            {
                "re": r.location.real,
                "im": r.location.imag,
                "mult": r.multiplicity,
                "residual": r.residual,
            }
            for r in rs.roots
        ],
        "winding": rs.total_winding,
        "window": rs.window.to_json(),
        "unresolved": [b.to_json() for b in rs.unresolved],
    }


def chain_to_json(spec: ChainSpec) -> dict:
    return {"n": spec.n, "window": spec.window, "zeta": list(spec.zeta_values)}


def trajectory_to_json(traj: Trajectory, stride: int = 1) -> dict:
    sl = slice(None, None, max(1, stride))
    return {
        "t": [float(v) for v in traj.t[sl]],
        "states": [[float(v) for v in row] for row in traj.states[sl]],
        "tau": traj.tau,
    }


def field_to_json(field: TransportField, stride_t: int = 1, stride_x: int = 1) -> dict:
    st = slice(None, None, max(1, stride_t))
    sx = slice(None, None, max(1, stride_x))
    return {
        "t": [float(v) for v in field.t[st]],
        "x": [float(v) for v in field.x[sx]],
        "phi": [[float(v) for v in row[sx]] for row in field.phi[st]],
        "trace_in": [float(v) for v in field.trace_in[st]],
        "trace_out": [float(v) for v in field.trace_out[st]],
        "L": field.L,
        "lambda": field.lam,
    }


def trajectory_to_csv(traj: Trajectory) -> str:
    n = traj.states.shape[1]
    header = "t," + ",".join("y" + "'" * k for k in range(n))
    lines = [header]
    for i in range(len(traj.t)):
        lines.append(",".join(repr(float(v)) for v in (traj.t[i], *traj.states[i])))
    return "\n".join(lines) + "\n"


def field_to_csv(field: TransportField) -> str:
    lines = ["t,x,phi"]
    for i, ti in enumerate(field.t):
        for j, xj in enumerate(field.x):
            lines.append(f"{ti!r},{xj!r},{field.phi[i, j]!r}")
    return "\n".join(lines) + "\n"


def rootset_to_csv(rs: RootSet) -> str:
    lines = ["re,im,mult,residual"]
    for r in rs.roots:
        lines.append(f"{r.location.real!r},{r.location.imag!r},{r.multiplicity},{r.residual!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Request validation helpers (shared by CLI file inputs and HTTP bodies)


def require_number(data: dict, key: str, *, positive: bool = False) -> float:
    if key not in data:
        raise ValidationError(f"missing field {key!r}")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"field {key!r} must be a number")
    v = float(v)
    if not math.isfinite(v):
        raise ValidationError(f"field {key!r} must be finite")
    if positive and v <= 0:
        raise ValidationError(f"field {key!r} must be positive")
    return v


def require_int(data: dict, key: str, *, minimum: int | None = None) -> int:
    if key not in data:
        raise ValidationError(f"missing field {key!r}")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"field {key!r} must be an integer")
    if minimum is not None and v < minimum:
        raise ValidationError(f"field {key!r} must be >= {minimum}")
    return v


def optional_number(data: dict, key: str, default=None):
    if key not in data or data[key] is None:
        return default
    return require_number(data, key)


def rectangle_from_json(data: dict) -> Rectangle:
    if not isinstance(data, dict):
        raise ValidationError("rectangle must be a JSON object")
    vals = {k: require_number(data, k) for k in ("re_lo", "re_hi", "im_lo", "im_hi")}
    return Rectangle(**vals)


def history_from_json(data: dict) -> History:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("history must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "constant":
        return History.constant(require_number(data, "value"))
    if kind == "polynomial":
        coeffs = data.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs
        ):
            raise ValidationError("polynomial history needs a nonempty numeric 'coeffs' array")
        return History.polynomial(coeffs)
    if kind == "samples":
        t = data.get("t")
        cols = data.get("columns")
        if not isinstance(t, list) or not isinstance(cols, list):
            raise ValidationError("sampled history needs 't' and 'columns' arrays")
        arr = np.asarray(cols, dtype=float).T
        return History.from_samples(np.asarray(t, dtype=float), arr)
    raise ValidationError(f"unknown history kind {kind!r}")


def system_from_json(data) -> DelaySystem:
    try:
        return DelaySystem.from_json(data)
    except ValidationError:
        raise
    except Exception as exc:  # malformed nesting, wrong types
        raise ValidationError(f"bad system object: {exc}") from exc
