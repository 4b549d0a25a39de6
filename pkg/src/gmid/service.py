"""Stateless JSON HTTP service exposing the design operations.

Every request is independent; handlers run concurrently in their own
threads under a per-request time budget and dispatch into pure module
functions.  Responses share the CLI's canonical JSON encoder, so identical
payloads produce byte-identical bodies on both surfaces.

Status codes: 400 malformed request, 422 precondition violation,
500 numerical failure or exhausted time budget.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import numpy as np

from . import controllers, dde_sim, jsonio, rootfinder, synthesis
from .budget import deadline_scope
from .errors import (
    GmidError,
    NonConvergenceError,
    OverflowGuardError,
    PreconditionError,
    TimeBudgetExceeded,
    ValidationError,
)


def _synthesize_op(body: dict) -> dict:
    n = jsonio.require_int(body, "n", minimum=1)
    m = jsonio.require_int(body, "m", minimum=0)
    tau = jsonio.require_number(body, "tau", positive=True)
    if "s0" in body and body["s0"] is not None:
        s0 = jsonio.require_number(body, "s0")
    elif "a_n_minus_1" in body and body["a_n_minus_1"] is not None:
        s0 = synthesis.admissible_root(n, m, tau, jsonio.require_number(body, "a_n_minus_1"))
    else:
        raise ValidationError("provide 's0' or 'a_n_minus_1'")
    return jsonio.certificate_to_json(synthesis.synthesize(n, m, tau, s0))


def _verify_op(body: dict) -> dict:
    sys_ = jsonio.system_from_json(body.get("system"))
    s0 = jsonio.optional_number(body, "s0")
    if s0 is None:
        s0 = synthesis.admissible_root(sys_.n, sys_.m, sys_.tau, sys_.a[sys_.n - 1])
    rel_tol = jsonio.optional_number(body, "rel_tol", 1e-8)
    return {
        "system": sys_.to_json(),
        "s0": s0,
        "multiplicity": synthesis.verify_multiplicity(sys_, s0, rel_tol=rel_tol),
        "max_multiplicity": sys_.m + sys_.n + 1,
        "residuals": list(synthesis.derivative_residuals(sys_, s0)),
        "stable": synthesis.stability_verdict(sys_.n, sys_.m, sys_.tau, sys_.a[sys_.n - 1]),
    }


def _roots_op(body: dict) -> dict:
    sys_ = jsonio.system_from_json(body.get("system"))
    rect = jsonio.rectangle_from_json(body.get("rect"))
    tol = jsonio.optional_number(body, "tol", 1e-9)
    return jsonio.rootset_to_json(rootfinder.system_rootset(sys_, rect, tol=tol))


def _chain_op(body: dict) -> dict:
    n = jsonio.require_int(body, "n", minimum=1)
    window = jsonio.require_number(body, "window", positive=True)
    return jsonio.chain_to_json(synthesis.neutral_chain(n, window))


def _simulate_op(body: dict) -> dict:
    sys_ = jsonio.system_from_json(body.get("system"))
    hist = jsonio.history_from_json(body.get("history"))
    t_end = jsonio.require_number(body, "t_end", positive=True)
    dt = jsonio.optional_number(body, "dt")
    stride = body.get("stride", 1)
    if not isinstance(stride, int) or stride < 1:
        raise ValidationError("'stride' must be a positive integer")
    traj = dde_sim.simulate(sys_, hist, t_end, dt=dt)
    out = jsonio.trajectory_to_json(traj, stride=stride)
    t_skip = jsonio.optional_number(body, "t_skip")
    if t_skip is not None:
        out["decay_rate"] = dde_sim.decay_rate(traj, t_skip)
    return out


def _transport_sim_op(body: dict) -> dict:
    L = jsonio.require_number(body, "L", positive=True)
    lam = jsonio.require_number(body, "lambda", positive=True)
    k_p = jsonio.require_number(body, "k_p")
    k_i = jsonio.require_number(body, "k_i")
    t_end = jsonio.require_number(body, "t_end", positive=True)
    nx = body.get("nx", 256)
    if not isinstance(nx, int):
        raise ValidationError("'nx' must be an integer")
    dt = jsonio.optional_number(body, "dt")
    stride = body.get("stride", 1)
    if not isinstance(stride, int) or stride < 1:
        raise ValidationError("'stride' must be a positive integer")
    field = dde_sim.simulate_transport(
        L, lam, k_p, k_i, lambda x: np.sin(2.0 * np.pi * x / L), t_end, nx=nx, dt=dt
    )
    return jsonio.field_to_json(field, stride_t=stride)


_POST_OPS = {
    "/api/synthesize": _synthesize_op,
    "/api/verify": _verify_op,
    "/api/roots": _roots_op,
    "/api/chain": _chain_op,
    "/api/simulate": _simulate_op,
    "/api/transport-sim": _transport_sim_op,
}


def _float_param(qs: dict, key: str) -> float:
    if key not in qs:
        raise ValidationError(f"missing query parameter {key!r}")
    try:
        return float(qs[key][0])
    except ValueError as exc:
        raise ValidationError(f"query parameter {key!r} must be a number") from exc


def _pendulum_example(qs: dict) -> dict:
    L = _float_param(qs, "L")
    g = _float_param(qs, "g")
    certify = qs.get("certify", ["1"])[0] not in ("0", "false")
    if "tau" in qs:
        tau = _float_param(qs, "tau")
        plus, minus = controllers.pendulum_triple(L, g, tau)
        out = {}
        for name, design in (("plus", plus), ("minus", minus)):
            entry = {
                "L": design.L, "g": design.g, "k_p": design.k_p, "k_d": design.k_d,
                "tau": design.tau, "s0": design.s0, "multiplicity": design.multiplicity,
                "rightmost_branch": name == "plus",
            }
            if certify:
                entry["certificate"] = jsonio.certificate_to_json(
                    controllers.certify_design(design.system(), design.s0)
                )
            out[name] = entry
        return {"branches": out}
    design, cert = controllers.pendulum_gmid(L, g, certify=certify)
    return {
        "design": {
            "L": design.L, "g": design.g, "k_p": design.k_p, "k_d": design.k_d,
            "tau": design.tau, "s0": design.s0, "multiplicity": design.multiplicity,
        },
        "certificate": jsonio.certificate_to_json(cert),
    }


def _transport_example(qs: dict) -> dict:
    L = _float_param(qs, "L")
    lam = _float_param(qs, "lambda")
    certify = qs.get("certify", ["1"])[0] not in ("0", "false")
    design, cert = controllers.transport_pi_gmid(L, lam, certify=certify)
    return {
        "design": {
            "L": design.L, "lambda": design.lam, "k_p": design.k_p, "k_i": design.k_i,
            "tau": design.tau, "s0": design.s0, "multiplicity": design.multiplicity,
        },
        "certificate": jsonio.certificate_to_json(cert),
    }


class _Handler(BaseHTTPRequestHandler):
    server_version = "gmid/0.1"
    protocol_version = "HTTP/1.1"

    # Populated by serve()
    static_dir: Path | None = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _reply(self, status: int, payload: dict) -> None:
        body = (jsonio.canonical_json(payload) + "\n").encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _ok(self, data, request_id) -> None:
        self._reply(200, {"ok": True, "data": data, "id": request_id})

    def _fail(self, status: int, code: str, message: str, request_id) -> None:
        self._reply(
            status, {"ok": False, "error": {"code": code, "message": message}, "id": request_id}
        )

    def _run(self, fn, arg, request_id) -> None:
        try:
            with deadline_scope():
                self._ok(fn(arg), request_id)
        except ValidationError as exc:
            self._fail(400, "validation", str(exc), request_id)
        except PreconditionError as exc:
            self._fail(422, "precondition", str(exc), request_id)
        except TimeBudgetExceeded as exc:
            self._fail(500, "time_budget_exceeded", str(exc), request_id)
        except (NonConvergenceError, OverflowGuardError) as exc:
            self._fail(500, "numerical", str(exc), request_id)
        except GmidError as exc:
            self._fail(500, "internal", str(exc), request_id)

    def do_POST(self):
        url = urlparse(self.path)
        op = _POST_OPS.get(url.path)
        if op is None:
            self._fail(404, "not_found", f"unknown endpoint {url.path}", None)
            return
        length = int(self.headers.get("Content-Length", "0") or "0")
        raw = self.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode() or "{}")
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._fail(400, "validation", f"request body is not valid JSON: {exc}", None)
            return
        if not isinstance(body, dict):
            self._fail(400, "validation", "request body must be a JSON object", None)
            return
        request_id = body.get("id")
        self._run(op, body, request_id)

    def do_GET(self):
        url = urlparse(self.path)
        qs = parse_qs(url.query)
        request_id = qs.get("id", [None])[0]
        if url.path == "/api/health":
            self._reply(200, {"ok": True})
            return
        if url.path == "/api/examples/pendulum":
            self._run(_pendulum_example, qs, request_id)
            return
        if url.path == "/api/examples/transport":
            self._run(_transport_example, qs, request_id)
            return
        if url.path.startswith("/api/"):
            self._fail(404, "not_found", f"unknown endpoint {url.path}", request_id)
            return
        self._serve_static(url.path)

    def _serve_static(self, path: str) -> None:
        if self.static_dir is None:
            self._fail(404, "not_found", "no static assets configured", None)
            return
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            self._fail(404, "not_found", f"no such asset {path}", None)
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(bind: str, port: int, static_dir: str | None = None) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {})
    handler.static_dir = Path(static_dir) if static_dir else None
    return ThreadingHTTPServer((bind, port), handler)


def serve(bind: str = "127.0.0.1", port: int = 8723, static_dir: str | None = None) -> None:
    """Run until interrupted.  Loopback bind by default; no authentication."""
    server = make_server(bind, port, static_dir)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()


def serve_background(bind: str = "127.0.0.1", port: int = 0, static_dir: str | None = None):
    """Start a server thread; returns (server, base_url).  Used by tests."""
    server = make_server(bind, port, static_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, actual_port = server.server_address[:2]
    return server, f"http://{host}:{actual_port}"
