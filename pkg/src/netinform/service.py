"""Stateless HTTP facade over the analysis operations.

Endpoints under /v1 accept the same JSON documents as the file format and
return the same Report payloads as the CLI, byte-identical for identical
inputs.  Experiments are desk-capped and stream line-delimited JSON progress
events.  Configuration comes from NETINFORM_ADDR, NETINFORM_JOBS and
NETINFORM_CORS.
"""

from __future__ import annotations

import json
import os
import queue
import threading

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from .errors import HypothesisViolation, NetinformError, SchemaError
from .model import load
from .report import (
    check_report,
    experiment_report,
    parse_predictor_doc,
    probe_report,
    render,
    sets_report,
    validation_report,
)

MAX_BODY = 1 << 20        # 1 MiB
MAX_EXPERIMENT_N = 1 << 16
MAX_EXPERIMENT_RUNS = 20


def _error(status: int, message: str, pointer: str | None = None) -> JSONResponse:
    body = {"error": message}
    if pointer:
        body["pointer"] = pointer
    return JSONResponse(body, status_code=status)


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    if len(raw) > MAX_BODY:
        raise _Oversize()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("/", "expected a JSON object")
    return doc


class _Oversize(Exception):
    pass


def _inputs(doc: dict):
    net, pred = load(doc.get("network", {}))
    if "predictor" in doc and doc["predictor"] is not None:
        pred = parse_predictor_doc(doc["predictor"], net)
    if pred is None:
        raise SchemaError("/predictor", "request carries no predictor model")
    return net, pred


def create_app() -> FastAPI:
    app = FastAPI(title="netinform", docs_url=None, redoc_url=None)
    origins = os.environ.get("NETINFORM_CORS", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[o.strip() for o in origins.split(",")],
        allow_methods=["POST", "GET", "OPTIONS"],
        allow_headers=["*"],
    )

    @app.exception_handler(_Oversize)
    async def oversize_handler(request, exc):
        return _error(413, f"request body exceeds {MAX_BODY} bytes")

    @app.exception_handler(SchemaError)
    async def schema_handler(request, exc: SchemaError):
        return _error(400, str(exc), getattr(exc, "pointer", None))

    @app.exception_handler(HypothesisViolation)
    async def hypothesis_handler(request, exc):
        return _error(422, str(exc))

    @app.exception_handler(NetinformError)
    async def domain_handler(request, exc):
        return _error(422, str(exc))

    @app.get("/v1/health")
    async def health():
        return {"ok": True}

    @app.post("/v1/validate")
    async def validate_ep(request: Request):
        doc = await _json_body(request)
        net, pred = load(doc.get("network", doc))
        return JSONResponse(json.loads(render(validation_report(net, pred))))

    @app.post("/v1/check")
    async def check_ep(request: Request):
        doc = await _json_body(request)
        net, pred = _inputs(doc)
        opts = doc.get("options", {})
        rep, code = check_report(
            net, pred,
            mode=opts.get("mode", "both"),
            grid=int(opts.get("grid", 256)),
            tol=float(opts.get("tol", 1e-8)),
            probe=int(opts.get("probe", 0)),
            seed=int(opts.get("seed", 0)),
            max_card=int(opts.get("max_card", 6)),
        )
        payload = json.loads(render(rep))
        payload["exit_code"] = code
        return JSONResponse(payload)

    @app.post("/v1/sets")
    async def sets_ep(request: Request):
        doc = await _json_body(request)
        net, pred = _inputs(doc)
        return JSONResponse(json.loads(render(sets_report(net, pred))))

    @app.post("/v1/probe")
    async def probe_ep(request: Request):
        doc = await _json_body(request)
        net, pred = _inputs(doc)
        opts = doc.get("options", {})
        rep = probe_report(net, pred,
                           trials=int(opts.get("trials", 100)),
                           seed=int(opts.get("seed", 0)))
        return JSONResponse(json.loads(render(rep)))

    @app.post("/v1/experiment")
    async def experiment_ep(request: Request):
        doc = await _json_body(request)
        net, pred = _inputs(doc)
        opts = doc.get("options", {})
        n_grid = [int(n) for n in opts.get("N_grid", [4096])]
        runs = int(opts.get("runs", 5))
        if max(n_grid) > MAX_EXPERIMENT_N:
            return _error(422, f"N capped at {MAX_EXPERIMENT_N} for the service")
        if runs > MAX_EXPERIMENT_RUNS:
            return _error(422, f"runs capped at {MAX_EXPERIMENT_RUNS}")
        seed = int(opts.get("seed", 0))
        jobs = int(os.environ.get("NETINFORM_JOBS", "1"))

        events: queue.Queue = queue.Queue()

        def progress(done, total):
            events.put({"event": "progress", "done": done, "total": total})

        def work():
            try:
                rep = experiment_report(net, pred, n_grid, runs=runs,
                                        seed=seed, jobs=jobs,
                                        progress=progress if jobs == 1 else None)
                events.put({"event": "done", "report": json.loads(render(rep))})
            except Exception as exc:  # surfaced as a terminal stream event
                events.put({"event": "error", "message": str(exc)})

        threading.Thread(target=work, daemon=True).start()

        def stream():
            while True:
                item = events.get()
                yield json.dumps(item, sort_keys=True) + "\n"
                if item["event"] in ("done", "error"):
                    break

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    return app


def run(addr: str | None = None):
    import uvicorn

    addr = addr or os.environ.get("NETINFORM_ADDR", "127.0.0.1:8321")
    host, _, port = addr.rpartition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port))
