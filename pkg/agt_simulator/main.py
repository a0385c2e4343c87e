"""
main.py — FastAPI Entry Point for the Simulator Service

This module exposes the protocol runners over HTTP. Runs are accepted immediately
and executed as background tasks; their reports are kept in memory until the
process ends.

Responsibilities:
    • Accept run requests via HTTP API (202 Accepted)
    • Execute protocol runs in the background
    • Serve finished reports by run id
    • Provide system health information
"""

import uuid

from fastapi import BackgroundTasks, FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .dynamics import StateVector
from .errors import AgtError
from .hamiltonian import schedule_from_tag
from .logging_config import get_logger, setup_logging
from .models import RunRequest
from .protocols import build_protocol, run_protocol

# Initialization
setup_logging()
log = get_logger(__name__)
app = FastAPI(title="AGT Simulator")

# runId → report dict, or None while pending
RUNS: dict[str, dict | None] = {}


@app.on_event("startup")
def on_startup():
    log.info("Simulator-Service startet...")


@app.exception_handler(AgtError)
async def agt_error_handler(request: Request, exc: AgtError):
    """Maps expected simulator failures (including request validation) to 422."""
    log.warning(f"Anfrage abgelehnt ({type(exc).__name__}): {exc}")
    return JSONResponse(status_code=422, content={"error": type(exc).__name__, "detail": str(exc)})


def execute_run(run_id: str, request_data: dict):
    """
    Background task: builds the protocol, runs it and stores the report.

    Failures are stored as {"status": "failed", ...} so polling clients see them.
    """
    request = RunRequest(**request_data)
    log_prefix = f"[Run: {run_id}]"
    try:
        spec = build_protocol(request.protocol, request.gate, request.omega, schedule_from_tag("linear"))
        label = request.state * spec.n_data if len(request.state) == 1 else request.state
        report = run_protocol(spec, StateVector.basis(label), request.T, request.steps, name=run_id)
        RUNS[run_id] = {"status": "done", **report.model_dump(mode="json")}
    except AgtError as e:
        log.error(f"{log_prefix} Lauf fehlgeschlagen: {e}")
        RUNS[run_id] = {"status": "failed", "error": type(e).__name__, "detail": str(e)}


# API Endpoint: submit a run
@app.post("/v1/runs", status_code=202)
async def submit_run(run: RunRequest, background_tasks: BackgroundTasks):
    """
    Accepts a run request and schedules it.

    Args:
        run (RunRequest): Validated request payload.
        background_tasks (BackgroundTasks): FastAPI background task handler.

    Returns:
        dict: runId, protocol and an acknowledgment status.
    """
    run_id = f"run-{run.runName or run.protocol}-{uuid.uuid4().hex[:8]}"
    log_prefix = f"[Run: {run_id}]"
    log.info(f"{log_prefix} Neuer Lauf über die API erhalten ({run.protocol}).")
    RUNS[run_id] = None
    background_tasks.add_task(execute_run, run_id=run_id, request_data=run.model_dump())
    log.info(f"{log_prefix} Zur Hintergrundverarbeitung angenommen.")
    return {"runId": run_id, "protocol": run.protocol, "status": "Run accepted"}


@app.get("/v1/runs/{run_id}")
def get_run(run_id: str):
    """
    Returns the stored report, {"status": "pending"} while running.

    Raises:
        HTTPException(404): If the run id is unknown.
    """
    if run_id not in RUNS:
        raise HTTPException(status_code=404, detail=f"Unknown run '{run_id}'.")
    return RUNS[run_id] or {"status": "pending"}


# Health Check Endpoint
@app.get("/health")
def health_check():
    """Liveness check for container orchestrators."""
    return {"status": "ok"}
