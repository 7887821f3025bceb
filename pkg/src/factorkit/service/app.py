"""FastAPI service exposing every command as a POST endpoint.

Errors map onto status codes the CLI turns into exit codes:
400/422 invalid input, 409 regime refused.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import commands
from ..errors import InvalidInputError, RegimeRefusedError
from .models import (
    AsymRequest,
    BoundsRequest,
    CompareRequest,
    ExactRequest,
    FigureRequest,
    McRequest,
    SwitchRequest,
    TableResponse,
)

app = FastAPI(
    title="factorkit",
    description="Exact, asymptotic and Monte Carlo computations for "
    "factorisations of complete graphs into spanning regular factors.",
    version="0.1.0",
)


@app.exception_handler(InvalidInputError)
async def _invalid_input(request: Request, exc: InvalidInputError):
    return JSONResponse(status_code=400, content={"detail": {"code": "invalid_input", "message": str(exc)}})


@app.exception_handler(RegimeRefusedError)
async def _regime_refused(request: Request, exc: RegimeRefusedError):
    return JSONResponse(status_code=409, content={"detail": {"code": "regime_refused", "message": str(exc)}})


@app.get("/v1/health")
def health():
    return {"status": "ok"}


@app.post("/v1/asym", response_model=TableResponse)
def asym(req: AsymRequest):
    return commands.cmd_asym(
        formula=req.formula,
        spec=req.spec.to_spec() if req.spec else None,
        n=req.n,
        d=req.d,
        k=req.k,
        h=req.h,
        degrees=req.degrees,
        d1=req.d1,
        d2=req.d2,
    ).to_payload()


@app.post("/v1/exact", response_model=TableResponse)
def exact_(req: ExactRequest):
    return commands.cmd_exact(
        kind=req.kind,
        n=req.n,
        d=req.d,
        k=req.k,
        spec=req.spec.to_spec() if req.spec else None,
        method=req.method,
        workers=req.workers,
    ).to_payload()


@app.post("/v1/mc", response_model=TableResponse)
def mc(req: McRequest):
    return commands.cmd_mc(
        mode=req.mode,
        trials=req.trials,
        seed=req.seed,
        workers=req.workers,
        n=req.n,
        degrees=req.degrees,
        d=req.d,
        h=req.h,
        graph=req.graph.to_graph() if req.graph else None,
        graph2=req.graph2.to_graph() if req.graph2 else None,
    ).to_payload()


@app.post("/v1/switch", response_model=TableResponse)
def switch(req: SwitchRequest):
    return commands.cmd_switch(
        n=req.n,
        d=req.d,
        h=req.h,
        graph=req.graph.to_graph() if req.graph else None,
        graph2=req.graph2.to_graph() if req.graph2 else None,
        moves=req.moves,
    ).to_payload()


@app.post("/v1/bounds", response_model=TableResponse)
def bounds(req: BoundsRequest):
    return commands.cmd_bounds(Z=req.Z, A=req.A, B=req.B, c_hat=req.c_hat, demo=req.demo).to_payload()


@app.post("/v1/figure", response_model=TableResponse)
def figure(req: FigureRequest):
    return commands.cmd_figure(n=req.n, method=req.method, workers=req.workers).to_payload()


@app.post("/v1/compare", response_model=TableResponse)
def compare(req: CompareRequest):
    return commands.cmd_compare(spec=req.spec.to_spec(), workers=req.workers).to_payload()
