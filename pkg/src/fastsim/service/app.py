"""FastAPI service wrapping the estimator harness.

Endpoints:

* ``GET  /health``   liveness probe
* ``POST /run``      execute an experiment config, return rows + artifacts
* ``POST /oracle``   exact-diagonalization values only
* ``POST /scaling``  circuit-count scaling study over a sweep config

Domain errors surface as 422 responses whose body carries an ``error_kind``
of ``validation`` or ``capacity`` so thin clients can map exit codes.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..config import ExperimentConfig, SweepConfig
from ..errors import CapacityError, FastsimError, ValidationError
from ..harness import oracle_correlations, rows_to_csv, run_experiment, scaling_study
from ..mapping import MappingKind
from .models import (
    HealthResponse,
    OracleResponse,
    RunResponse,
    ScalingResponse,
)

API_VERSION = "0.1.0"


def create_app() -> FastAPI:
    app = FastAPI(title="fastsim", version=API_VERSION)

    @app.exception_handler(FastsimError)
    async def handle_domain_error(request: Request, exc: FastsimError):
        if isinstance(exc, CapacityError):
            kind = "capacity"
        elif isinstance(exc, ValidationError):
            kind = "validation"
        else:
            kind = "internal"
        return JSONResponse(
            status_code=422,
            content={"error_kind": kind, "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=API_VERSION)

    @app.post("/run", response_model=RunResponse)
    def run(config: ExperimentConfig) -> RunResponse:
        artifacts = run_experiment(config)
        return RunResponse.from_artifacts(artifacts)

    @app.post("/oracle", response_model=OracleResponse)
    def oracle(config: ExperimentConfig) -> OracleResponse:
        result = oracle_correlations(
            config.model,
            MappingKind.parse(config.mapping),
            config.request,
            config.times,
        )
        return OracleResponse.from_result(result, rows_to_csv(result.rows))

    @app.post("/scaling", response_model=ScalingResponse)
    def scaling(sweep: SweepConfig) -> ScalingResponse:
        return ScalingResponse.from_report(scaling_study(sweep))

    return app


app = create_app()
