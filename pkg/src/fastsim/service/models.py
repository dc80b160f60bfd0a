"""Pydantic response models for the HTTP service.

Request bodies reuse the config models from :mod:`fastsim.config`; the
responses inline the CSV artifacts so a thin client can write byte-identical
files without re-serializing anything.
"""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel

from ..harness import EntryRow, ExperimentArtifacts, OracleResult, ScalingReport


class HealthResponse(BaseModel):
    status: str
    version: str


class RowModel(BaseModel):
    family: str
    kind: str
    indices: list[int]
    t: float
    value_re: float
    value_im: float
    stderr: float
    shots: int
    circuits: int
    strategy: str

    @classmethod
    def from_row(cls, r: EntryRow) -> "RowModel":
        return cls(
            family=r.family,
            kind=r.kind,
            indices=list(r.indices),
            t=r.t,
            value_re=r.value.real,
            value_im=r.value.imag,
            stderr=r.stderr,
            shots=r.shots,
            circuits=r.circuits,
            strategy=r.strategy,
        )


class RunLogModel(BaseModel):
    protocol: str
    t: float
    shots: int
    circuits: int
    wall_seconds: float


class ReportModel(BaseModel):
    eps: float
    entries: int
    within_eps: int
    fraction_within_eps: float
    max_abs_error: float


class RunResponse(BaseModel):
    ground_energy: float
    rows: list[RowModel]
    report: ReportModel
    run_log: list[RunLogModel]
    results_csv: str
    oracle_csv: str
    results_json: str

    @classmethod
    def from_artifacts(cls, artifacts: ExperimentArtifacts) -> "RunResponse":
        return cls(
            ground_energy=artifacts.oracle.ground_energy,
            rows=[RowModel.from_row(r) for r in artifacts.rows],
            report=ReportModel(**artifacts.report),
            run_log=[
                RunLogModel(
                    protocol=l.protocol, t=l.t, shots=l.shots,
                    circuits=l.circuits, wall_seconds=l.wall_seconds,
                )
                for l in artifacts.run_log
            ],
            results_csv=artifacts.results_csv(),
            oracle_csv=artifacts.oracle_csv(),
            results_json=artifacts.results_json(),
        )


class OracleResponse(BaseModel):
    ground_energy: float
    rows: list[RowModel]
    oracle_csv: str

    @classmethod
    def from_result(cls, result: OracleResult, csv_text: str) -> "OracleResponse":
        return cls(
            ground_energy=result.ground_energy,
            rows=[RowModel.from_row(r) for r in result.rows],
            oracle_csv=csv_text,
        )


class ScalingRowModel(BaseModel):
    protocol: str
    mapping: str
    strategy: str
    n: int
    circuits: int
    predicted: Optional[int]
    shots: int


class ScalingResponse(BaseModel):
    rows: list[ScalingRowModel]
    slopes: dict[str, dict]
    scaling_csv: str

    @classmethod
    def from_report(cls, report: ScalingReport) -> "ScalingResponse":
        return cls(
            rows=[ScalingRowModel(**vars(r)) for r in report.rows],
            slopes=report.slopes,
            scaling_csv=report.to_csv(),
        )
