"""Experiment configuration schema, shared by the harness, service, and CLI.

A config JSON document looks like::

    {
      "model": {"name": "spinless_hubbard_chain", "n": 4, "t_hop": 1.0,
                "u": 2.0, "mu": 0.0, "boundary": "open"},
      "mapping": "jw",
      "request": {"kind": "commutator", "family": "density_density",
                  "eps": 0.1, "delta": 0.05},
      "times": [0.5],
      "seed": 42,
      "shots": {"per_group": 4000, "majority": 4000},
      "output_path": "out"
    }

Mode and site indices are 0-based everywhere.  The seed is mandatory; all
sampled outputs are bit-reproducible given (config, seed) and independent
of the worker thread count.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from .errors import ValidationError
from .fast import ShotBudget

FAMILY_KIND = {
    "density_density": "commutator",
    "current_current": "commutator",
    "one_body": "commutator",
    "green": "anticommutator",
    "particle_hole": "general",
}


class ModelSpec(BaseModel):
    name: Literal["tight_binding_chain", "spinless_hubbard_chain", "custom"]
    n: int = Field(ge=1)
    t_hop: float = 1.0
    u: float = 0.0
    mu: float = 0.0
    boundary: Literal["open", "periodic"] = "open"
    terms: Optional[list[tuple[float, str]]] = None  # custom models only

    @model_validator(mode="after")
    def _check_shape(self):
        if self.name == "tight_binding_chain" and self.u != 0.0:
            raise ValueError("tight_binding_chain has no interaction; use spinless_hubbard_chain")
        if self.name == "custom":
            if not self.terms:
                raise ValueError("custom models need an explicit Pauli term list")
        elif self.terms:
            raise ValueError("Pauli terms are only accepted for custom models")
        return self


class ShotsConfig(BaseModel):
    per_group: int = Field(default=4000, ge=0)
    shadow: int = Field(default=30000, ge=0)
    bell: int = Field(default=40000, ge=0)
    anchor: int = Field(default=5000, ge=0)
    chain: int = Field(default=5000, ge=0)
    majority: int = Field(default=4000, ge=0)
    nm: int = Field(default=2000, ge=0)

    def budget(self) -> ShotBudget:
        return ShotBudget(
            per_group=self.per_group,
            shadow=self.shadow,
            bell=self.bell,
            anchor=self.anchor,
            chain=self.chain,
            majority=self.majority,
            nm=self.nm,
        )


class RequestConfig(BaseModel):
    kind: Literal["commutator", "anticommutator", "general"]
    family: Literal[
        "density_density", "current_current", "one_body", "green", "particle_hole"
    ]
    eps: float = Field(gt=0)
    delta: float = Field(default=0.05, gt=0, lt=1)

    @model_validator(mode="after")
    def _kind_matches_family(self):
        expected = FAMILY_KIND[self.family]
        if self.kind != expected:
            raise ValueError(
                f"family {self.family!r} implies kind {expected!r}, got {self.kind!r}"
            )
        return self


class ExperimentConfig(BaseModel):
    model: ModelSpec
    mapping: Literal["jw", "bk", "tt"]
    request: RequestConfig
    times: list[float] = Field(min_length=1)
    seed: int = Field(ge=0, le=2**64 - 1)
    shots: ShotsConfig = ShotsConfig()
    output_path: Optional[str] = None
    check_fraction: float = Field(default=0.95, gt=0, le=1)

    @field_validator("times")
    @classmethod
    def _finite_times(cls, v):
        if any(t != t for t in v):
            raise ValueError("times must be finite")
        return v


class SweepProtocol(BaseModel):
    protocol: Literal["fast1", "fast2", "brute_commutator", "brute_anticommutator"]
    mapping: Literal["jw", "bk", "tt"] = "jw"


class SweepConfig(BaseModel):
    model: ModelSpec
    n_values: list[int]
    protocols: list[SweepProtocol] = Field(min_length=1)
    eps: float = Field(default=0.1, gt=0)
    t: float = 0.2
    seed: int = Field(default=7, ge=0, le=2**64 - 1)
    shots: ShotsConfig = ShotsConfig(
        per_group=64, shadow=256, bell=256, anchor=64, chain=64, majority=512, nm=32
    )
    output_path: Optional[str] = None


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    return _load(path, ExperimentConfig)


def load_sweep_config(path: str | Path) -> SweepConfig:
    return _load(path, SweepConfig)


def _load(path, model_cls):
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file not found: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    try:
        return model_cls.model_validate(payload)
    except Exception as exc:
        raise ValidationError(f"invalid config: {exc}") from exc
