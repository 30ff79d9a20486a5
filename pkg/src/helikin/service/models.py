"""Pydantic request models for the compute endpoints.

Every field is validated explicitly; values are never silently clamped.
Defaults here are the documented defaults of the CLI flags.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

_HALF_STEPS = (0.0, 0.5, -0.5)


class HarmonicsRequest(BaseModel):
    mu: float = 0.5
    lmax: float = 1.5
    n_theta: int = Field(default=32, ge=4)
    n_phi: int = Field(default=24, ge=4)
    table: Literal["values", "gram"] = "gram"

    @field_validator("mu")
    @classmethod
    def _mu_allowed(cls, v):
        if v not in _HALF_STEPS:
            raise ValueError(f"mu must be one of 0, 0.5, -0.5, got {v}")
        return v

    @field_validator("lmax")
    @classmethod
    def _lmax_half_step(cls, v):
        if abs(2 * v - round(2 * v)) > 1e-9 or v < 0:
            raise ValueError(f"lmax must be a non-negative half-integer, got {v}")
        return v

    @field_validator("n_theta")
    @classmethod
    def _even_theta(cls, v):
        if v % 2:
            raise ValueError("n_theta must be even (hemisphere-split grid)")
        return v


class FluxRequest(BaseModel):
    g: float = 0.5
    radii: list[float] = Field(default=[0.5, 1.0, 7.0], min_length=1)
    n_theta: int = Field(default=16, ge=4)
    n_phi: int = Field(default=8, ge=4)

    @field_validator("radii")
    @classmethod
    def _positive(cls, v):
        if any(r <= 0 for r in v):
            raise ValueError("radii must be positive")
        return v

    @field_validator("n_theta")
    @classmethod
    def _even_theta(cls, v):
        if v % 2:
            raise ValueError("n_theta must be even")
        return v


class CocycleRequest(BaseModel):
    eg: float = 0.5
    tetrahedra: int = Field(default=1000, ge=1, le=1_000_000)
    seed: int = Field(default=0, ge=0, lt=2**64)
    scale: float = Field(default=1.0, gt=0)


class ChernRequest(BaseModel):
    sector: Literal["plus", "minus", "both"] = "both"
    n_theta: int = Field(default=64, ge=64)
    n_phi: int = Field(default=64, ge=64)

    @field_validator("n_theta")
    @classmethod
    def _even_theta(cls, v):
        if v % 2:
            raise ValueError("n_theta must be even")
        return v


class FormFactorRequest(BaseModel):
    kind: Literal["overlap", "phase", "screening"] = "overlap"
    p: float = Field(default=1.0, gt=0)
    theta_p: float = Field(default=0.7, ge=0.0)
    phi_p: float = 0.0
    q: float = Field(default=1.0, gt=0)
    n_theta: int = Field(default=16, ge=4)
    n_phi: int = Field(default=9, ge=3)
    steps: int = Field(default=16, ge=8)

    @field_validator("theta_p")
    @classmethod
    def _theta_range(cls, v):
        import math
        if v > math.pi:
            raise ValueError(f"theta_p must lie in [0, pi], got {v}")
        return v

    @field_validator("n_theta")
    @classmethod
    def _even_theta(cls, v):
        if v % 2:
            raise ValueError("n_theta must be even")
        return v


class OscillatorRequest(BaseModel):
    mu: float = 0.5
    lmax: float = 3.5
    vmax: int = Field(default=5, ge=0, le=40)
    grid: int = Field(default=6000, ge=16, le=200_000)
    pmax: float = Field(default=14.0, gt=0)

    @field_validator("mu")
    @classmethod
    def _mu_allowed(cls, v):
        if v not in _HALF_STEPS:
            raise ValueError(f"mu must be one of 0, 0.5, -0.5, got {v}")
        return v

    @field_validator("lmax")
    @classmethod
    def _lmax_half_step(cls, v):
        if abs(2 * v - round(2 * v)) > 1e-9 or v < 0:
            raise ValueError(f"lmax must be a non-negative half-integer, got {v}")
        return v


class HydrogenRequest(BaseModel):
    mu: float = 0.0
    z: float = Field(default=1.0, gt=0)
    l: float = Field(default=0.0, ge=0)
    count: int = Field(default=3, ge=1, le=12)
    radial: int = Field(default=150, ge=100, le=1200)
    scale: Optional[float] = Field(default=None, gt=0)
    n_theta: int = Field(default=48, ge=8)
    n_phi: int = Field(default=33, ge=5)
    lam_max: int = Field(default=48, ge=4, le=64)
    m: Optional[float] = None
    splittings: bool = False

    @field_validator("mu")
    @classmethod
    def _mu_allowed(cls, v):
        if v not in _HALF_STEPS:
            raise ValueError(f"mu must be one of 0, 0.5, -0.5, got {v}")
        return v

    @field_validator("l")
    @classmethod
    def _l_half_step(cls, v):
        if abs(2 * v - round(2 * v)) > 1e-9:
            raise ValueError(f"l must be a half-integer, got {v}")
        return v

    @field_validator("n_theta")
    @classmethod
    def _even_theta(cls, v):
        if v % 2:
            raise ValueError("n_theta must be even")
        return v


class SelftestRequest(BaseModel):
    pass
