"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class MatGroupDescriptor(BaseModel):
    modulus: int = Field(ge=2)
    generators: list[list[int]]


class ArborealGenerator(BaseModel):
    t: list[int]
    m: list[int]


class ArborealDescriptor(BaseModel):
    modulus: int = Field(ge=2)
    generators: list[ArborealGenerator]


class CartanRequest(BaseModel):
    prime: int = Field(ge=2)
    level: int = Field(default=1, ge=1)
    gamma: int = 0
    delta: int
    normaliser: bool = False


class CartanResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    order: int
    abelian: bool
    scalar_order: int
    normaliser_order: int | None = None
    descriptor: MatGroupDescriptor


class H1Request(BaseModel):
    group: MatGroupDescriptor
    module_level: int | None = Field(default=None, ge=1)
    cap: int = Field(default=10_000, ge=1)


class H1Response(BaseModel):
    schema_version: int = SCHEMA_VERSION
    group_order: int
    module: str
    invariant_factors: list[int]
    order: int
    exponent: int


class PrimeFailure(BaseModel):
    ell: int
    n: int
    A: int
    B: int


class KummerResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    modulus: int
    order: int
    fiber_order: int
    total_failure: int
    per_prime: list[PrimeFailure]
    identity_holds: bool


class VerifyRequest(BaseModel):
    suite: str
    seed: int = 0
    instances: int | None = Field(default=None, ge=1)


class SuiteFailure(BaseModel):
    index: int
    detail: str
    data: dict


class VerifyResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    suite: str
    seed: int
    instances: int
    passed: bool
    stats: dict
    failures: list[SuiteFailure]


class ErrorBody(BaseModel):
    code: int  # mirrors the CLI exit codes
    message: str
