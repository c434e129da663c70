"""Request and response models for the HTTP service."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

from ..mms import INFINITE_RATIO, fraction_decimal


class InstancePayload(BaseModel):
    costs: list[list[int]]
    n: Optional[int] = None
    m: Optional[int] = None


class AllocationPayload(BaseModel):
    bundles: list[list[int]]


class FractionPayload(BaseModel):
    num: int
    den: int
    decimal: str

    @classmethod
    def from_ratio(cls, ratio) -> "FractionPayload":
        if ratio == INFINITE_RATIO:
            return cls(num=1, den=0, decimal="inf")
        frac = Fraction(ratio)
        return cls(
            num=frac.numerator,
            den=frac.denominator,
            decimal=fraction_decimal(frac),
        )


class RatioReportPayload(BaseModel):
    per_agent: list[FractionPayload]
    worst: FractionPayload


class ValidateResponse(BaseModel):
    n: int
    m: int


class MmsRequest(BaseModel):
    instance: InstancePayload


class AgentBounds(BaseModel):
    average: FractionPayload
    largest_item: int


class MmsResponse(BaseModel):
    values: list[int]
    bounds: list[AgentBounds]


class SolveRequest(BaseModel):
    instance: InstancePayload
    algorithm: str
    pattern: Optional[str] = None
    schedule: Optional[str] = None
    seed: int = 0


class SolveResponse(BaseModel):
    algorithm: str
    allocation: AllocationPayload
    ratios: RatioReportPayload
    schedule: Optional[list[int]] = None
    # a priori ratio guarantee implied by the schedule, when one applies
    schedule_bound: Optional[FractionPayload] = None
    reclaimed: Optional[list[int]] = None
    seed: Optional[int] = None


class RatioRequest(BaseModel):
    instance: InstancePayload
    allocation: AllocationPayload


class CertificatePayload(BaseModel):
    bound: FractionPayload
    enumerated: int
    wall_time_s: float
    witness: dict[str, Any]


class CertifyN3Request(BaseModel):
    m: int = 9
    budget: int = 2_000_000


class SpTestRequest(BaseModel):
    mechanism: str
    n: int = Field(ge=1)
    m: int = Field(ge=1)
    budget: int = 40320
    seed: int = 0
    trials: int = 20


class ManipulationPayload(BaseModel):
    instance: InstancePayload
    agent: int
    report: list[int]
    truthful_cost: FractionPayload
    manipulated_cost: FractionPayload


class SpTestResponse(BaseModel):
    mechanism: str
    n: int
    m: int
    trials: int
    searches: int
    manipulations_found: int
    witnesses: list[ManipulationPayload]


class BenchRequest(BaseModel):
    suite: Literal["grid-n2", "grid-n3", "random-n4plus", "lowerbounds"]
    seed: int = 0
    trials: int = 100


class BenchRow(BaseModel):
    instance_id: str
    algorithm: str
    worst_num: int
    worst_den: int
    worst_decimal: str


class BenchResponse(BaseModel):
    suite: str
    rows: list[BenchRow]


class ErrorPayload(BaseModel):
    error: str
    detail: Any
