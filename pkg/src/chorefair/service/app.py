"""HTTP service exposing the solver, oracle, and verification harnesses.

The CLI talks to these endpoints (in process by default); remote clients
can run the same service under uvicorn. Domain errors map to HTTP 400 with
a machine-readable error code so clients can distinguish bad input from
exceeded limits.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..exceptions import (
    BudgetExceededError,
    ChorefairError,
    InfeasibleAllocationError,
    InstanceTooLargeError,
    InvalidInstanceError,
    UnknownAlgorithmError,
)
from ..ido import run_ordinal
from ..instances import gen_random
from ..mechanisms import (
    Infeasible,
    PickSchedule,
    consecutive_pick,
    constant_ratio_schedule,
    default_schedule,
    random_decline,
)
from ..mms import lower_bounds, mms_all, ratio_of
from ..model import Allocation, Instance, ordinal_of
from ..sequences import parse_pattern
from ..suites import run_suite
from ..verify import (
    certify_lower_bound_n2,
    certify_lower_bound_n3,
    manipulation_search,
)
from .schemas import (
    AgentBounds,
    AllocationPayload,
    BenchRequest,
    BenchResponse,
    BenchRow,
    CertificatePayload,
    CertifyN3Request,
    ErrorPayload,
    FractionPayload,
    InstancePayload,
    ManipulationPayload,
    MmsRequest,
    MmsResponse,
    RatioReportPayload,
    RatioRequest,
    SolveRequest,
    SolveResponse,
    SpTestRequest,
    SpTestResponse,
    ValidateResponse,
)

_ERROR_CODES = {
    InvalidInstanceError: "invalid_instance",
    InfeasibleAllocationError: "infeasible_allocation",
    UnknownAlgorithmError: "unknown_algorithm",
    InstanceTooLargeError: "instance_too_large",
    BudgetExceededError: "budget_exceeded",
}

# Codes whose cause is an exceeded limit rather than malformed input.
LIMIT_CODES = ("instance_too_large", "budget_exceeded")


def create_app() -> FastAPI:
    app = FastAPI(title="chorefair", version=__version__)

    @app.exception_handler(ChorefairError)
    async def domain_error(request: Request, exc: ChorefairError):
        code = "domain_error"
        for klass, name in _ERROR_CODES.items():
            if isinstance(exc, klass):
                code = name
                break
        detail = getattr(exc, "violations", None) or str(exc)
        payload = ErrorPayload(error=code, detail=detail)
        return JSONResponse(status_code=400, content=payload.model_dump())

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        payload = ErrorPayload(error="invalid_request", detail=str(exc))
        return JSONResponse(status_code=400, content=payload.model_dump())

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/instances/validate", response_model=ValidateResponse)
    def validate(payload: InstancePayload) -> ValidateResponse:
        inst = _instance(payload)
        return ValidateResponse(n=inst.n, m=inst.m)

    @app.post("/mms", response_model=MmsResponse)
    def mms(request: MmsRequest) -> MmsResponse:
        inst = _instance(request.instance)
        values = mms_all(inst)
        bounds = []
        for agent in range(1, inst.n + 1):
            average, largest = lower_bounds(inst, agent)
            bounds.append(
                AgentBounds(
                    average=FractionPayload.from_ratio(average),
                    largest_item=largest,
                )
            )
        return MmsResponse(values=list(values.values), bounds=bounds)

    @app.post("/solve", response_model=SolveResponse)
    def solve(request: SolveRequest) -> SolveResponse:
        inst = _instance(request.instance)
        profile = ordinal_of(inst)
        algorithm = request.algorithm
        schedule_used = None
        schedule_bound = None
        reclaimed = None
        seed_used = None
        if algorithm in ("sesqui-rr", "round-robin"):
            alloc = run_ordinal(profile, algorithm)
        elif algorithm.startswith("pattern:") or (
            algorithm == "pattern" and request.pattern
        ):
            text = request.pattern if algorithm == "pattern" else algorithm.split(":", 1)[1]
            pattern = parse_pattern(text, inst.n)
            alloc = run_ordinal(profile, "pattern", pattern)
        elif algorithm == "consecutive-pick":
            schedule = _schedule(request.schedule, inst.n, inst.m)
            alloc = consecutive_pick(profile, schedule)
            schedule_used = list(schedule.quotas)
            schedule_bound = FractionPayload.from_ratio(schedule.implied_ratio_bound())
        elif algorithm == "random-decline":
            outcome = random_decline(profile, request.seed)
            alloc = outcome.allocation
            reclaimed = sorted(outcome.reclaimed)
            seed_used = outcome.seed
        else:
            raise UnknownAlgorithmError(f"unknown algorithm {algorithm!r}")
        report = ratio_of(inst, alloc)
        return SolveResponse(
            algorithm=algorithm,
            allocation=AllocationPayload(**alloc.to_dict()),
            ratios=_ratio_payload(report),
            schedule=schedule_used,
            schedule_bound=schedule_bound,
            reclaimed=reclaimed,
            seed=seed_used,
        )

    @app.post("/ratio", response_model=RatioReportPayload)
    def ratio(request: RatioRequest) -> RatioReportPayload:
        inst = _instance(request.instance)
        alloc = Allocation.from_lists(request.allocation.bundles, inst.m)
        return _ratio_payload(ratio_of(inst, alloc))

    @app.post("/certify/two-agents", response_model=CertificatePayload)
    def certify_two() -> CertificatePayload:
        return _certificate_payload(certify_lower_bound_n2())

    @app.post("/certify/three-agents", response_model=CertificatePayload)
    def certify_three(request: CertifyN3Request) -> CertificatePayload:
        cert = certify_lower_bound_n3(request.m, budget=request.budget)
        return _certificate_payload(cert)

    @app.post("/sp-test", response_model=SpTestResponse)
    def sp_test(request: SpTestRequest) -> SpTestResponse:
        return _sp_test(request)

    @app.post("/bench", response_model=BenchResponse)
    def bench(request: BenchRequest) -> BenchResponse:
        rows = run_suite(request.suite, seed=request.seed, trials=request.trials)
        return BenchResponse(suite=request.suite, rows=[BenchRow(**r) for r in rows])

    return app


def _instance(payload: InstancePayload) -> Instance:
    return Instance.from_dict(payload.model_dump(exclude_none=True))


def _ratio_payload(report) -> RatioReportPayload:
    return RatioReportPayload(
        per_agent=[FractionPayload.from_ratio(r) for r in report.per_agent],
        worst=FractionPayload.from_ratio(report.worst),
    )


def _certificate_payload(cert) -> CertificatePayload:
    return CertificatePayload(
        bound=FractionPayload.from_ratio(cert.bound),
        enumerated=cert.enumerated,
        wall_time_s=cert.wall_time_s,
        witness=cert.witness,
    )


def _schedule(spec: str | None, n: int, m: int) -> PickSchedule:
    spec = spec or "log"
    if spec == "log":
        return default_schedule(n, m)
    if spec.startswith("const:"):
        r = int(spec.split(":", 1)[1])
        result = constant_ratio_schedule(n, m, r)
        if isinstance(result, Infeasible):
            raise BudgetExceededError(
                f"constant-ratio schedule r={r} covers only {result.capacity} items, need {m}"
            )
        return result
    if spec.startswith("explicit:"):
        quotas = tuple(int(tok) for tok in spec.split(":", 1)[1].split(","))
        if len(quotas) != n:
            raise InvalidInstanceError([f"schedule needs {n} quotas, got {len(quotas)}"])
        if sum(quotas) != m:
            raise InvalidInstanceError([f"schedule quotas must sum to m={m}"])
        return PickSchedule(quotas)
    raise UnknownAlgorithmError(f"unknown schedule spec {spec!r}")


def _sp_test(request: SpTestRequest) -> SpTestResponse:
    mechanism = request.mechanism
    witnesses = []
    searches = 0
    found = 0
    instances = []
    if mechanism == "round-robin" and request.n == 2 and request.m == 4:
        # the classic manipulable profile: agent 2's ranking interleaves
        # agent 1's, and swapping her two cheapest reports pays off
        instances.append(Instance(((1, 2, 3, 4), (3, 2, 4, 1))))
    for t in range(request.trials):
        instances.append(
            gen_random(request.n, request.m, 9, seed=request.seed * 7919 + t)
        )
    for idx, inst in enumerate(instances):
        for agent in range(1, inst.n + 1):
            searches += 1
            result = manipulation_search(
                inst, mechanism, agent, budget=request.budget, seed=request.seed
            )
            if result is not None:
                found += 1
                witnesses.append(
                    ManipulationPayload(
                        instance=InstancePayload(costs=[list(r) for r in inst.costs]),
                        agent=agent,
                        report=list(result.report),
                        truthful_cost=FractionPayload.from_ratio(result.truthful_cost),
                        manipulated_cost=FractionPayload.from_ratio(
                            result.manipulated_cost
                        ),
                    )
                )
    return SpTestResponse(
        mechanism=mechanism,
        n=request.n,
        m=request.m,
        trials=request.trials,
        searches=searches,
        manipulations_found=found,
        witnesses=witnesses[:50],
    )


app = create_app()
