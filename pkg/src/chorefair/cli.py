"""Thin command-line client for the chorefair service.

Every compute command marshals its arguments into a request, sends it to
the service (spun up in process unless --server points at a running one),
and renders the response. File reading and writing happen client side; the
service only computes.

Exit codes: 0 success, 2 validation error, 3 budget or size limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .service.app import LIMIT_CODES


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _ClientError as exc:
        print(json.dumps(exc.payload, sort_keys=True), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "io_error", "detail": str(exc)}), file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chorefair",
        description="Chore allocation: solve instances, compute maximin shares, "
        "test strategyproofness, and run benchmark suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="allocate an instance and report ratios")
    solve.add_argument("--instance", required=True, help="instance JSON file")
    solve.add_argument(
        "--algorithm",
        required=True,
        help="sesqui-rr | round-robin | pattern:<a1,a2,...> | consecutive-pick | random-decline",
    )
    solve.add_argument("--pattern", help="comma-separated agent pattern (with pattern algorithm)")
    solve.add_argument("--schedule", help="log | const:<r> | explicit:<a1,...,an>")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--out", help="write the allocation JSON here")
    solve.add_argument("--server", help="base URL of a running service")
    solve.set_defaults(handler=_cmd_solve)

    mms = sub.add_parser("mms", help="exact maximin share of every agent")
    mms.add_argument("--instance", required=True)
    mms.add_argument("--server")
    mms.set_defaults(handler=_cmd_mms)

    sp = sub.add_parser("sp-test", help="search for profitable misreports")
    sp.add_argument("--mechanism", required=True,
                    help="round-robin | sesqui-rr | consecutive-pick | random-decline")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--budget", type=int, default=40320)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--out", help="write manipulation witnesses JSON here")
    sp.add_argument("--server")
    sp.set_defaults(handler=_cmd_sp_test)

    bench = sub.add_parser("bench", help="run a benchmark suite to CSV")
    bench.add_argument("--suite", required=True,
                       choices=["grid-n2", "grid-n3", "random-n4plus", "lowerbounds"])
    bench.add_argument("--out", required=True, help="CSV output path")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--trials", type=int, default=100)
    bench.add_argument("--server")
    bench.set_defaults(handler=_cmd_bench)

    serve = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8080)
    serve.set_defaults(handler=_cmd_serve)

    return parser


class _ClientError(Exception):
    def __init__(self, payload: dict, exit_code: int):
        super().__init__(payload.get("error", "error"))
        self.payload = payload
        self.exit_code = exit_code


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette's in-process client still runs fine on httpx 1.x
        warnings.filterwarnings("ignore", message="Using `httpx` with `starlette")
        from starlette.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _post(args, path: str, payload: dict) -> dict:
    with _client(getattr(args, "server", None)) as client:
        response = client.post(path, json=payload)
    try:
        body = response.json()
    except ValueError:
        body = {"error": "request_failed", "detail": response.text}
    if response.status_code != 200:
        if isinstance(body, dict) and "error" in body:
            code = 3 if body["error"] in LIMIT_CODES else 2
            raise _ClientError(body, code)
        raise _ClientError({"error": "request_failed", "detail": body}, 2)
    return body


def _load_instance_payload(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        raise _ClientError({"error": "invalid_instance", "detail": f"malformed JSON: {exc}"}, 2)
    if not isinstance(payload, dict) or "costs" not in payload:
        raise _ClientError(
            {"error": "invalid_instance", "detail": "instance file must contain 'costs'"}, 2
        )
    return payload


def _fraction_str(frac: dict) -> str:
    if frac["den"] == 0:
        return "inf"
    return f"{frac['num']}/{frac['den']} ({frac['decimal']})"


def _cmd_solve(args) -> int:
    instance = _load_instance_payload(args.instance)
    body = _post(
        args,
        "/solve",
        {
            "instance": instance,
            "algorithm": args.algorithm,
            "pattern": args.pattern,
            "schedule": args.schedule,
            "seed": args.seed,
        },
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(body["allocation"], handle, indent=2)
            handle.write("\n")
    print(f"algorithm: {body['algorithm']}")
    if body.get("schedule"):
        print(f"schedule: {','.join(str(q) for q in body['schedule'])}")
    if body.get("schedule_bound"):
        print(f"schedule ratio bound: {_fraction_str(body['schedule_bound'])}")
    for agent, frac in enumerate(body["ratios"]["per_agent"], start=1):
        print(f"agent {agent}: ratio {_fraction_str(frac)}")
    print(f"worst: {_fraction_str(body['ratios']['worst'])}")
    return 0


def _cmd_mms(args) -> int:
    instance = _load_instance_payload(args.instance)
    body = _post(args, "/mms", {"instance": instance})
    print("agent  mms  average-bound  largest-item")
    for agent, (value, bounds) in enumerate(zip(body["values"], body["bounds"]), start=1):
        avg = bounds["average"]
        avg_str = f"{avg['num']}/{avg['den']}"
        print(f"{agent:>5}  {value:>3}  {avg_str:>13}  {bounds['largest_item']:>12}")
    return 0


def _cmd_sp_test(args) -> int:
    body = _post(
        args,
        "/sp-test",
        {
            "mechanism": args.mechanism,
            "n": args.n,
            "m": args.m,
            "budget": args.budget,
            "seed": args.seed,
            "trials": args.trials,
        },
    )
    print(
        f"mechanism {body['mechanism']} n={body['n']} m={body['m']}: "
        f"{body['manipulations_found']} profitable misreports "
        f"in {body['searches']} searches"
    )
    for witness in body["witnesses"][:5]:
        print(
            f"  agent {witness['agent']}: cost "
            f"{_fraction_str(witness['truthful_cost'])} -> "
            f"{_fraction_str(witness['manipulated_cost'])} "
            f"via report {witness['report']}"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(body["witnesses"], handle, indent=2)
            handle.write("\n")
    return 0


def _cmd_bench(args) -> int:
    body = _post(
        args,
        "/bench",
        {"suite": args.suite, "seed": args.seed, "trials": args.trials},
    )
    fields = ["instance_id", "algorithm", "worst_num", "worst_den", "worst_decimal"]
    out_path = Path(args.out)
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        for row in body["rows"]:
            writer.writerow({k: row[k] for k in fields})
    print(f"{len(body['rows'])} rows -> {out_path}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("chorefair.service.app:app", host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
