"""Command-line client for the factorkit service.

The CLI only parses flags, builds a request, POSTs it to the service
(in-process by default, or to --server URL), and renders the response as
CSV or JSON.  Exit codes: 0 success, 2 invalid input, 3 regime refused.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Optional

import httpx

from .graphs import read_graph_file


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write output to this file instead of stdout")
    p.add_argument("--server", default=None, help="URL of a running service; default is in-process")
    p.add_argument("--seed", type=int, default=0, help="master seed (uint64); randomized commands only")
    p.add_argument("--workers", type=int, default=1)


def _spec_payload(text: str) -> dict:
    head, _, tail = text.partition(":")
    try:
        return {"n": int(head), "degrees": [int(x) for x in tail.split(",")]}
    except ValueError:
        raise SystemExit(_fail(f"cannot parse degree spec {text!r} (expected N:d0,d1,...)", 2))


def _degrees_arg(text: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise SystemExit(_fail(f"cannot parse degree list {text!r}", 2))


def _graph_payload(path: str) -> dict:
    g = read_graph_file(path)
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="factorkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("asym", help="evaluate a closed-form asymptotic")
    p.add_argument("--formula", choices=("rprime", "regular", "mcleod", "disjoint", "multi", "join"),
                   default="rprime")
    p.add_argument("--spec", help="degree spec N:d0,d1,...")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--degrees", help="comma-separated degree list")
    p.add_argument("--d1", type=int)
    p.add_argument("--d2", type=int)
    _common_flags(p)

    p = sub.add_parser("exact", help="exact counts")
    p.add_argument("--kind", choices=("regular", "factorisations", "matchings"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--spec")
    p.add_argument("--method", choices=("auto", "dfs", "memoized"), default="auto")
    _common_flags(p)

    p = sub.add_parser("mc", help="Monte Carlo estimators")
    p.add_argument("--mode", choices=("multi", "disjoint", "tail"), default="multi")
    p.add_argument("--n", type=int)
    p.add_argument("--degrees")
    p.add_argument("--d", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--graph", help="graph file (graph6 or edge list) for D")
    p.add_argument("--graph2", help="graph file for H")
    _common_flags(p)

    p = sub.add_parser("switch", help="exact switching level tables")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--graph")
    p.add_argument("--graph2")
    p.add_argument("--moves", action="store_true", help="also total forward/reverse moves per level")
    _common_flags(p)

    p = sub.add_parser("bounds", help="summation-lemma sandwich bounds")
    p.add_argument("--Z", type=int)
    p.add_argument("--A", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--c-hat", dest="c_hat", type=float)
    p.add_argument("--demo", action="store_true")
    _common_flags(p)

    p = sub.add_parser("figure", help="partial 1-factorisation ratio table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("auto", "dfs", "memoized"), default="auto")
    _common_flags(p)

    p = sub.add_parser("compare", help="exact count vs closed form for one spec")
    p.add_argument("--spec", required=True)
    _common_flags(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8351)

    return ap


def _request_for(args: argparse.Namespace) -> tuple:
    cmd = args.command
    if cmd == "asym":
        body = {
            "formula": args.formula,
            "spec": _spec_payload(args.spec) if args.spec else None,
            "n": args.n, "d": args.d, "k": args.k, "h": args.h,
            "degrees": _degrees_arg(args.degrees) if args.degrees else None,
            "d1": args.d1, "d2": args.d2,
        }
    elif cmd == "exact":
        body = {
            "kind": args.kind, "n": args.n, "d": args.d, "k": args.k,
            "spec": _spec_payload(args.spec) if args.spec else None,
            "method": args.method, "workers": args.workers,
        }
    elif cmd == "mc":
        body = {
            "mode": args.mode, "n": args.n,
            "degrees": _degrees_arg(args.degrees) if args.degrees else None,
            "d": args.d, "h": args.h, "trials": args.trials,
            "seed": args.seed, "workers": args.workers,
            "graph": _graph_payload(args.graph) if args.graph else None,
            "graph2": _graph_payload(args.graph2) if args.graph2 else None,
        }
    elif cmd == "switch":
        body = {
            "n": args.n, "d": args.d, "h": args.h,
            "graph": _graph_payload(args.graph) if args.graph else None,
            "graph2": _graph_payload(args.graph2) if args.graph2 else None,
            "moves": args.moves,
        }
    elif cmd == "bounds":
        body = {"Z": args.Z, "A": args.A, "B": args.B, "c_hat": args.c_hat, "demo": args.demo}
    elif cmd == "figure":
        body = {"n": args.n, "method": args.method, "workers": args.workers}
    elif cmd == "compare":
        body = {"spec": _spec_payload(args.spec), "workers": args.workers}
    else:  # pragma: no cover
        raise AssertionError(cmd)
    return f"/v1/{cmd}", body


def _post(path: str, body: dict, server: Optional[str]):
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            resp = client.post(path, json=body)
            return resp.status_code, resp.json()

    async def run():
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://factorkit.local", timeout=None
        ) as client:
            resp = await client.post(path, json=body)
            return resp.status_code, resp.json()

    return asyncio.run(run())


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, float):
        s = repr(v)
    else:
        s = str(v)
    if "," in s or '"' in s or "\n" in s:
        s = '"' + s.replace('"', '""') + '"'
    return s


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True) + "\n"
    lines = ["# config " + json.dumps(payload["config"], sort_keys=True)]
    lines.append(",".join(payload["columns"]))
    for row in payload["rows"]:
        lines.append(",".join(_csv_cell(v) for v in row))
    if payload.get("summary") is not None:
        lines.append("# summary " + json.dumps(payload["summary"], sort_keys=True))
    return "\n".join(lines) + "\n"


def _fail(message: str, code: int) -> int:
    print(f"factorkit: error: {message}", file=sys.stderr)
    return code


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    path, body = _request_for(args)
    try:
        status, payload = _post(path, body, args.server)
    except httpx.HTTPError as exc:
        return _fail(f"cannot reach service: {exc}", 1)

    if status != 200:
        detail = payload.get("detail") if isinstance(payload, dict) else None
        if isinstance(detail, dict):
            message = detail.get("message", str(detail))
        else:
            message = str(detail)
        if status in (400, 422):
            return _fail(message, 2)
        if status == 409:
            return _fail(message, 3)
        return _fail(f"HTTP {status}: {message}", 1)

    payload["config"] = {
        **payload.get("config", {}),
        "format": args.format,
        "out": args.out,
    }
    text = render(payload, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
