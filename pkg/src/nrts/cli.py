"""Operator and developer command line.

Subcommands: ``serve`` (run the HTTP service), ``score`` (offline scoring,
identical output to POST /api/v1/traces), ``gen`` (synthetic trace corpus),
``submit`` / ``stats`` / ``gold`` (protocol clients).

Exit codes: 0 ok, 1 remote/protocol error, 2 local validation error.
Flags default from ``NRTS_``-prefixed environment variables where noted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

from nrts.bundle import BundleError, load_bundle
from nrts.distance import (
    DistanceConfig,
    cost_matrix,
    format_cost_matrix,
    score_payload,
)
from nrts.generator import NOISE_OPS, generate_traces
from nrts.model import validate_trace
from nrts.wire import (
    WireFormatError,
    apply_session_temperature,
    dump_trace_file,
    load_trace_file,
)

OK, REMOTE_ERROR, LOCAL_ERROR = 0, 1, 2


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(f"NRTS_{name}", default)


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def _score_lines(payload: dict) -> list[str]:
    lines = [
        f"distance {payload['distance']:.4f} ({payload['percent_display']}%)"
    ]
    for report in payload["phase_report"]:
        parts = []
        for key in ("actions_on_time", "actions_late", "actions_missing"):
            label = key.removeprefix("actions_")
            value = ",".join(report[key]) if report[key] else "-"
            parts.append(f"{label}={value}")
        lines.append(f"phase {report['phase_id']}: " + " ".join(parts))
    return lines


def cmd_score(args: argparse.Namespace) -> int:
    try:
        gold = load_bundle(args.gold_bundle)
    except BundleError as exc:
        return _fail(f"invalid gold bundle: {exc}", LOCAL_ERROR)
    try:
        trace, session_temperature = load_trace_file(args.trace)
    except (OSError, WireFormatError) as exc:
        return _fail(f"invalid trace file: {exc}", LOCAL_ERROR)
    trace = apply_session_temperature(trace, session_temperature, gold.taxonomy)
    violations = validate_trace(trace, gold)
    if violations:
        for v in violations:
            print(f"{v.where}[{v.index}]: {v.reason}", file=sys.stderr)
        return LOCAL_ERROR
    config = DistanceConfig(alpha=args.alpha, indel_cost=args.indel_cost)
    payload = score_payload(trace, gold, config)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(_score_lines(payload)))
    if args.dump_matrix:
        print(format_cost_matrix(cost_matrix(trace, gold, config)))
    return OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        gold = load_bundle(args.gold_bundle)
    except BundleError as exc:
        return _fail(f"invalid gold bundle: {exc}", LOCAL_ERROR)
    ops = tuple(args.noise_ops.split(",")) if args.noise_ops else NOISE_OPS
    try:
        session_id, generated = generate_traces(
            gold,
            groups=args.groups,
            traces_per_group=args.traces_per_group,
            noise=args.noise,
            seed=args.seed,
            ops=ops,
        )
    except ValueError as exc:
        return _fail(str(exc), LOCAL_ERROR)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for stem, trace in generated:
        dump_trace_file(out_dir / f"{stem}.json", trace)
    print(f"wrote {len(generated)} traces to {out_dir} (session {session_id})")
    return OK


def _print_http_error(response: httpx.Response) -> None:
    print(f"server returned {response.status_code}: {response.text}", file=sys.stderr)


def cmd_submit(args: argparse.Namespace) -> int:
    results = []
    with httpx.Client(timeout=30.0) as client:
        for path in args.traces:
            try:
                body = json.loads(Path(path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                return _fail(f"{path}: {exc}", LOCAL_ERROR)
            if args.session:
                body["session_id"] = args.session
            try:
                response = client.post(
                    f"{args.server_url.rstrip('/')}/api/v1/traces", json=body
                )
            except httpx.HTTPError as exc:
                return _fail(f"{path}: {exc}", REMOTE_ERROR)
            if response.status_code != 200:
                _print_http_error(response)
                return REMOTE_ERROR
            payload = response.json()
            results.append({"trace": str(path), **payload})
            if not args.json:
                print(
                    f"{path}: distance {payload['distance']:.4f} "
                    f"({payload['percent_display']}%) "
                    f"session={payload['session_id']}"
                )
    if args.json:
        print(json.dumps(results, indent=2))
    return OK


def cmd_stats(args: argparse.Namespace) -> int:
    url = f"{args.server_url.rstrip('/')}/api/v1/sessions/{args.session_id}/stats"
    try:
        response = httpx.get(url, timeout=30.0)
    except httpx.HTTPError as exc:
        return _fail(str(exc), REMOTE_ERROR)
    if response.status_code == 404:
        return _fail(f"session {args.session_id} not found", REMOTE_ERROR)
    if response.status_code != 200:
        _print_http_error(response)
        return REMOTE_ERROR
    stats = response.json()
    if args.json:
        print(json.dumps(stats, indent=2))
        return OK
    print(f"{'group':<16}{'traces':>8}  mean_distance")
    for group in stats["per_group"]:
        print(
            f"{group['group_id']:<16}{group['traces']:>8}  "
            f"{group['mean_distance']:.4f}"
        )
    mean = stats["session_mean_distance"]
    if mean is None:
        print("session mean: no traces yet")
    else:
        print(f"session mean: {mean:.4f} ({round(mean * 100)}%)")
    print("per-action mean duration (ms):")
    for action, duration in stats["per_action_mean_duration_ms"].items():
        print(f"  {action:<28}{duration:.1f}")
    return OK


def cmd_gold(args: argparse.Namespace) -> int:
    try:
        gold = load_bundle(args.bundle)
    except BundleError as exc:
        return _fail(f"invalid gold bundle: {exc}", LOCAL_ERROR)
    from nrts.bundle import bundle_to_json

    headers = {}
    if args.admin_token:
        headers["x-admin-token"] = args.admin_token
    try:
        response = httpx.put(
            f"{args.server_url.rstrip('/')}/api/v1/gold",
            json=bundle_to_json(gold),
            headers=headers,
            timeout=30.0,
        )
    except httpx.HTTPError as exc:
        return _fail(str(exc), REMOTE_ERROR)
    if response.status_code != 200:
        _print_http_error(response)
        return REMOTE_ERROR
    print(f"installed gold revision {response.json()['revision']}")
    return OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from nrts.server import ServerConfig, create_app

    host, _, port = args.listen.rpartition(":")
    config = ServerConfig(
        store_dir=Path(args.store_dir),
        gold_dir=Path(args.gold_dir) if args.gold_dir else None,
        alpha=args.alpha,
        indel_cost=args.indel_cost,
        admin_token=args.admin_token or None,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nrts", description="trace capture and scoring platform"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_distance_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--alpha", type=float, default=float(_env("ALPHA", "0.7")))
        p.add_argument(
            "--indel-cost", type=float, default=float(_env("INDEL_COST", "1.0"))
        )

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--listen", default=_env("LISTEN", "127.0.0.1:8080"))
    p.add_argument("--store-dir", default=_env("STORE_DIR"), required=_env("STORE_DIR") is None)
    p.add_argument("--gold-dir", default=_env("GOLD_DIR"))
    p.add_argument("--admin-token", default=_env("ADMIN_TOKEN"))
    p.add_argument("--ui-dir", default=_env("UI_DIR"))
    add_distance_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("score", help="score a trace file offline")
    p.add_argument("gold_bundle")
    p.add_argument("trace")
    p.add_argument("--dump-matrix", action="store_true")
    p.add_argument("--json", action="store_true")
    add_distance_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("gen", help="generate synthetic traces")
    p.add_argument("gold_bundle")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--groups", type=int, default=4)
    p.add_argument("--traces-per-group", type=int, default=3)
    p.add_argument("--noise", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--noise-ops",
        default=None,
        help=f"comma-separated subset of {','.join(NOISE_OPS)}",
    )
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("submit", help="submit trace files to a server")
    p.add_argument("server_url")
    p.add_argument("traces", nargs="+")
    p.add_argument("--session", default=None, help="override session id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_submit)

    p = sub.add_parser("stats", help="fetch session statistics")
    p.add_argument("server_url")
    p.add_argument("session_id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gold", help="install a gold bundle on a server")
    p.add_argument("server_url")
    p.add_argument("bundle")
    p.add_argument("--admin-token", default=_env("ADMIN_TOKEN"))
    p.set_defaults(func=cmd_gold)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
