"""Command-line harness: a thin client of the pricing service.

Each subcommand marshals its flags into a service request, posts it (against
an in-process ASGI transport by default, or a remote server via
--server-url), and writes the response as CSV or a table report.

Exit codes: 0 success, 1 tolerance failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any

import httpx

from .experiments import CSV_HEADER, load_default_config, load_table_fixture

_USAGE_EXIT = 2
_TOLERANCE_EXIT = 1

_EXPERIMENT_KEYS = {
    "table": {"tolerance"},
    "converge-atm": {"t_min", "t_max", "points"},
    "converge-otm": {"t_min", "t_max", "points", "strike_rule", "alpha_prime", "theta"},
    "smile": {"theta_min", "theta_max", "theta_step", "thetas", "t_list",
              "expansion_only"},
}


class ConfigError(Exception):
    pass


def _post(path: str, payload: dict, server_url: str | None) -> dict:
    if server_url:
        resp = httpx.post(server_url.rstrip("/") + path, json=payload, timeout=None)
    else:
        from .service import create_app

        async def call() -> httpx.Response:
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://levysmile", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        resp = asyncio.run(call())
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except ValueError:
            detail = resp.text
        raise ConfigError(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _load_config(path: str | None, command: str) -> dict:
    """Merge the shipped defaults with a user config file ({"model": ...,
    "experiment": ...}; unknown experiment keys are rejected)."""
    section = {"converge-atm": "atm", "converge-otm": "otm", "smile": "smile"}.get(command)
    merged: dict[str, Any] = {}
    if section:
        merged = dict(load_default_config(section))
        model = merged.pop("model", None)
        merged = {"model": model, "experiment": merged}
        merged["experiment"].pop("comment", None)
    if path:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        unknown_top = set(user) - {"model", "experiment"}
        if unknown_top:
            raise ConfigError(f"unknown config sections: {sorted(unknown_top)}")
        if "model" in user:
            merged["model"] = user["model"]
        exp = user.get("experiment", {})
        if not isinstance(exp, dict):
            raise ConfigError("experiment section must be an object")
        allowed = _EXPERIMENT_KEYS.get(command, set())
        unknown = set(exp) - allowed
        if unknown:
            raise ConfigError(
                f"unknown experiment keys for {command}: {sorted(unknown)}"
            )
        merged.setdefault("experiment", {}).update(exp)
    return merged


def _load_model(args, config: dict) -> dict:
    if getattr(args, "model", None):
        try:
            with open(args.model) as fh:
                model = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read model file {args.model}: {exc}")
        return model
    model = config.get("model")
    if model is None:
        raise ConfigError("no model given (use --model or a config file)")
    return model


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: list[dict]) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([
            "" if row.get(name) is None else format(row[name], ".12g")
            for name in CSV_HEADER
        ])
    return buf.getvalue()


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config: {model, experiment}")
    parser.add_argument("--model", help="JSON file with the flat model object")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for sampling-based experiments")
    parser.add_argument("--server-url",
                        help="price against a running service instead of in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levysmile",
        description="Short-maturity smile experiments for tempered-stable Levy models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="reprice the validation table")
    _add_common(p)
    p.add_argument("--tol", type=float, default=None,
                   help="relative tolerance (default 1e-4)")

    p = sub.add_parser("converge-atm", help="re-normalised ATM price convergence")
    _add_common(p)
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("converge-otm", help="re-normalised OTM price convergence")
    _add_common(p)
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--strike-rule", choices=["power", "moving"])
    p.add_argument("--alpha-prime", type=float)
    p.add_argument("--theta", type=float)

    for name, extra_help in (("smile", ""), ("approx-quality", " (expansion only)")):
        p = sub.add_parser(name, help=f"implied-volatility smile rows{extra_help}")
        _add_common(p)
        p.add_argument("--theta", type=float, action="append",
                       help="theta grid point (repeatable)")
        p.add_argument("--theta-min", type=float)
        p.add_argument("--theta-max", type=float)
        p.add_argument("--theta-step", type=float)
        p.add_argument("--t", type=float, action="append", dest="t_list",
                       help="maturity (repeatable)")
        if name == "smile":
            p.add_argument("--expansion-only", action="store_true")

    return parser


def _cmd_table(args) -> int:
    config = _load_config(args.config, "table")
    tol = args.tol
    if tol is None:
        tol = config.get("experiment", {}).get("tolerance", 1e-4)
    if not load_table_fixture().get("rows"):
        raise ConfigError("empty table fixture")
    data = _post("/experiments/table", {"tolerance": tol}, args.server_url)
    _write_output(data["report"] + "\n", args.out)
    return 0 if data["passed"] else _TOLERANCE_EXIT


def _grid_args(args, exp: dict) -> dict:
    out = {
        "t_min": args.t_min if args.t_min is not None else exp.get("t_min"),
        "t_max": args.t_max if args.t_max is not None else exp.get("t_max"),
        "points": args.points if args.points is not None else exp.get("points"),
    }
    missing = [k for k, v in out.items() if v is None]
    if missing:
        raise ConfigError(f"missing grid settings: {missing}")
    return out


def _cmd_converge_atm(args) -> int:
    config = _load_config(args.config, "converge-atm")
    payload = {"model": _load_model(args, config)}
    payload.update(_grid_args(args, config.get("experiment", {})))
    data = _post("/experiments/converge-atm", payload, args.server_url)
    _write_output(_rows_to_csv(data["rows"]), args.out)
    return 0


def _cmd_converge_otm(args) -> int:
    config = _load_config(args.config, "converge-otm")
    exp = config.get("experiment", {})
    payload = {"model": _load_model(args, config)}
    payload.update(_grid_args(args, exp))
    rule = args.strike_rule or exp.get("strike_rule")
    if rule is None:
        rule = "moving" if (args.theta is not None) else "power"
    payload["strike_rule"] = rule
    payload["alpha_prime"] = (
        args.alpha_prime if args.alpha_prime is not None else exp.get("alpha_prime")
    )
    payload["theta"] = args.theta if args.theta is not None else exp.get("theta")
    data = _post("/experiments/converge-otm", payload, args.server_url)
    _write_output(_rows_to_csv(data["rows"]), args.out)
    return 0


def _cmd_smile(args, expansion_only: bool) -> int:
    config = _load_config(args.config, "smile")
    exp = config.get("experiment", {})
    if args.theta:
        thetas = list(args.theta)
    elif "thetas" in exp:
        thetas = list(exp["thetas"])
    else:
        lo = args.theta_min if args.theta_min is not None else exp.get("theta_min")
        hi = args.theta_max if args.theta_max is not None else exp.get("theta_max")
        step = args.theta_step if args.theta_step is not None else exp.get("theta_step")
        if lo is None or hi is None or step is None or step <= 0:
            raise ConfigError("smile needs --theta values or a theta range")
        thetas = []
        x = lo
        while x <= hi + 1e-12:
            thetas.append(round(x, 12))
            x += step
    t_list = args.t_list or exp.get("t_list")
    if not t_list:
        raise ConfigError("smile needs at least one maturity (--t)")
    payload = {
        "model": _load_model(args, config),
        "thetas": thetas,
        "t_list": list(t_list),
        "expansion_only": expansion_only,
    }
    data = _post("/experiments/smile", payload, args.server_url)
    if data.get("skipped_quotes"):
        print(
            f"warning: {data['skipped_quotes']} quotes outside arbitrage bounds "
            "emitted without implied_vol",
            file=sys.stderr,
        )
    _write_output(_rows_to_csv(data["rows"]), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "converge-atm":
            return _cmd_converge_atm(args)
        if args.command == "converge-otm":
            return _cmd_converge_otm(args)
        if args.command == "smile":
            return _cmd_smile(args, expansion_only=args.expansion_only)
        if args.command == "approx-quality":
            return _cmd_smile(args, expansion_only=True)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    parser.error(f"unknown command {args.command}")
    return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
