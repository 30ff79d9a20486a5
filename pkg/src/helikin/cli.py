"""Batch command-line front end.

A thin client over the HTTP service: flags (optionally overridden by a
key=value config file) become a request payload, the response's "data"
array lands on disk as CSV or JSON, and the exit code reports validation
(2) or convergence (3) failures.  By default the service runs in-process;
--server targets a remote instance instead.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import json
import sys
from pathlib import Path

import httpx

from . import __version__

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NONCONVERGENCE = 3

COMMANDS = ("harmonics", "flux", "cocycle", "chern", "formfactor",
            "oscillator", "hydrogen", "selftest")


def _parse_config_value(raw: str):
    raw = raw.strip()
    if "," in raw:
        return [_parse_config_value(x) for x in raw.split(",")]
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    return raw


def read_config(path: str) -> dict:
    """Parse a plain-text key=value config file ('#' starts a comment)."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = _parse_config_value(value)
    return out


def write_config(config: dict, path: str):
    """Serialize a flat config so read_config reproduces it."""
    lines = []
    for key, value in config.items():
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n")


def _post_in_process(path: str, payload: dict) -> httpx.Response:
    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://helikin.local",
                                     timeout=None) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _post_remote(server: str, path: str, payload: dict) -> httpx.Response:
    with httpx.Client(base_url=server, timeout=None) as client:
        return client.post(path, json=payload)


def call_service(command: str, payload: dict, server: str | None = None) -> httpx.Response:
    path = f"/v1/{command}"
    if server:
        return _post_remote(server, path, payload)
    return _post_in_process(path, payload)


def write_csv(rows: list[dict], path: str):
    with open(path, "w", newline="") as fh:
        if not rows:
            return
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})


def write_json(body: dict, path: str):
    Path(path).write_text(json.dumps(body, indent=2) + "\n")


def _add_common(sp):
    sp.add_argument("--config", help="key=value file overriding defaults")
    sp.add_argument("--out", choices=("csv", "json"), default="csv",
                    help="artifact format (default csv)")
    sp.add_argument("--output", help="artifact path (default <command>.<ext>)")
    sp.add_argument("--server", help="remote service URL (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helikin",
        description="Momentum-space gauge kinematics experiments")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("harmonics", help="monopole harmonic tables and Gram matrices")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--lmax", type=float)
    sp.add_argument("--ntheta", type=int, dest="n_theta")
    sp.add_argument("--nphi", type=int, dest="n_phi")
    sp.add_argument("--table", choices=("values", "gram"))
    _add_common(sp)

    sp = subs.add_parser("flux", help="monopole flux through spheres")
    sp.add_argument("--g", type=float)
    sp.add_argument("--radii", type=lambda s: [float(x) for x in s.split(",")])
    sp.add_argument("--ntheta", type=int, dest="n_theta")
    sp.add_argument("--nphi", type=int, dest="n_phi")
    _add_common(sp)

    sp = subs.add_parser("cocycle", help="associativity phases of random tetrahedra")
    sp.add_argument("--eg", type=float)
    sp.add_argument("--tetrahedra", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--scale", type=float)
    _add_common(sp)

    sp = subs.add_parser("chern", help="first Chern numbers of the helicity sectors")
    sp.add_argument("--sector", choices=("plus", "minus", "both"))
    sp.add_argument("--ntheta", type=int, dest="n_theta")
    sp.add_argument("--nphi", type=int, dest="n_phi")
    _add_common(sp)

    sp = subs.add_parser("formfactor", help="form factors over a direction grid")
    sp.add_argument("--kind", choices=("overlap", "phase", "screening"))
    sp.add_argument("--p", type=float)
    sp.add_argument("--theta-p", type=float, dest="theta_p")
    sp.add_argument("--phi-p", type=float, dest="phi_p")
    sp.add_argument("--q", type=float)
    sp.add_argument("--ntheta", type=int, dest="n_theta")
    sp.add_argument("--nphi", type=int, dest="n_phi")
    sp.add_argument("--steps", type=int)
    _add_common(sp)

    sp = subs.add_parser("oscillator", help="helicity oscillator levels, analytic vs numeric")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--lmax", type=float)
    sp.add_argument("--vmax", type=int)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--pmax", type=float)
    _add_common(sp)

    sp = subs.add_parser("hydrogen", help="screened momentum-space hydrogen spectra")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--Z", type=float, dest="z")
    sp.add_argument("--l", type=float)
    sp.add_argument("--count", type=int)
    sp.add_argument("--radial", type=int)
    sp.add_argument("--scale", type=float)
    sp.add_argument("--ntheta", type=int, dest="n_theta")
    sp.add_argument("--nphi", type=int, dest="n_phi")
    sp.add_argument("--lam-max", type=int, dest="lam_max")
    sp.add_argument("--m", type=float)
    sp.add_argument("--splittings", action="store_true", default=None)
    _add_common(sp)

    sp = subs.add_parser("selftest", help="run the invariant suite")
    _add_common(sp)

    return parser


_COMMON_KEYS = {"command", "config", "out", "output", "server"}


def build_payload(args: argparse.Namespace) -> dict:
    payload = {}
    if args.config:
        payload.update(read_config(args.config))
    for key, value in vars(args).items():
        if key in _COMMON_KEYS or value is None:
            continue
        payload[key] = value
    return payload


def _summarize(command: str, body: dict):
    meta = body.get("meta", {})
    rows = body.get("data", [])
    print(f"helikin {command}: {len(rows)} rows")
    for key in ("max_gram_deviation", "fraction_quantized", "max_abs_error",
                "max_convergence_estimate", "hermiticity_residual", "all_passed"):
        if key in meta:
            print(f"  {key} = {meta[key]}")
    if command == "selftest":
        for row in rows:
            print(f"  [{row['status']}] {row['check']}: {row['detail']}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command

    try:
        payload = build_payload(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        response = call_service(command, payload, server=args.server)
    except httpx.HTTPError as exc:
        print(f"error: service unreachable: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE

    if response.status_code == 422:
        print(f"error: invalid request: {response.text}", file=sys.stderr)
        return EXIT_VALIDATION
    if response.status_code == 409:
        print(f"error: numerical non-convergence: {response.text}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    if response.status_code != 200:
        print(f"error: service returned {response.status_code}: {response.text}",
              file=sys.stderr)
        return EXIT_NONCONVERGENCE

    body = response.json()
    ext = "csv" if args.out == "csv" else "json"
    path = args.output or f"{command}.{ext}"
    if args.out == "csv":
        write_csv(body.get("data", []), path)
    else:
        write_json(body, path)
    _summarize(command, body)
    print(f"wrote {path}")

    if command == "selftest" and not body["meta"].get("all_passed", False):
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
