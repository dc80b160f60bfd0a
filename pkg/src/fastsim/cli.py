"""Thin command-line client for the estimator harness.

Subcommands mirror the service endpoints and share the same config models:

* ``fast run <config.json>``      run an experiment, write artifacts
* ``fast oracle <config.json>``   exact-diagonalization values only
* ``fast scaling <sweep.json>``   circuit-count scaling study
* ``fast serve``                  start the HTTP service (uvicorn)

By default commands execute in-process; ``--server URL`` posts the config
to a running service instead and writes the returned artifacts locally,
producing byte-identical files either way.

Exit codes: 0 success, 1 validation error, 2 capacity error, 3 oracle
comparison failure (with ``--check``).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_experiment_config, load_sweep_config
from .errors import CapacityError, FastsimError, ValidationError
from .harness import (
    oracle_correlations,
    rows_to_csv,
    run_experiment,
    scaling_study,
    write_scaling,
)
from .mapping import MappingKind

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CAPACITY = 2
EXIT_CHECK_FAILED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fast",
        description="Shadow-tomography estimation of dynamical correlation functions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment config")
    run_p.add_argument("config", help="experiment config JSON file")
    run_p.add_argument("--out", help="output directory (overrides config output_path)")
    run_p.add_argument(
        "--check",
        action="store_true",
        help="exit 3 unless the within-eps fraction reaches the configured threshold",
    )
    run_p.add_argument("--server", help="POST to a running service instead of running locally")

    oracle_p = sub.add_parser("oracle", help="compute exact oracle values")
    oracle_p.add_argument("config", help="experiment config JSON file")
    oracle_p.add_argument("--out", help="output directory")
    oracle_p.add_argument("--server", help="POST to a running service instead")

    scaling_p = sub.add_parser("scaling", help="run a circuit-count scaling study")
    scaling_p.add_argument("sweep", help="sweep config JSON file")
    scaling_p.add_argument("--out", help="output directory")
    scaling_p.add_argument("--server", help="POST to a running service instead")

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    return parser


def _post(server: str, endpoint: str, payload: dict) -> dict:
    import httpx

    response = httpx.post(f"{server.rstrip('/')}{endpoint}", json=payload, timeout=3600.0)
    if response.status_code != 200:
        body = response.json()
        kind = body.get("error_kind", "validation")
        detail = body.get("detail", response.text)
        if kind == "capacity":
            raise CapacityError(detail)
        raise ValidationError(detail)
    return response.json()


def _write(out_dir: Path, named_texts: dict[str, str]):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in named_texts.items():
        (out_dir / name).write_text(text)


def cmd_run(args) -> int:
    config = load_experiment_config(args.config)
    if args.out:
        config = config.model_copy(update={"output_path": args.out})
    if args.server:
        payload = json.loads(config.model_copy(update={"output_path": None}).model_dump_json())
        body = _post(args.server, "/run", payload)
        report = body["report"]
        if config.output_path:
            log_lines = ["protocol,t,shots,circuits,wall_seconds"] + [
                f"{l['protocol']},{l['t']:.12e},{l['shots']},{l['circuits']},{l['wall_seconds']:.6f}"
                for l in body["run_log"]
            ]
            _write(
                Path(config.output_path),
                {
                    "results.csv": body["results_csv"],
                    "oracle.csv": body["oracle_csv"],
                    "results.json": body["results_json"],
                    "report.json": json.dumps(report, indent=2, sort_keys=True),
                    "run_log.csv": "\n".join(log_lines) + "\n",
                },
            )
    else:
        artifacts = run_experiment(config)
        report = artifacts.report
    print(
        f"entries={report['entries']} within_eps={report['within_eps']} "
        f"fraction={report['fraction_within_eps']:.4f} max_abs_error={report['max_abs_error']:.4e}"
    )
    if args.check and report["fraction_within_eps"] < config.check_fraction:
        print(
            f"check failed: fraction {report['fraction_within_eps']:.4f} "
            f"< required {config.check_fraction}",
            file=sys.stderr,
        )
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_oracle(args) -> int:
    config = load_experiment_config(args.config)
    out = args.out or config.output_path
    if args.server:
        payload = json.loads(config.model_copy(update={"output_path": None}).model_dump_json())
        body = _post(args.server, "/oracle", payload)
        csv_text = body["oracle_csv"]
        energy = body["ground_energy"]
    else:
        result = oracle_correlations(
            config.model, MappingKind.parse(config.mapping), config.request, config.times
        )
        csv_text = rows_to_csv(result.rows)
        energy = result.ground_energy
    print(f"ground_energy={energy:.12e}")
    if out:
        _write(Path(out), {"oracle.csv": csv_text})
    return EXIT_OK


def cmd_scaling(args) -> int:
    sweep = load_sweep_config(args.sweep)
    out = args.out or sweep.output_path
    if args.server:
        payload = json.loads(sweep.model_copy(update={"output_path": None}).model_dump_json())
        body = _post(args.server, "/scaling", payload)
        slopes = body["slopes"]
        if out:
            _write(
                Path(out),
                {
                    "scaling.csv": body["scaling_csv"],
                    "scaling.json": json.dumps(
                        {"rows": body["rows"], "slopes": slopes}, indent=2, sort_keys=True
                    ),
                },
            )
    else:
        report = scaling_study(sweep)
        slopes = report.slopes
        if out:
            write_scaling(report, Path(out))
    for key, info in sorted(slopes.items()):
        expected = info.get("expected")
        expected_text = "-" if expected is None else f"{expected:.1f}"
        print(
            f"{key}: strategy={info['strategy']} slope={info['slope']:.3f} "
            f"expected={expected_text} prediction_exact={info['prediction_exact']}"
        )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "oracle": cmd_oracle,
        "scaling": cmd_scaling,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValidationError, FastsimError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
