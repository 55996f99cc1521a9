"""Command-line entry point.

Exit codes: 0 on success, 1 on a fatal data/load error, 2 when the run
completed but the reviewer rejected the recommendations.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .backends import HttpBackend, OpenAIChatBackend, ScriptedBackend
from .errors import DataLoadError, EngineError
from .runner import EXIT_DATA_ERROR, WorkflowConfig, WorkflowRunner

API_KEY_ENV = "RXMFLOW_API_KEY"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rxmflow",
        description="Run the prescriptive-maintenance workflow on a CSV dataset.",
    )
    parser.add_argument("--data", required=True, help="path to the CSV dataset")
    parser.add_argument(
        "--task", choices=["auto", "classification", "regression", "anomaly"],
        default="auto", help="problem type (default: inferred from the schema)",
    )
    parser.add_argument("--target", help="target column name")
    parser.add_argument(
        "--backend", default="rule",
        help="planner backend: rule, scripted:<file>, http, or openai",
    )
    parser.add_argument("--backend-url", default="http://127.0.0.1:11434",
                        help="base URL for the http/openai backends")
    parser.add_argument("--model-name", default="qwen3:4b",
                        help="model name passed to the backend")
    parser.add_argument("--contamination", default="auto",
                        help="isolation forest contamination: auto or a fraction")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--auto-approve", action="store_true",
                        help="skip the interactive review gate")
    parser.add_argument("--max-steps", type=int, default=10)
    parser.add_argument("--include-routine", action="store_true",
                        help="keep Routine recommendations in the output")
    parser.add_argument("--log-dir", default="logs")
    parser.add_argument("--verbose", action="store_true")
    return parser


def make_backend(args):
    if args.backend == "rule":
        return None
    if args.backend.startswith("scripted:"):
        return ScriptedBackend.from_file(args.backend.split(":", 1)[1])
    if args.backend == "http":
        return HttpBackend(args.backend_url, args.model_name)
    if args.backend == "openai":
        return OpenAIChatBackend(args.backend_url, args.model_name,
                                 api_key_env=API_KEY_ENV)
    raise SystemExit(f"unknown backend {args.backend!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] - %(message)s",
    )
    contamination = args.contamination
    if contamination != "auto":
        try:
            contamination = float(contamination)
        except ValueError:
            raise SystemExit("--contamination must be 'auto' or a fraction")

    config = WorkflowConfig(
        data_path=args.data,
        task=None if args.task == "auto" else (
            "anomaly_detection" if args.task == "anomaly" else args.task
        ),
        target=args.target,
        seed=args.seed,
        contamination=contamination,
        auto_approve=args.auto_approve,
        include_routine=args.include_routine,
        max_steps=args.max_steps,
        log_dir=args.log_dir,
    )
    runner = WorkflowRunner(config, backend=make_backend(args))
    try:
        runner.run()
    except DataLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    print(runner.artifacts.summary_text)
    return runner.artifacts.exit_code


if __name__ == "__main__":
    sys.exit(main())
