"""Operator CLI: run the server, replay demo scenarios, score surveys.

Exit codes: 0 success, 1 invariant/assertion failure, 2 usage or setup error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import SurveySection
from .survey import (
    IncompleteDataError,
    SurveyFormatError,
    aggregate_survey,
    read_responses_csv,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sous-chef",
        description="Cooking assistant service tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", type=str, help="path to a JSON config file")
    serve.add_argument("--host", type=str, default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8017)

    demo = sub.add_parser("demo", help="replay a scripted scenario against the mock provider")
    demo.add_argument("--scenario", type=str, required=True,
                      help="bundled scenario name (golden_path, allergen_block) or a file path")
    demo.add_argument("--fixtures", type=str,
                      help="fixture directory (defaults to the bundled set)")

    survey = sub.add_parser("survey", help="aggregate Likert survey scores from a CSV")
    survey.add_argument("--input", type=str, required=True, help="responses CSV")
    survey.add_argument("--round", type=int, required=True, choices=(1, 2, 3))
    survey.add_argument("--section", type=str, required=True,
                        choices=("background", "usability"))
    return parser


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    try:
        config = ServiceConfig.from_file(args.config) if args.config else ServiceConfig()
        app = create_app(config)
    except (OSError, ValueError) as exc:
        print(f"setup error: {exc}", file=sys.stderr)
        return 2
    # Background tick keeps timer expiry independent of client polling.
    import threading
    import time

    ctx = app.state.ctx

    def _tick():
        while True:
            time.sleep(1.0)
            ctx.timers.tick()

    threading.Thread(target=_tick, daemon=True).start()
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_demo(args) -> int:
    from .demo import run_demo

    return run_demo(args.scenario, fixtures_dir=args.fixtures)


def cmd_survey(args) -> int:
    path = Path(args.input)
    if not path.is_file():
        print(f"setup error: no such file {path}", file=sys.stderr)
        return 2
    section = SurveySection(args.section)
    try:
        responses = read_responses_csv(path)
        matching = [r for r in responses
                    if r.round == args.round and r.section is section]
        report = aggregate_survey(matching, args.round, section)
    except (SurveyFormatError, IncompleteDataError) as exc:
        print(f"survey error: {exc}", file=sys.stderr)
        return 1
    print(f"round {report.round} {report.section.value}: "
          f"{report.n_participants} participants, "
          f"{len(report.per_question_mean)} questions")
    for question_id in sorted(report.per_question_mean):
        print(f"  {question_id}: {report.per_question_mean[question_id]:.3f}")
    print(f"section mean: {report.section_mean:.3f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"serve": cmd_serve, "demo": cmd_demo, "survey": cmd_survey}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
