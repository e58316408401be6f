"""Command-line entry point: check, config, generate, simulate, serve.

Exit codes: 0 success, 1 model/configuration errors (diagnostics on
stderr), 2 usage or IO problems.  Standard output carries only results.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import feature_model as fmod
from .diagnostics import render_all
from .pipeline import PipelineInputs, run_pipeline
from .program import ProgramFormatError, load_text
from .runtime import INPUT_EVENTS, init_session, render_view, step
from .server import SessionApp, make_server


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmiforge",
        description="workbench for menu-driven HMI product lines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse and cross-check the three inputs")
    _model_flags(check)
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.set_defaults(func=cmd_check)

    config = sub.add_parser("config", help="reason about feature configurations")
    config.add_argument("action", choices=("validate", "count", "list"))
    config.add_argument("--fm", required=True, help="feature model file")
    config.add_argument("--cfg", help="configuration file (validate only)")
    config.add_argument("--format", choices=("text", "json"), default="text")
    config.set_defaults(func=cmd_config)

    generate = sub.add_parser("generate", help="generate a pruned HMI program")
    _model_flags(generate)
    generate.add_argument("--cfg", required=True, help="configuration file")
    generate.add_argument("--out", required=True, help="output program file")
    generate.set_defaults(func=cmd_generate)

    simulate = sub.add_parser("simulate", help="run a program against a trace")
    simulate.add_argument("--program", required=True, help="generated program file")
    simulate.add_argument("--trace", required=True, help="one event keyword per line")
    simulate.set_defaults(func=cmd_simulate)

    serve = sub.add_parser("serve", help="host the session protocol and UI")
    _model_flags(serve)
    serve.add_argument("--port", type=int, default=8787)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ui-dir", help="static UI bundle directory")
    serve.set_defaults(func=cmd_serve)
    return parser


def _model_flags(p: argparse.ArgumentParser):
    p.add_argument("--fm", required=True, help="feature model file")
    p.add_argument("--hmi", required=True, help="menu model file")
    p.add_argument("--handlers", required=True, help="handler manifest file")


def _require_readable(*paths) -> bool:
    ok = True
    for path in paths:
        if path is not None and not Path(path).is_file():
            print(f"hmiforge: no such file: {path}", file=sys.stderr)
            ok = False
    return ok


def _emit_diags(diags, fmt="text"):
    if fmt == "json":
        objs = []
        for d in diags:
            obj = {"severity": d.severity, "code": d.code, "message": d.message}
            if d.span is not None:
                obj["file"] = d.span.file
                obj["line"] = d.span.start_line
                obj["col"] = d.span.start_col
            objs.append(obj)
        print(json.dumps(objs, indent=2))
    else:
        sys.stderr.write(render_all(diags))


def cmd_check(args) -> int:
    if not _require_readable(args.fm, args.hmi, args.handlers):
        return 2
    result = run_pipeline(
        PipelineInputs(args.fm, args.hmi, args.handlers), through="crosscheck"
    )
    _emit_diags(result.diagnostics, args.format)
    return 0 if result.ok else 1


def _load_feature_model(path: str):
    text = Path(path).read_text(encoding="utf-8")
    fm, diags = fmod.parse_feature_model(text, path)
    if fm is None:
        _emit_diags(diags)
        return None
    return fm


def cmd_config(args) -> int:
    if args.action == "validate" and args.cfg is None:
        print("hmiforge: config validate needs --cfg", file=sys.stderr)
        return 2
    if not _require_readable(args.fm, args.cfg):
        return 2
    fm = _load_feature_model(args.fm)
    if fm is None:
        return 1

    if args.action == "validate":
        cfg, diags = fmod.parse_configuration(
            Path(args.cfg).read_text(encoding="utf-8"), args.cfg
        )
        if cfg is None:
            _emit_diags(diags)
            return 1
        verdict = fmod.is_valid_configuration(fm, cfg)
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "valid": verdict.valid,
                        "violations": [
                            {"code": v.code, "message": v.message}
                            for v in verdict.violations
                        ],
                    },
                    indent=2,
                )
            )
        else:
            print("valid" if verdict.valid else "invalid")
            _emit_diags(verdict.violations)
        return 0 if verdict.valid else 1

    try:
        configs = fmod.enumerate_configurations(fm)
    except fmod.ModelTooLargeError as e:
        print(f"hmiforge: {e}", file=sys.stderr)
        return 2
    if args.action == "count":
        print(len(configs))
    else:
        for cfg in configs:
            print(", ".join(sorted(cfg.selected)))
    return 0


def cmd_generate(args) -> int:
    if not _require_readable(args.fm, args.hmi, args.handlers, args.cfg):
        return 2
    result = run_pipeline(
        PipelineInputs(args.fm, args.hmi, args.handlers, args.cfg)
    )
    _emit_diags(result.diagnostics)
    if not result.ok or "hmi.program" not in result.artifacts:
        return 1
    try:
        out = Path(args.out)
        out.write_text(result.artifacts["hmi.program"], encoding="utf-8")
        out.with_suffix(out.suffix + ".report.txt").write_text(
            result.artifacts["hmi.report"], encoding="utf-8"
        )
    except OSError as e:
        print(f"hmiforge: cannot write {args.out}: {e}", file=sys.stderr)
        return 2
    return 0


def cmd_simulate(args) -> int:
    if not _require_readable(args.program, args.trace):
        return 2
    try:
        program = load_text(Path(args.program).read_text(encoding="utf-8"))
    except ProgramFormatError as e:
        print(f"hmiforge: {e}", file=sys.stderr)
        return 2
    events = []
    for lineno, raw in enumerate(
        Path(args.trace).read_text(encoding="utf-8").splitlines(), start=1
    ):
        word = raw.strip()
        if not word or word.startswith("#"):
            continue
        if word not in INPUT_EVENTS:
            print(
                f"hmiforge: {args.trace}:{lineno}: unknown event keyword '{word}'",
                file=sys.stderr,
            )
            return 2
        events.append(word)
    state = init_session(program)
    for n, ev in enumerate(events, start=1):
        outcome = step(state, ev, program)
        state = outcome.state
        view = render_view(state, program)
        cursor = state.dialog_cursor if state.mode == "dialog" else state.cursor
        print(f"{n} {ev} {outcome.transition} | {view['title']} [cursor={cursor}]")
    return 0


def cmd_serve(args) -> int:
    if not _require_readable(args.fm, args.hmi, args.handlers):
        return 2
    result = run_pipeline(
        PipelineInputs(args.fm, args.hmi, args.handlers), through="crosscheck"
    )
    _emit_diags(result.diagnostics)
    if not result.ok:
        return 1
    app = SessionApp(result.fm, result.hm, result.manifest)
    ui_dir = args.ui_dir or _default_ui_dir()
    try:
        httpd = make_server(app, args.host, args.port, ui_dir)
    except OSError as e:
        print(f"hmiforge: cannot bind {args.host}:{args.port}: {e}", file=sys.stderr)
        return 2
    print(f"hmiforge: serving on http://{args.host}:{args.port}/", file=sys.stderr)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def _default_ui_dir():
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


if __name__ == "__main__":
    sys.exit(main())
