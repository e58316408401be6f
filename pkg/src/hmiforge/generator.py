"""Cross-model checking, configuration-driven pruning and code generation.

The handler manifest stands in for handwritten action code; consistency
between both models and the manifest is checked before anything is
generated.  Generation prunes the menu model under one valid feature
configuration and emits a closed-world program for the runtime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import menu_model as mm
from .diagnostics import (
    Diagnostic,
    SourceSpan,
    error,
    has_errors,
    sorted_diagnostics,
    warning,
)
from .feature_model import (
    Configuration,
    FeatureModel,
    eval_feature_expr,
    is_valid_configuration,
)
from .parsing import ParseError, TokenStream
from .program import (
    Effect,
    HmiProgram,
    PButton,
    PDialog,
    PEntry,
    PStatusBox,
    PStatusLine,
    PTarget,
    Screen,
    emit_text,
)
from .templates import render_template


@dataclass
class ManifestEffect:
    statusbox: str
    value: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Handler:
    name: str
    effects: list
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class HandlerManifest:
    handlers: dict  # action name -> Handler, declaration order


def parse_handler_manifest(text: str, file: str = "<handlers>"):
    """`handlers { action <name> { set <statusbox> = "<value>" }* }`"""
    try:
        ts = TokenStream(text, file)
        ts.expect_keyword("handlers")
        ts.expect_punct("{")
        parsed = []
        while ts.at_keyword("action"):
            ts.advance()
            name = ts.expect_ident("action name")
            ts.expect_punct("{")
            effects = []
            while ts.at_keyword("set"):
                ts.advance()
                box = ts.expect_ident("status box name")
                ts.expect_punct("=")
                value = ts.expect_string("value")
                effects.append(
                    ManifestEffect(box.value, value.value, span=box.span(file))
                )
            ts.expect_punct("}")
            parsed.append(Handler(name.value, effects, span=name.span(file)))
        ts.expect_punct("}")
        ts.expect_eof()
    except ParseError as e:
        return None, [e.diagnostic]

    diags: list[Diagnostic] = []
    handlers = {}
    for h in parsed:
        if h.name in handlers:
            diags.append(
                error(
                    "E_DUPLICATE_HANDLER",
                    f"action '{h.name}' defined more than once",
                    h.span,
                )
            )
            continue
        handlers[h.name] = h
    if diags:
        return None, diags
    return HandlerManifest(handlers), []


def pretty_print_manifest(m: HandlerManifest) -> str:
    from .lexer import escape_string

    out = ["handlers {"]
    for h in m.handlers.values():
        out.append(f"  action {h.name} {{")
        for e in h.effects:
            out.append(f"    set {e.statusbox} = {escape_string(e.value)}")
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Cross-model checks


def cross_check(fm: FeatureModel, hm: mm.HmiModel, manifest: HandlerManifest) -> list:
    """Consistency between both models and the handwritten-code manifest."""
    diags: list[Diagnostic] = []

    def check_presence(presence, span):
        if presence is None:
            return
        for var in sorted(presence.variables()):
            if var not in fm.features:
                diags.append(
                    error(
                        "E_UNKNOWN_FEATURE_REF",
                        f"presence condition names unknown feature '{var}'",
                        span,
                    )
                )

    for menu in hm.menus.values():
        check_presence(menu.presence, menu.span)
        for item in menu.items:
            if isinstance(item, mm.Entry):
                check_presence(item.presence, item.span)
    for dialog in hm.dialogs.values():
        check_presence(dialog.presence, dialog.span)

    targeted = set()
    for owner, target in hm.all_targets():
        if target.kind == "action":
            targeted.add(target.name)
            if target.name not in manifest.handlers:
                diags.append(
                    error(
                        "E_UNKNOWN_ACTION",
                        f"no handler for action '{target.name}'",
                        target.span,
                    )
                )
    for h in manifest.handlers.values():
        for eff in h.effects:
            if eff.statusbox not in hm.statusboxes:
                diags.append(
                    error(
                        "E_UNKNOWN_STATUSBOX",
                        f"handler '{h.name}' sets undeclared status box "
                        f"'{eff.statusbox}'",
                        eff.span,
                    )
                )
        if h.name not in targeted:
            diags.append(
                warning(
                    "W_UNUSED_HANDLER",
                    f"handler '{h.name}' is never targeted",
                    h.span,
                )
            )
    return sorted_diagnostics(diags)


# ---------------------------------------------------------------------------
# Pruning


@dataclass
class GenReport:
    pruned_menus: int = 0
    pruned_dialogs: int = 0
    pruned_entries: int = 0
    warnings: list = field(default_factory=list)


def prune(hm: mm.HmiModel, fm: FeatureModel, cfg: Configuration):
    """Remove elements whose presence is false under cfg and strip the
    conditions from survivors.  Returns (pruned model, report, diagnostics);
    the model is None iff errors were produced."""
    diags: list[Diagnostic] = []
    report = GenReport()
    sel = cfg.selected

    def alive(presence) -> bool:
        return presence is None or eval_feature_expr(presence, sel)

    menus: dict[str, mm.Menu] = {}
    for menu in hm.menus.values():
        if not alive(menu.presence):
            report.pruned_menus += 1
            report.pruned_entries += len(menu.entries)
            continue
        items = []
        for item in menu.items:
            if isinstance(item, mm.Entry):
                if alive(item.presence):
                    items.append(mm.Entry(item.label, item.target, None, span=item.span))
                else:
                    report.pruned_entries += 1
            else:
                items.append(item)
        if not any(isinstance(i, mm.Entry) for i in items):
            # every entry pruned away: the menu cannot be operated
            report.pruned_menus += 1
            continue
        menus[menu.name] = mm.Menu(menu.name, items, None, span=menu.span)

    dialogs: dict[str, mm.Dialog] = {}
    for dialog in hm.dialogs.values():
        if not alive(dialog.presence):
            report.pruned_dialogs += 1
            continue
        dialogs[dialog.name] = mm.Dialog(
            dialog.name, dialog.text, dialog.buttons, None, span=dialog.span
        )

    if hm.start not in menus:
        diags.append(
            error(
                "E_START_PRUNED",
                f"start menu '{hm.start}' is not present under this configuration",
                hm.menus[hm.start].span,
            )
        )
        return None, report, sorted_diagnostics(diags)

    pruned = mm.HmiModel(hm.name, hm.for_model, hm.start, menus, dialogs, hm.statusboxes)

    for owner, target in pruned.all_targets():
        removed = (target.kind == "menu" and target.name not in menus) or (
            target.kind == "dialog" and target.name not in dialogs
        )
        if removed:
            original = (
                hm.menus.get(target.name)
                if target.kind == "menu"
                else hm.dialogs.get(target.name)
            )
            where = (
                f" (declared at {original.span.file}:{original.span.start_line}:"
                f"{original.span.start_col})"
                if original is not None and original.span is not None
                else ""
            )
            diags.append(
                error(
                    "E_PRUNED_TARGET",
                    f"target {target.kind} '{target.name}' was pruned by the "
                    f"configuration{where}",
                    target.span,
                )
            )
    if has_errors(diags):
        return None, report, sorted_diagnostics(diags)

    reach = mm.reachability(pruned)
    for name, reached in reach.items():
        if reached or name not in menus:
            continue
        menu = menus.pop(name)
        report.pruned_menus += 1
        report.pruned_entries += len(menu.entries)
        report.warnings.append(
            warning(
                "W_PRUNED_UNREACHABLE",
                f"menu '{name}' is unreachable under this configuration",
                menu.span,
            )
        )
    for name, reached in reach.items():
        if not reached and name in dialogs:
            dialogs.pop(name)
            report.pruned_dialogs += 1
            report.warnings.append(
                warning(
                    "W_PRUNED_UNREACHABLE",
                    f"dialog '{name}' is unreachable under this configuration",
                    hm.dialogs[name].span,
                )
            )
    return pruned, report, sorted_diagnostics(diags)


# ---------------------------------------------------------------------------
# Generation


REPORT_TEMPLATE = """\
HMI program ${name}
configuration: ${config}
start: ${start}
screens:
${#each screens}  - ${screen_name} (${entry_count} entries)
${/each}pruned: ${pruned_menus} menus, ${pruned_dialogs} dialogs, ${pruned_entries} entries
"""


@dataclass
class GenResult:
    program: Optional[HmiProgram]
    report: Optional[GenReport]
    text: Optional[str]  # canonical program serialization
    report_text: Optional[str]
    diagnostics: list

    @property
    def ok(self) -> bool:
        return self.program is not None


def generate(
    fm: FeatureModel,
    hm: mm.HmiModel,
    manifest: HandlerManifest,
    cfg: Configuration,
) -> GenResult:
    """Validate, cross-check, prune, emit — gated like the pipeline."""
    diags = list(mm.check_hmi_model(hm))
    if has_errors(diags):
        return GenResult(None, None, None, None, sorted_diagnostics(diags))

    diags += cross_check(fm, hm, manifest)
    verdict = is_valid_configuration(fm, cfg)
    if not verdict.valid:
        codes = ", ".join(sorted({v.code for v in verdict.violations}))
        diags.append(
            error(
                "E_INVALID_CONFIGURATION",
                f"configuration is invalid ({codes})",
            )
        )
        diags += verdict.violations
    if has_errors(diags):
        return GenResult(None, None, None, None, sorted_diagnostics(diags))

    pruned, report, prune_diags = prune(hm, fm, cfg)
    diags += prune_diags
    if pruned is None:
        return GenResult(None, report, None, None, sorted_diagnostics(diags))
    diags += report.warnings

    program = _build_program(pruned, manifest, cfg)
    bad = program.validate()
    assert not bad, f"generated program violates its invariants: {bad}"
    text = emit_text(program)
    report_text = _render_report(program, report)
    return GenResult(program, report, text, report_text, sorted_diagnostics(diags))


def _build_program(
    pruned: mm.HmiModel, manifest: HandlerManifest, cfg: Configuration
) -> HmiProgram:
    def conv_target(t: mm.Target) -> PTarget:
        return PTarget(t.kind, t.name)

    screens = {
        name: Screen(
            [
                PEntry(i.label, conv_target(i.target))
                if isinstance(i, mm.Entry)
                else PStatusLine(i.statusbox)
                for i in menu.items
            ]
        )
        for name, menu in pruned.menus.items()
    }
    dialogs = {
        name: PDialog(d.text, [PButton(b.label, conv_target(b.target)) for b in d.buttons])
        for name, d in pruned.dialogs.items()
    }
    statusboxes = {
        name: PStatusBox(s.label, s.init) for name, s in pruned.statusboxes.items()
    }
    used_actions = sorted(
        {t.name for _, t in pruned.all_targets() if t.kind == "action"}
    )
    bindings = {
        action: [
            Effect(e.statusbox, e.value) for e in manifest.handlers[action].effects
        ]
        for action in used_actions
    }
    name = pruned.name if cfg.name is None else f"{pruned.name}-{cfg.name}"
    return HmiProgram(
        name,
        sorted(cfg.selected),
        pruned.start,
        screens,
        dialogs,
        statusboxes,
        bindings,
    )


def _render_report(program: HmiProgram, report: GenReport) -> str:
    env = {
        "name": program.name,
        "config": ", ".join(program.configuration),
        "start": program.start,
        "screens": [
            {"screen_name": name, "entry_count": str(len(screen.entries))}
            for name, screen in program.screens.items()
        ],
        "pruned_menus": str(report.pruned_menus),
        "pruned_dialogs": str(report.pruned_dialogs),
        "pruned_entries": str(report.pruned_entries),
    }
    return render_template(REPORT_TEMPLATE, env)
