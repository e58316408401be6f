"""The menu-diagram DSL: menus, dialogs, status boxes and navigation.

Elements may carry presence conditions over the governing feature model;
a model describes the whole product line and is pruned per configuration
by the generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, SourceSpan, error, warning
from .feature_model import FeatureExpr, parse_expr
from .lexer import escape_string
from .parsing import ParseError, TokenStream


@dataclass
class Target:
    kind: str  # menu | dialog | action | back
    name: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def to_text(self) -> str:
        return self.kind if self.kind == "back" else f"{self.kind} {self.name}"


@dataclass
class Entry:
    label: str
    target: Target
    presence: Optional[FeatureExpr] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class StatusRef:
    statusbox: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Menu:
    name: str
    items: list  # Entry | StatusRef, declaration order
    presence: Optional[FeatureExpr] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def entries(self) -> list:
        return [i for i in self.items if isinstance(i, Entry)]

    @property
    def child_nodes(self):
        return self.items


@dataclass
class Button:
    label: str
    target: Target
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Dialog:
    name: str
    text: str
    buttons: list
    presence: Optional[FeatureExpr] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def child_nodes(self):
        return self.buttons


@dataclass
class StatusBox:
    name: str
    label: str
    init: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class HmiModel:
    name: str
    for_model: str
    start: str
    menus: dict  # name -> Menu
    dialogs: dict  # name -> Dialog
    statusboxes: dict  # name -> StatusBox

    @property
    def child_nodes(self):
        return (
            list(self.menus.values())
            + list(self.dialogs.values())
            + list(self.statusboxes.values())
        )

    def all_targets(self):
        """(owner element, target) pairs across menus and dialogs."""
        for menu in self.menus.values():
            for item in menu.items:
                if isinstance(item, Entry):
                    yield item, item.target
        for dialog in self.dialogs.values():
            for button in dialog.buttons:
                yield button, button.target


# ---------------------------------------------------------------------------
# Parsing


def parse_hmi_model(text: str, file: str = "<hmi>"):
    """Parse the menu-diagram notation; returns (model, diagnostics)."""
    try:
        ts = TokenStream(text, file)
        ts.expect_keyword("hmi")
        name = ts.expect_ident("model name").value
        ts.expect_keyword("for")
        for_model = ts.expect_ident("feature model name").value
        ts.expect_punct("{")
        ts.expect_keyword("start")
        start_tok = ts.expect_ident("start menu name")
        elements = []
        while not ts.at_punct("}"):
            elements.append(_parse_element(ts))
        ts.expect_punct("}")
        ts.expect_eof()
    except ParseError as e:
        return None, [e.diagnostic]

    diags: list[Diagnostic] = []
    menus, dialogs, statusboxes = {}, {}, {}
    taken = {}
    for elem in elements:
        if elem.name in taken:
            diags.append(
                error(
                    "E_DUPLICATE_NAME",
                    f"name '{elem.name}' already used by another element",
                    elem.span,
                )
            )
            continue
        taken[elem.name] = elem
        if isinstance(elem, Menu):
            menus[elem.name] = elem
        elif isinstance(elem, Dialog):
            dialogs[elem.name] = elem
        else:
            statusboxes[elem.name] = elem
    if start_tok.value not in menus:
        diags.append(
            error(
                "E_NO_START",
                f"start menu '{start_tok.value}' is not declared",
                start_tok.span(file),
            )
        )
    for menu in menus.values():
        if not menu.entries:
            diags.append(
                error(
                    "E_SYNTAX",
                    f"menu '{menu.name}' has no selectable entry",
                    menu.span,
                )
            )
    if diags:
        return None, diags
    return HmiModel(name, for_model, start_tok.value, menus, dialogs, statusboxes), []


def _parse_presence(ts: TokenStream) -> Optional[FeatureExpr]:
    if ts.at_keyword("when"):
        ts.advance()
        return parse_expr(ts)
    return None


def _parse_target(ts: TokenStream) -> Target:
    tok = ts.peek()
    if ts.at_keyword("back"):
        ts.advance()
        return Target("back", span=ts.span(tok))
    for kind in ("menu", "dialog", "action"):
        if ts.at_keyword(kind):
            ts.advance()
            name = ts.expect_ident(f"{kind} name")
            return Target(kind, name.value, span=name.span(ts.file))
    ts.fail("expected a target ('menu', 'dialog', 'action' or 'back')")


def _parse_element(ts: TokenStream):
    if ts.at_keyword("menu"):
        kw = ts.advance()
        name = ts.expect_ident("menu name")
        presence = _parse_presence(ts)
        ts.expect_punct("{")
        items = []
        while not ts.at_punct("}"):
            if ts.at_keyword("entry"):
                etok = ts.advance()
                label = ts.expect_string("entry label")
                if not label.value:
                    ts.fail("entry label must be non-empty", label)
                epresence = _parse_presence(ts)
                ts.expect_punct("->")
                target = _parse_target(ts)
                items.append(
                    Entry(label.value, target, epresence, span=etok.span(ts.file))
                )
            elif ts.at_keyword("show"):
                ts.advance()
                ref = ts.expect_ident("status box name")
                items.append(StatusRef(ref.value, span=ref.span(ts.file)))
            else:
                ts.fail("expected 'entry' or 'show'")
        ts.expect_punct("}")
        return Menu(name.value, items, presence, span=name.span(ts.file))
    if ts.at_keyword("dialog"):
        kw = ts.advance()
        name = ts.expect_ident("dialog name")
        presence = _parse_presence(ts)
        ts.expect_punct("{")
        ts.expect_keyword("text")
        text = ts.expect_string("dialog text")
        buttons = []
        while ts.at_keyword("button"):
            btok = ts.advance()
            label = ts.expect_string("button label")
            ts.expect_punct("->")
            target = _parse_target(ts)
            buttons.append(Button(label.value, target, span=btok.span(ts.file)))
        ts.expect_punct("}")
        if not buttons:
            ts.fail("dialog needs at least one button", name)
        return Dialog(name.value, text.value, buttons, presence, span=name.span(ts.file))
    if ts.at_keyword("statusbox"):
        kw = ts.advance()
        name = ts.expect_ident("status box name")
        ts.expect_punct("{")
        ts.expect_keyword("label")
        label = ts.expect_string("status box label")
        if not label.value:
            ts.fail("status box label must be non-empty", label)
        ts.expect_keyword("init")
        init = ts.expect_string("initial value")
        ts.expect_punct("}")
        return StatusBox(name.value, label.value, init.value, span=name.span(ts.file))
    ts.fail("expected 'menu', 'dialog' or 'statusbox'")


# ---------------------------------------------------------------------------
# Context conditions


def check_hmi_model(hm: HmiModel) -> list:
    """Intra-model checks: targets resolve (action names excluded, they
    live in the handler manifest), status refs resolve, and everything is
    reachable from start when presence conditions are ignored."""
    diags: list[Diagnostic] = []
    for owner, target in hm.all_targets():
        if target.kind == "menu" and target.name not in hm.menus:
            diags.append(
                error(
                    "E_UNRESOLVED_TARGET",
                    f"menu '{target.name}' is not declared",
                    target.span,
                )
            )
        elif target.kind == "dialog" and target.name not in hm.dialogs:
            diags.append(
                error(
                    "E_UNRESOLVED_TARGET",
                    f"dialog '{target.name}' is not declared",
                    target.span,
                )
            )
    for menu in hm.menus.values():
        for item in menu.items:
            if isinstance(item, StatusRef) and item.statusbox not in hm.statusboxes:
                diags.append(
                    error(
                        "E_UNRESOLVED_TARGET",
                        f"status box '{item.statusbox}' is not declared",
                        item.span,
                    )
                )
    for name, elem in reachability(hm).items():
        if not elem:
            which = hm.menus.get(name) or hm.dialogs[name]
            kind = "menu" if name in hm.menus else "dialog"
            diags.append(
                warning(
                    "W_UNREACHABLE",
                    f"{kind} '{name}' is not reachable from start '{hm.start}'",
                    which.span,
                )
            )
    return diags


def reachability(hm: HmiModel) -> dict:
    """name -> reachable-from-start, over menus and dialogs, ignoring
    presence conditions."""
    reach = {name: False for name in list(hm.menus) + list(hm.dialogs)}
    stack = [hm.start] if hm.start in hm.menus else []
    while stack:
        name = stack.pop()
        if reach.get(name):
            continue
        reach[name] = True
        if name in hm.menus:
            targets = [i.target for i in hm.menus[name].entries]
        else:
            targets = [b.target for b in hm.dialogs[name].buttons]
        for t in targets:
            if t.kind in ("menu", "dialog") and t.name in reach and not reach[t.name]:
                stack.append(t.name)
    return reach


# ---------------------------------------------------------------------------
# Pretty printing


def pretty_print(hm: HmiModel) -> str:
    """Canonical text: one item per line, 2-space indent; re-parses to a
    structurally equal model."""
    out = [f"hmi {hm.name} for {hm.for_model} {{"]
    out.append(f"  start {hm.start}")
    for menu in hm.menus.values():
        out.append(f"  menu {menu.name}{_when(menu.presence)} {{")
        for item in menu.items:
            if isinstance(item, Entry):
                out.append(
                    f"    entry {escape_string(item.label)}{_when(item.presence)}"
                    f" -> {item.target.to_text()}"
                )
            else:
                out.append(f"    show {item.statusbox}")
        out.append("  }")
    for dialog in hm.dialogs.values():
        out.append(f"  dialog {dialog.name}{_when(dialog.presence)} {{")
        out.append(f"    text {escape_string(dialog.text)}")
        for b in dialog.buttons:
            out.append(f"    button {escape_string(b.label)} -> {b.target.to_text()}")
        out.append("  }")
    for sb in hm.statusboxes.values():
        out.append(
            f"  statusbox {sb.name} {{ label {escape_string(sb.label)} "
            f"init {escape_string(sb.init)} }}"
        )
    out.append("}")
    return "\n".join(out) + "\n"


def _when(presence: Optional[FeatureExpr]) -> str:
    return f" when {presence.to_text()}" if presence is not None else ""
