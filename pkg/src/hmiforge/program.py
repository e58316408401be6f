"""The generated HMI program: configuration-pruned, fully resolved, and
serialized canonically so repeated generation is byte-identical.

A program is closed-world: every target resolves inside it and every
action has a binding, so the runtime never consults the source models.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class Effect:
    statusbox: str
    value: str


@dataclass(frozen=True)
class PTarget:
    kind: str  # menu | dialog | action | back
    name: Optional[str] = None


@dataclass(frozen=True)
class PEntry:
    label: str
    target: PTarget


@dataclass(frozen=True)
class PStatusLine:
    statusbox: str


@dataclass
class Screen:
    items: list  # PEntry | PStatusLine, declaration order

    @property
    def entries(self) -> list:
        return [i for i in self.items if isinstance(i, PEntry)]


@dataclass
class PButton:
    label: str
    target: PTarget


@dataclass
class PDialog:
    text: str
    buttons: list


@dataclass
class PStatusBox:
    label: str
    init: str


@dataclass
class HmiProgram:
    name: str
    configuration: list  # sorted feature names
    start: str
    screens: dict  # name -> Screen
    dialogs: dict  # name -> PDialog
    statusboxes: dict  # name -> PStatusBox
    bindings: dict  # action name -> list of Effect

    def validate(self) -> list:
        """Closed-world invariants; returns human-readable problems."""
        problems = []
        if self.start not in self.screens:
            problems.append(f"start screen '{self.start}' missing")
        for sname, screen in self.screens.items():
            if not screen.entries:
                problems.append(f"screen '{sname}' has no entries")
            for item in screen.items:
                if isinstance(item, PEntry):
                    problems.extend(self._check_target(sname, item.target))
                elif item.statusbox not in self.statusboxes:
                    problems.append(
                        f"screen '{sname}' shows unknown status box '{item.statusbox}'"
                    )
        for dname, dialog in self.dialogs.items():
            if not dialog.buttons:
                problems.append(f"dialog '{dname}' has no buttons")
            for b in dialog.buttons:
                problems.extend(self._check_target(dname, b.target))
        for action, effects in self.bindings.items():
            for eff in effects:
                if eff.statusbox not in self.statusboxes:
                    problems.append(
                        f"action '{action}' sets unknown status box '{eff.statusbox}'"
                    )
        return problems

    def _check_target(self, owner: str, t: PTarget) -> list:
        if t.kind == "menu" and t.name not in self.screens:
            return [f"'{owner}' targets unknown screen '{t.name}'"]
        if t.kind == "dialog" and t.name not in self.dialogs:
            return [f"'{owner}' targets unknown dialog '{t.name}'"]
        if t.kind == "action" and t.name not in self.bindings:
            return [f"'{owner}' targets unbound action '{t.name}'"]
        return []


# ---------------------------------------------------------------------------
# Canonical JSON serialization


def _target_obj(t: PTarget):
    if t.kind == "back":
        return {"kind": "back"}
    return {"kind": t.kind, "name": t.name}


def to_json_obj(p: HmiProgram) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "name": p.name,
        "configuration": list(p.configuration),
        "start": p.start,
        "screens": {
            name: {
                "items": [
                    {
                        "kind": "entry",
                        "label": i.label,
                        "target": _target_obj(i.target),
                    }
                    if isinstance(i, PEntry)
                    else {"kind": "status", "statusbox": i.statusbox}
                    for i in screen.items
                ]
            }
            for name, screen in p.screens.items()
        },
        "dialogs": {
            name: {
                "text": d.text,
                "buttons": [
                    {"label": b.label, "target": _target_obj(b.target)}
                    for b in d.buttons
                ],
            }
            for name, d in p.dialogs.items()
        },
        "statusboxes": {
            name: {"label": s.label, "init": s.init}
            for name, s in p.statusboxes.items()
        },
        "bindings": {
            action: [{"statusbox": e.statusbox, "value": e.value} for e in effects]
            for action, effects in p.bindings.items()
        },
    }


def emit_text(p: HmiProgram) -> str:
    """Canonical form: 2-space indent, keys sorted, trailing newline."""
    return json.dumps(to_json_obj(p), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class ProgramFormatError(Exception):
    pass


def _target_from(obj) -> PTarget:
    return PTarget(obj["kind"], obj.get("name"))


def from_json_obj(obj: dict) -> HmiProgram:
    try:
        if obj.get("formatVersion") != FORMAT_VERSION:
            raise ProgramFormatError(
                f"unsupported formatVersion {obj.get('formatVersion')!r}"
            )
        screens = {
            name: Screen(
                [
                    PEntry(i["label"], _target_from(i["target"]))
                    if i["kind"] == "entry"
                    else PStatusLine(i["statusbox"])
                    for i in s["items"]
                ]
            )
            for name, s in obj["screens"].items()
        }
        dialogs = {
            name: PDialog(
                d["text"],
                [PButton(b["label"], _target_from(b["target"])) for b in d["buttons"]],
            )
            for name, d in obj["dialogs"].items()
        }
        statusboxes = {
            name: PStatusBox(s["label"], s["init"])
            for name, s in obj["statusboxes"].items()
        }
        bindings = {
            action: [Effect(e["statusbox"], e["value"]) for e in effects]
            for action, effects in obj["bindings"].items()
        }
        return HmiProgram(
            obj["name"],
            list(obj["configuration"]),
            obj["start"],
            screens,
            dialogs,
            statusboxes,
            bindings,
        )
    except (KeyError, TypeError) as e:
        raise ProgramFormatError(f"malformed program: {e}") from e


def load_text(text: str) -> HmiProgram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProgramFormatError(f"not valid JSON: {e}") from e
    return from_json_obj(obj)
