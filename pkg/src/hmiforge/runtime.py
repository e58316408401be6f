"""Deterministic simulator for generated HMI programs.

A four-key input abstraction (up, down, select, back) drives a screen
stack plus cursor; actions apply their declarative effects to the status
store.  step is total over valid states, so scripted traces always run
to completion.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .program import HmiProgram, PEntry

INPUT_EVENTS = ("up", "down", "select", "back")


class BadProgramError(Exception):
    code = "E_BAD_PROGRAM"

    def __init__(self, problems: list):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class SimState:
    nav_stack: tuple  # screen names, bottom = start
    cursor: int  # index into the current screen's entries
    mode: str  # "menu" | "dialog"
    active_dialog: Optional[str]
    dialog_cursor: int
    status: dict  # statusbox name -> current text
    step_count: int

    @property
    def current_screen(self) -> str:
        return self.nav_stack[-1]


@dataclass(frozen=True)
class StepOutcome:
    state: SimState
    effects: tuple
    transition: str


def init_session(program: HmiProgram) -> SimState:
    problems = program.validate()
    if problems:
        raise BadProgramError(problems)
    return SimState(
        nav_stack=(program.start,),
        cursor=0,
        mode="menu",
        active_dialog=None,
        dialog_cursor=0,
        status={name: sb.init for name, sb in program.statusboxes.items()},
        step_count=0,
    )


def check_state(state: SimState, program: HmiProgram):
    """Assert the SimState invariants against its program."""
    assert state.nav_stack, "empty navigation stack"
    assert state.nav_stack[0] == program.start
    for name in state.nav_stack:
        assert name in program.screens, f"unknown screen {name}"
    screen = program.screens[state.current_screen]
    assert 0 <= state.cursor < len(screen.entries)
    assert (state.mode == "dialog") == (state.active_dialog is not None)
    if state.mode == "dialog":
        dialog = program.dialogs[state.active_dialog]
        assert 0 <= state.dialog_cursor < len(dialog.buttons)
    assert set(state.status) == set(program.statusboxes)


def _bump(state: SimState, **changes) -> SimState:
    return replace(state, step_count=state.step_count + 1, **changes)


def _fire_target(state: SimState, target, program: HmiProgram):
    """Common target semantics for entries and dialog buttons; the caller
    has already closed any dialog for menu/action/back targets."""
    if target.kind == "menu":
        return (
            _bump(
                state,
                nav_stack=state.nav_stack + (target.name,),
                cursor=0,
                mode="menu",
                active_dialog=None,
                dialog_cursor=0,
            ),
            (),
            f"pushed:{target.name}",
        )
    if target.kind == "dialog":
        return (
            _bump(state, mode="dialog", active_dialog=target.name, dialog_cursor=0),
            (),
            f"dialog:{target.name}",
        )
    if target.kind == "action":
        effects = tuple(program.bindings[target.name])
        status = dict(state.status)
        for eff in effects:
            status[eff.statusbox] = eff.value
        return (
            _bump(state, status=status, mode="menu", active_dialog=None, dialog_cursor=0),
            effects,
            f"action:{target.name}",
        )
    # back target: pop unless at the bottom of the stack
    return _pop(state)


def _pop(state: SimState):
    if len(state.nav_stack) == 1:
        return (
            _bump(state, mode="menu", active_dialog=None, dialog_cursor=0),
            (),
            "noop",
        )
    stack = state.nav_stack[:-1]
    return (
        _bump(
            state,
            nav_stack=stack,
            cursor=0,
            mode="menu",
            active_dialog=None,
            dialog_cursor=0,
        ),
        (),
        f"popped:{stack[-1]}",
    )


def step(state: SimState, ev: str, program: HmiProgram) -> StepOutcome:
    """Apply one input event; total over valid states, step_count always
    increments by exactly one."""
    assert ev in INPUT_EVENTS, ev

    if state.mode == "dialog":
        dialog = program.dialogs[state.active_dialog]
        n = len(dialog.buttons)
        if ev == "up":
            new = _bump(state, dialog_cursor=(state.dialog_cursor - 1) % n)
            return StepOutcome(new, (), f"cursor:{new.dialog_cursor}")
        if ev == "down":
            new = _bump(state, dialog_cursor=(state.dialog_cursor + 1) % n)
            return StepOutcome(new, (), f"cursor:{new.dialog_cursor}")
        if ev == "back":
            new = _bump(state, mode="menu", active_dialog=None, dialog_cursor=0)
            return StepOutcome(new, (), "dialog-closed")
        # select: fire the highlighted button's target
        target = dialog.buttons[state.dialog_cursor].target
        new, effects, transition = _fire_target(state, target, program)
        return StepOutcome(new, effects, transition)

    screen = program.screens[state.current_screen]
    entries = screen.entries
    n = len(entries)
    if ev == "up":
        new = _bump(state, cursor=(state.cursor - 1) % n)
        return StepOutcome(new, (), f"cursor:{new.cursor}")
    if ev == "down":
        new = _bump(state, cursor=(state.cursor + 1) % n)
        return StepOutcome(new, (), f"cursor:{new.cursor}")
    if ev == "back":
        new, effects, transition = _pop(state)
        return StepOutcome(new, effects, transition)
    target = entries[state.cursor].target
    new, effects, transition = _fire_target(state, target, program)
    return StepOutcome(new, effects, transition)


def run_trace(program: HmiProgram, trace: list):
    """Left-fold of step from init_session; returns (final state, transcript)."""
    state = init_session(program)
    transcript = []
    for ev in trace:
        outcome = step(state, ev, program)
        transcript.append(outcome)
        state = outcome.state
    return state, transcript


# ---------------------------------------------------------------------------
# View model


def render_view(state: SimState, program: HmiProgram) -> dict:
    """Display abstraction shared by headless tests and the served UI.

    Exactly one highlighted element: a line in menu mode, a button in
    dialog mode."""
    screen = program.screens[state.current_screen]
    lines = []
    entry_index = 0
    for item in screen.items:
        if isinstance(item, PEntry):
            lines.append(
                {
                    "text": item.label,
                    "kind": "entry",
                    "highlighted": state.mode == "menu"
                    and entry_index == state.cursor,
                }
            )
            entry_index += 1
        else:
            sb = program.statusboxes[item.statusbox]
            lines.append(
                {
                    "text": f"{sb.label}: {state.status[item.statusbox]}",
                    "kind": "status",
                    "highlighted": False,
                }
            )
    dialog = None
    if state.mode == "dialog":
        d = program.dialogs[state.active_dialog]
        dialog = {
            "text": d.text,
            "buttons": [
                {"label": b.label, "highlighted": i == state.dialog_cursor}
                for i, b in enumerate(d.buttons)
            ],
        }
    return {
        "title": state.current_screen,
        "lines": lines,
        "dialog": dialog,
        "config": list(program.configuration),
    }
