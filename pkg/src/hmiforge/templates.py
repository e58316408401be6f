"""Minimal template engine: `${name}` substitution and `${#each name}` blocks.

Just enough machinery to render human-readable generation reports; blocks
nest, and inside a block the iterated element's bindings shadow outer ones.
"""

from __future__ import annotations

from typing import Union

import re

# A template environment maps names to text or, for repetition blocks,
# to a list of nested environments.
TemplateEnv = dict[str, Union[str, list]]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class TemplateError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _check_env(env: TemplateEnv):
    for name, value in env.items():
        if not _NAME_RE.match(name):
            raise TemplateError("E_TEMPLATE_SYNTAX", f"invalid binding name {name!r}")
        if isinstance(value, list):
            for item in value:
                _check_env(item)


def render_template(template: str, env: TemplateEnv) -> str:
    """Render `template` against `env`; total on well-formed inputs.

    Raises TemplateError (E_TEMPLATE_SYNTAX, E_UNBOUND_PLACEHOLDER) before
    producing any output, never partial text alongside an error.
    """
    _check_env(env)
    out, pos = _render(template, 0, [env], end_at_block_close=False)
    assert pos == len(template)
    return out


def _lookup(scopes: list[TemplateEnv], name: str):
    for scope in reversed(scopes):
        if name in scope:
            return scope[name]
    raise TemplateError("E_UNBOUND_PLACEHOLDER", f"no binding for '{name}'")


def _skip_block(template: str, pos: int) -> int:
    """Scan past a block body to just after its matching ${/each}."""
    depth = 1
    while True:
        nxt = template.find("${", pos)
        if nxt == -1:
            raise TemplateError("E_TEMPLATE_SYNTAX", "unterminated ${#each} block")
        close = template.find("}", nxt)
        if close == -1:
            raise TemplateError("E_TEMPLATE_SYNTAX", "unterminated placeholder")
        directive = template[nxt + 2 : close]
        pos = close + 1
        if directive.startswith("#each"):
            depth += 1
        elif directive == "/each":
            depth -= 1
            if depth == 0:
                return pos


def _render(template: str, pos: int, scopes: list[TemplateEnv], end_at_block_close: bool):
    parts: list[str] = []
    while True:
        nxt = template.find("${", pos)
        if nxt == -1:
            if end_at_block_close:
                raise TemplateError("E_TEMPLATE_SYNTAX", "unterminated ${#each} block")
            parts.append(template[pos:])
            return "".join(parts), len(template)
        parts.append(template[pos:nxt])
        close = template.find("}", nxt)
        if close == -1:
            raise TemplateError("E_TEMPLATE_SYNTAX", "unterminated placeholder")
        directive = template[nxt + 2 : close]
        pos = close + 1
        if directive == "/each":
            if not end_at_block_close:
                raise TemplateError("E_TEMPLATE_SYNTAX", "${/each} without ${#each}")
            return "".join(parts), pos
        if directive.startswith("#each"):
            name = directive[len("#each") :].strip()
            if not _NAME_RE.match(name):
                raise TemplateError(
                    "E_TEMPLATE_SYNTAX", f"bad block header ${{{directive}}}"
                )
            items = _lookup(scopes, name)
            if not isinstance(items, list):
                raise TemplateError(
                    "E_TEMPLATE_SYNTAX", f"'{name}' is not a repetition binding"
                )
            body_start = pos
            end = _skip_block(template, body_start)
            for item in items:
                body, item_end = _render(template, body_start, scopes + [item], True)
                assert item_end == end
                parts.append(body)
            pos = end
            continue
        if not _NAME_RE.match(directive):
            raise TemplateError("E_TEMPLATE_SYNTAX", f"bad placeholder ${{{directive}}}")
        value = _lookup(scopes, directive)
        if isinstance(value, list):
            raise TemplateError(
                "E_TEMPLATE_SYNTAX", f"'{directive}' is a repetition binding"
            )
        parts.append(value)
