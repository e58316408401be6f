"""The feature-diagram DSL.

A feature model is a tree of features (mandatory / optional children,
xor alternative groups) plus requires/excludes cross-tree constraints.
A configuration is a set of selected features; validity is a verdict
computed from seven local rules, and desk-scale models can be enumerated
exhaustively as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, SourceSpan, error
from .parsing import ParseError, TokenStream

GROUP_KINDS = ("mandatory", "optional", "xor")

ENUMERATION_CAP = 20


class ModelTooLargeError(Exception):
    code = "E_TOO_LARGE"


# ---------------------------------------------------------------------------
# Feature expressions (presence-condition language)


@dataclass(frozen=True)
class FeatureExpr:
    def eval(self, selected: frozenset) -> bool:
        raise NotImplementedError

    def variables(self) -> frozenset:
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def _prec(self) -> int:
        raise NotImplementedError

    def _child_text(self, child: "FeatureExpr") -> str:
        text = child.to_text()
        if child._prec() < self._prec():
            return f"({text})"
        return text


@dataclass(frozen=True)
class Var(FeatureExpr):
    name: str

    def eval(self, selected):
        return self.name in selected

    def variables(self):
        return frozenset({self.name})

    def to_text(self):
        return self.name

    def _prec(self):
        return 3


@dataclass(frozen=True)
class Not(FeatureExpr):
    operand: FeatureExpr

    def eval(self, selected):
        return not self.operand.eval(selected)

    def variables(self):
        return self.operand.variables()

    def to_text(self):
        return "!" + self._child_text(self.operand)

    def _prec(self):
        return 3


@dataclass(frozen=True)
class And(FeatureExpr):
    operands: tuple

    def eval(self, selected):
        return all(o.eval(selected) for o in self.operands)

    def variables(self):
        return frozenset().union(*(o.variables() for o in self.operands))

    def to_text(self):
        return " & ".join(self._child_text(o) for o in self.operands)

    def _prec(self):
        return 2


@dataclass(frozen=True)
class Or(FeatureExpr):
    operands: tuple

    def eval(self, selected):
        return any(o.eval(selected) for o in self.operands)

    def variables(self):
        return frozenset().union(*(o.variables() for o in self.operands))

    def to_text(self):
        return " | ".join(self._child_text(o) for o in self.operands)

    def _prec(self):
        return 1


def parse_expr(ts: TokenStream) -> FeatureExpr:
    """orE := andE ("|" andE)* ; andE := notE ("&" notE)* ;
    notE := "!" notE | "(" orE ")" | IDENT"""

    # nested same-operator expressions are flattened so that the printed
    # form re-parses to a structurally identical tree
    def or_expr():
        ops = [and_expr()]
        while ts.at_punct("|"):
            ts.advance()
            ops.append(and_expr())
        if len(ops) == 1:
            return ops[0]
        flat = []
        for op in ops:
            flat.extend(op.operands if isinstance(op, Or) else [op])
        return Or(tuple(flat))

    def and_expr():
        ops = [not_expr()]
        while ts.at_punct("&"):
            ts.advance()
            ops.append(not_expr())
        if len(ops) == 1:
            return ops[0]
        flat = []
        for op in ops:
            flat.extend(op.operands if isinstance(op, And) else [op])
        return And(tuple(flat))

    def not_expr():
        if ts.at_punct("!"):
            ts.advance()
            return Not(not_expr())
        if ts.at_punct("("):
            ts.advance()
            inner = or_expr()
            ts.expect_punct(")")
            return inner
        return Var(ts.expect_ident("feature name").value)

    return or_expr()


def parse_feature_expr(text: str) -> FeatureExpr:
    """Parse a standalone presence-condition expression."""
    ts = TokenStream(text, "<expr>")
    expr = parse_expr(ts)
    ts.expect_eof()
    return expr


def eval_feature_expr(expr: FeatureExpr, cfg: "Configuration | frozenset | set") -> bool:
    selected = cfg.selected if isinstance(cfg, Configuration) else frozenset(cfg)
    return expr.eval(selected)


# ---------------------------------------------------------------------------
# Model types


@dataclass
class ChildGroup:
    kind: str  # mandatory | optional | xor
    children: tuple
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Feature:
    name: str
    groups: list = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    # resolved child Feature objects, filled when the model is assembled
    child_nodes: list = field(default_factory=list, compare=False, repr=False)

    @property
    def child_names(self) -> list:
        return [c for g in self.groups for c in g.children]


@dataclass
class CrossConstraint:
    kind: str  # requires | excludes
    lhs: str
    rhs: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class FeatureModel:
    name: str
    root: str
    features: dict  # name -> Feature, declaration order
    constraints: list
    parent: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def root_feature(self) -> Feature:
        return self.features[self.root]

    @property
    def child_nodes(self):
        return [self.root_feature]


@dataclass(frozen=True)
class Configuration:
    selected: frozenset
    name: Optional[str] = field(default=None, compare=False)
    for_model: Optional[str] = field(default=None, compare=False)


@dataclass
class Verdict:
    valid: bool
    violations: list


# ---------------------------------------------------------------------------
# Parsing


def parse_feature_model(text: str, file: str = "<featuremodel>"):
    """Parse the textual notation; returns (model, diagnostics).  The model
    is None iff any error was produced."""
    try:
        ts = TokenStream(text, file)
        ts.expect_keyword("featuremodel")
        name_tok = ts.expect_ident("model name")
        ts.expect_punct("{")
        ts.expect_keyword("root")
        root_tok = ts.expect_ident("root feature name")
        defs = []  # (name_token, groups)
        constraints = []
        while ts.at_keyword("feature"):
            ts.advance()
            fname = ts.expect_ident("feature name")
            ts.expect_punct("{")
            groups = []
            while not ts.at_punct("}"):
                groups.append(_parse_group(ts))
            ts.expect_punct("}")
            defs.append((fname, groups))
        while not ts.at_punct("}"):
            lhs = ts.expect_ident("constraint feature")
            if ts.at_keyword("requires") or ts.at_keyword("excludes"):
                kind = ts.advance().value
            else:
                ts.fail("expected 'requires' or 'excludes'")
            rhs = ts.expect_ident("constraint feature")
            constraints.append(
                CrossConstraint(kind, lhs.value, rhs.value, span=ts.span(lhs))
            )
        ts.expect_punct("}")
        ts.expect_eof()
    except ParseError as e:
        return None, [e.diagnostic]
    return _assemble(name_tok.value, root_tok, defs, constraints, file)


def _parse_group(ts: TokenStream) -> ChildGroup:
    if ts.at_keyword("mandatory") or ts.at_keyword("optional"):
        kw = ts.advance()
        child = ts.expect_ident("child feature name")
        return ChildGroup(kw.value, (child.value,), span=ts.span(kw))
    if ts.at_keyword("xor"):
        kw = ts.advance()
        ts.expect_punct("{")
        names = [ts.expect_ident("alternative feature name").value]
        while ts.at_punct(","):
            ts.advance()
            names.append(ts.expect_ident("alternative feature name").value)
        ts.expect_punct("}")
        if len(names) < 2:
            ts.fail("xor group needs at least two alternatives", kw)
        return ChildGroup("xor", tuple(names), span=ts.span(kw))
    ts.fail("expected 'mandatory', 'optional' or 'xor'")


def _assemble(name, root_tok, defs, constraints, file):
    diags: list[Diagnostic] = []
    root = root_tok.value
    features: dict[str, Feature] = {}
    child_spans: dict[str, SourceSpan] = {}

    for fname, groups in defs:
        if fname.value in features:
            diags.append(
                error(
                    "E_DUPLICATE_FEATURE",
                    f"feature '{fname.value}' defined more than once",
                    fname.span(file),
                )
            )
            continue
        features[fname.value] = Feature(fname.value, groups, span=fname.span(file))

    # implicit leaf declarations for root and referenced children
    if root not in features:
        features[root] = Feature(root, [], span=root_tok.span(file))
    parent: dict[str, str] = {}
    for feat in list(features.values()):
        for group in feat.groups:
            for child in group.children:
                span = group.span
                if child in parent or (child in child_spans):
                    diags.append(
                        error(
                            "E_MULTIPLE_PARENTS",
                            f"feature '{child}' has more than one parent",
                            span,
                        )
                    )
                    continue
                parent[child] = feat.name
                child_spans[child] = span
                if child not in features:
                    features[child] = Feature(child, [], span=span)

    # tree shape: root on top, everything reachable, no cycles
    if root in parent:
        diags.append(
            error(
                "E_CYCLE",
                f"root feature '{root}' appears as a child of '{parent[root]}'",
                child_spans[root],
            )
        )
    reachable = set()
    stack = [root]
    while stack:
        f = stack.pop()
        if f in reachable:
            continue
        reachable.add(f)
        stack.extend(features[f].child_names)
    cycle_reported = set()
    for fname, feat in features.items():
        if fname in reachable or fname in cycle_reported:
            continue
        # walk up the parent chain: a loop is a cycle, a loose top is a
        # second root the model does not know about
        seen = []
        cur = fname
        while cur in parent and cur not in seen:
            seen.append(cur)
            cur = parent[cur]
        if cur in seen:
            diags.append(
                error(
                    "E_CYCLE",
                    f"feature '{cur}' is part of a parent-child cycle",
                    features[cur].span,
                )
            )
            cycle_reported.update(seen + [cur])
        elif cur not in cycle_reported:
            diags.append(
                error(
                    "E_UNKNOWN_ROOT",
                    f"feature '{cur}' is not connected to root '{root}'",
                    features[cur].span,
                )
            )
            cycle_reported.update(seen + [cur])

    for c in constraints:
        for side in (c.lhs, c.rhs):
            if side not in features:
                diags.append(
                    error(
                        "E_UNKNOWN_FEATURE",
                        f"constraint names undeclared feature '{side}'",
                        c.span,
                    )
                )
        if c.lhs == c.rhs:
            diags.append(
                error(
                    "E_SYNTAX",
                    f"constraint relates feature '{c.lhs}' to itself",
                    c.span,
                )
            )

    if diags:
        return None, diags

    fm = FeatureModel(name, root, features, constraints, parent)
    for feat in features.values():
        feat.child_nodes = [features[c] for c in feat.child_names]
    return fm, []


def parse_configuration(text: str, file: str = "<configuration>"):
    """`configuration <name> of <model> { select A, B, C }`; the select
    clause may be omitted for the empty selection."""
    try:
        ts = TokenStream(text, file)
        ts.expect_keyword("configuration")
        cname = ts.expect_ident("configuration name").value
        ts.expect_keyword("of")
        mname = ts.expect_ident("feature model name").value
        ts.expect_punct("{")
        selected = []
        if ts.at_keyword("select"):
            ts.advance()
            selected.append(ts.expect_ident("feature name").value)
            while ts.at_punct(","):
                ts.advance()
                selected.append(ts.expect_ident("feature name").value)
        ts.expect_punct("}")
        ts.expect_eof()
    except ParseError as e:
        return None, [e.diagnostic]
    return Configuration(frozenset(selected), cname, mname), []


# ---------------------------------------------------------------------------
# Pretty printing


def pretty_print(fm: FeatureModel) -> str:
    lines = [f"featuremodel {fm.name} {{"]
    lines.append(f"  root {fm.root}")
    for feat in fm.features.values():
        if not feat.groups:
            continue
        lines.append(f"  feature {feat.name} {{")
        for g in feat.groups:
            if g.kind == "xor":
                lines.append(f"    xor {{ {', '.join(g.children)} }}")
            else:
                lines.append(f"    {g.kind} {g.children[0]}")
        lines.append("  }")
    for c in fm.constraints:
        lines.append(f"  {c.lhs} {c.kind} {c.rhs}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Configuration semantics


def is_valid_configuration(fm: FeatureModel, cfg: Configuration) -> Verdict:
    """Decide validity by the seven local rules; one diagnostic per broken
    rule instance, no search."""
    sel = cfg.selected
    violations: list[Diagnostic] = []

    for name in sorted(sel):
        if name not in fm.features:
            violations.append(
                error("E_UNKNOWN_FEATURE", f"selected feature '{name}' is not declared")
            )
    known = sel & set(fm.features)

    if fm.root not in sel:
        violations.append(
            error(
                "E_ROOT_NOT_SELECTED",
                f"root feature '{fm.root}' must be selected",
                fm.root_feature.span,
            )
        )
    for name in sorted(known):
        if name == fm.root:
            continue
        if fm.parent[name] not in sel:
            violations.append(
                error(
                    "E_ORPHAN_SELECTION",
                    f"feature '{name}' is selected but its parent "
                    f"'{fm.parent[name]}' is not",
                    fm.features[name].span,
                )
            )
    for feat in fm.features.values():
        if feat.name not in sel:
            continue
        for g in feat.groups:
            if g.kind == "mandatory" and g.children[0] not in sel:
                violations.append(
                    error(
                        "E_MANDATORY_MISSING",
                        f"mandatory child '{g.children[0]}' of selected "
                        f"'{feat.name}' is not selected",
                        g.span,
                    )
                )
            elif g.kind == "xor":
                chosen = [c for c in g.children if c in sel]
                if len(chosen) != 1:
                    violations.append(
                        error(
                            "E_XOR_VIOLATION",
                            f"exactly one of {{{', '.join(g.children)}}} must be "
                            f"selected under '{feat.name}', found {len(chosen)}",
                            g.span,
                        )
                    )
    for c in fm.constraints:
        if c.kind == "requires" and c.lhs in sel and c.rhs not in sel:
            violations.append(
                error(
                    "E_REQUIRES_VIOLATION",
                    f"'{c.lhs}' requires '{c.rhs}'",
                    c.span,
                )
            )
        elif c.kind == "excludes" and c.lhs in sel and c.rhs in sel:
            violations.append(
                error(
                    "E_EXCLUDES_VIOLATION",
                    f"'{c.lhs}' excludes '{c.rhs}'",
                    c.span,
                )
            )
    return Verdict(not violations, violations)


def enumerate_configurations(fm: FeatureModel, cap: int = ENUMERATION_CAP):
    """All valid configurations by subset brute force, in lexicographic
    order of their sorted member lists.  Desk-scale oracle only."""
    names = sorted(fm.features)
    if len(names) > cap:
        raise ModelTooLargeError(
            f"{len(names)} features exceed the enumeration cap of {cap}"
        )
    found = []
    for mask in range(1 << len(names)):
        subset = frozenset(n for i, n in enumerate(names) if mask >> i & 1)
        if is_valid_configuration(fm, Configuration(subset)).valid:
            found.append(Configuration(subset))
    found.sort(key=lambda c: sorted(c.selected))
    return found


def count_configurations(fm: FeatureModel, cap: int = ENUMERATION_CAP) -> int:
    return len(enumerate_configurations(fm, cap))
