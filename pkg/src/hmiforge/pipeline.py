"""Fixed-order processing pipeline: parse → wellformed → crosscheck → generate.

All files of one stage are processed before gating, so a user sees every
parse error at once; any error stops later stages and leaves the artifact
map empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import feature_model as fmod
from . import generator as gen
from . import menu_model as mmod
from .diagnostics import Diagnostic, error, has_errors, sorted_diagnostics

STAGES = ("parse", "wellformed", "crosscheck", "generate")


@dataclass
class PipelineInputs:
    feature_model: str
    hmi_model: str
    handlers: str
    configuration: Optional[str] = None  # not needed when stopping at crosscheck


@dataclass
class PipelineResult:
    stage_reached: str
    diagnostics: list
    artifacts: dict = field(default_factory=dict)
    # parsed inputs, for callers that continue working with them
    fm: Optional[fmod.FeatureModel] = None
    hm: Optional[mmod.HmiModel] = None
    manifest: Optional[gen.HandlerManifest] = None
    cfg: Optional[fmod.Configuration] = None
    program: Optional[object] = None

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


def _read(path: str, diags: list) -> Optional[str]:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        diags.append(error("E_IO", f"cannot read '{path}': {e.strerror or e}"))
        return None


def run_pipeline(inputs: PipelineInputs, through: str = "generate") -> PipelineResult:
    """Deterministic: identical inputs give an identical result, including
    diagnostic order (source position, then code)."""
    assert through in STAGES
    diags: list[Diagnostic] = []

    # parse
    fm = hm = manifest = cfg = None
    fm_text = _read(inputs.feature_model, diags)
    hm_text = _read(inputs.hmi_model, diags)
    mf_text = _read(inputs.handlers, diags)
    cfg_text = (
        _read(inputs.configuration, diags) if inputs.configuration is not None else None
    )
    if fm_text is not None:
        fm, d = fmod.parse_feature_model(fm_text, inputs.feature_model)
        diags += d
    if hm_text is not None:
        hm, d = mmod.parse_hmi_model(hm_text, inputs.hmi_model)
        diags += d
    if mf_text is not None:
        manifest, d = gen.parse_handler_manifest(mf_text, inputs.handlers)
        diags += d
    if cfg_text is not None:
        cfg, d = fmod.parse_configuration(cfg_text, inputs.configuration)
        diags += d
    if has_errors(diags) or through == "parse":
        return PipelineResult("parse", sorted_diagnostics(diags), {}, fm, hm, manifest, cfg)

    # wellformed
    diags += mmod.check_hmi_model(hm)
    if has_errors(diags) or through == "wellformed":
        return PipelineResult(
            "wellformed", sorted_diagnostics(diags), {}, fm, hm, manifest, cfg
        )

    # crosscheck
    diags += gen.cross_check(fm, hm, manifest)
    if cfg is not None:
        verdict = fmod.is_valid_configuration(fm, cfg)
        if not verdict.valid:
            codes = ", ".join(sorted({v.code for v in verdict.violations}))
            diags.append(
                error("E_INVALID_CONFIGURATION", f"configuration is invalid ({codes})")
            )
            diags += verdict.violations
    if has_errors(diags) or through == "crosscheck" or cfg is None:
        return PipelineResult(
            "crosscheck", sorted_diagnostics(diags), {}, fm, hm, manifest, cfg
        )

    # generate
    result = gen.generate(fm, hm, manifest, cfg)
    diags += result.diagnostics
    artifacts = {}
    if result.ok:
        artifacts = {"hmi.program": result.text, "hmi.report": result.report_text}
    # drop duplicates picked up from generate's internal re-validation
    seen = set()
    unique = []
    for d in sorted_diagnostics(diags):
        key = (d.severity, d.code, d.message, d.span)
        if key not in seen:
            seen.add(key)
            unique.append(d)
    return PipelineResult(
        "generate", unique, artifacts, fm, hm, manifest, cfg, result.program
    )
