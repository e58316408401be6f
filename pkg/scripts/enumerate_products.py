#!/usr/bin/env python3
"""Enumerate every valid configuration of a product line and generate the
variant program for each, printing a per-variant summary.

Usage: python3 scripts/enumerate_products.py [--fm F] [--hmi H] [--handlers A]
"""

import argparse
from pathlib import Path

from hmiforge import feature_model as fmod
from hmiforge import generator as gen
from hmiforge import menu_model as mmod

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fm", default=str(ROOT / "demo" / "comfort.fm"))
    ap.add_argument("--hmi", default=str(ROOT / "demo" / "mainunit.hmi"))
    ap.add_argument("--handlers", default=str(ROOT / "demo" / "handlers.manifest"))
    args = ap.parse_args()

    fm, d1 = fmod.parse_feature_model(Path(args.fm).read_text(), args.fm)
    hm, d2 = mmod.parse_hmi_model(Path(args.hmi).read_text(), args.hmi)
    manifest, d3 = gen.parse_handler_manifest(Path(args.handlers).read_text(), args.handlers)
    assert not (d1 or d2 or d3), d1 + d2 + d3

    configs = fmod.enumerate_configurations(fm)
    print(f"{len(configs)} valid configurations of {fm.name}\n")
    for i, cfg in enumerate(configs, 1):
        named = fmod.Configuration(cfg.selected, name=f"v{i}")
        result = gen.generate(fm, hm, manifest, named)
        if not result.ok:
            codes = sorted({d.code for d in result.diagnostics if d.is_error})
            print(f"v{i}: {{{', '.join(sorted(cfg.selected))}}} FAILS: {codes}")
            continue
        r = result.report
        print(
            f"v{i}: {{{', '.join(sorted(cfg.selected))}}} -> "
            f"{len(result.program.screens)} screens, "
            f"{len(result.program.dialogs)} dialogs "
            f"(pruned {r.pruned_menus}m/{r.pruned_dialogs}d/{r.pruned_entries}e)"
        )


if __name__ == "__main__":
    main()
