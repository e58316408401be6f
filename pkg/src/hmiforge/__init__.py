"""hmiforge: a miniature workbench for menu-driven HMI product lines.

Two small textual DSLs (a feature diagram and a menu diagram) plus a
declarative handler manifest are parsed, checked against each other,
pruned under a chosen feature configuration and turned into a
self-contained HMI program that a deterministic simulator executes.
"""

__version__ = "0.1.0"
