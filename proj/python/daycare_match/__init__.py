"""Daycare matching with siblings: solve, check and certify allocations.

Instances and matchings may be given as dicts, JSON strings or file paths.
"""

import json
import os

from . import _core
from ._core import MatchError

__all__ = ["MatchError", "solve", "check", "oracle", "generate", "model_stats", "export_lp", "preset_names"]


def _text(doc):
    if isinstance(doc, dict):
        return json.dumps(doc)
    if isinstance(doc, os.PathLike) or (isinstance(doc, str) and not doc.lstrip().startswith("{")):
        with open(doc, encoding="utf-8") as f:
            return f.read()
    return doc


def solve(instance, level=3, time_limit=120.0, node_limit=50_000_000):
    """Report dict with "status", "objective" and "matching" (None without one)."""
    return json.loads(_core.solve(_text(instance), level, time_limit, node_limit))


def check(instance, matching):
    """Property report of a matching."""
    return json.loads(_core.check(_text(instance), _text(matching)))


def oracle(instance, caps=5_000_000):
    """Exhaustive enumeration report; "text" holds the printable certificate."""
    return json.loads(_core.oracle(_text(instance), caps))


def generate(preset="tiny", seed=0, children=None, daycares=None):
    """Synthetic instance as a dict."""
    return json.loads(_core.generate(preset, seed, children, daycares))


def model_stats(instance, level=3):
    return json.loads(_core.model_stats(_text(instance), level))


def export_lp(instance, level=3):
    return _core.export_lp(_text(instance), level)


def preset_names():
    return list(_core.preset_names())
