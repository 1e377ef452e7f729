"""Report envelopes: stable JSON with version, input hash, seed, conventions.

Identical configuration must produce byte-identical report files, so all
JSON is dumped with sorted keys and a fixed indent, and every envelope
records the tool version, the sha256 of the input file, the seed, and the
convention constants that fix basis orders and signs.
"""

from __future__ import annotations

import hashlib
import json

from . import CONVENTIONS, __version__


def input_hash(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def envelope(command: str, input_path=None, seed=None) -> dict:
    return {
        "tool": "quadriclab",
        "version": __version__,
        "command": command,
        "input_hash": input_hash(input_path) if input_path else None,
        "seed": seed,
        "conventions": dict(CONVENTIONS),
    }


def dump_report(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_report(path, obj: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_report(obj))
