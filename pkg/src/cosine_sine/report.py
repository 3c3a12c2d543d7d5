"""Run reports: assembly, deterministic serialization and semigroup files."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from . import __version__
from .semigroup import InvalidSemigroup, Involution, Semigroup, validate_involution, validate_table

__all__ = [
    "SCHEMA_VERSION",
    "ParseError",
    "SemigroupFile",
    "load_semigroup_file",
    "semigroup_file_json",
    "new_report",
    "strip_timings",
    "dumps",
    "load_schema",
]

SCHEMA_VERSION = "1.0"


class ParseError(ValueError):
    """The input could not be read as a semigroup file."""


class SemigroupFile:
    """A parsed semigroup file: validated table, optional sigma and labels."""

    def __init__(self, semigroup: Semigroup, sigma: Involution | None, labels: list[str] | None):
        self.semigroup = semigroup
        self.sigma = sigma
        self.labels = labels

    def to_json(self) -> dict:
        return semigroup_file_json(self.semigroup, self.sigma, self.labels)


def _read_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc})") from None


def load_semigroup_file(path: str | Path, text: str | None = None) -> SemigroupFile:
    """Parse ``{"order", "table", "sigma"?, "labels"?}``.

    Malformed JSON or missing fields raise ``ParseError``; a well-formed
    file whose table or sigma is invalid raises ``InvalidSemigroup``.
    """
    source = str(path)
    if text is None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ParseError(f"{source}: {exc.strerror}") from None
    data = _read_json(text, source)
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "table" not in data:
        raise ParseError(f"{source}: missing 'table'")
    table = data["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise ParseError(f"{source}: 'table' must be a list of rows")
    if any(not isinstance(v, int) or isinstance(v, bool) for r in table for v in r):
        raise ParseError(f"{source}: table entries must be integers")
    order = data.get("order", len(table))
    if not isinstance(order, int) or isinstance(order, bool):
        raise ParseError(f"{source}: 'order' must be an integer")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list)
                               or not all(isinstance(s, str) for s in labels)):
        raise ParseError(f"{source}: 'labels' must be a list of strings")
    sigma = data.get("sigma")
    if sigma is not None and (not isinstance(sigma, list)
                              or any(not isinstance(v, int) or isinstance(v, bool) for v in sigma)):
        raise ParseError(f"{source}: 'sigma' must be a list of integers")

    if order != len(table):
        raise InvalidSemigroup(f"order {order} does not match {len(table)} table rows")
    if labels is not None and len(labels) != order:
        raise InvalidSemigroup(f"{len(labels)} labels for {order} elements")
    S = validate_table(table, name=data.get("name"))
    inv = None if sigma is None else validate_involution(S, sigma)
    return SemigroupFile(S, inv, labels)


def semigroup_file_json(S: Semigroup, sigma: Involution | None = None,
                        labels: list[str] | None = None) -> dict:
    out = {"order": S.n, "table": S.table.tolist()}
    if S.name:
        out["name"] = S.name
    if sigma is not None:
        out["sigma"] = sigma.perm.tolist()
    if labels is not None:
        out["labels"] = list(labels)
    return out


def new_report(command: str, inputs: dict, field: str | None, seed: int | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "cosine-sine", "version": __version__},
        "command": command,
        "inputs": inputs,
        "field": field,
        "seed": seed,
        "results": [],
        "summary": {},
        "timings": {},
    }


def strip_timings(obj):
    """Copy of ``obj`` without any ``timings`` entries, at every depth."""
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k != "timings"}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def dumps(report: dict, timings: bool = True) -> str:
    body = report if timings else strip_timings(report)
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def load_schema() -> dict:
    text = resources.files(__package__).joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)
