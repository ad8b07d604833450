"""Canonical boundary document format.

One JSON object per boundary, keys named exactly after the boundary fields.
"Unrestricted" is encoded by key absence; defaults (empty exclusion list,
hidden boundary, reply-to grant on, no free text) are also omitted. Set
values serialize as sorted arrays, so a boundary has exactly one canonical
document. The HTTP API, scenario files, and the web client all exchange this
format unchanged.
"""

from __future__ import annotations

import json
from typing import Any

from .boundaries import SET_DIMENSIONS, ConsentBoundary
from .errors import InvalidBoundaryDocument

_BOUNDARY_KEYS = set(SET_DIMENSIONS) | {
    "require_international",
    "require_advising_change",
    "not_advised_by",
    "other_info",
    "show_boundary",
    "show_to_parent_author",
}


def boundary_to_dict(boundary: ConsentBoundary) -> dict[str, Any]:
    doc: dict[str, Any] = {}
    for dim in SET_DIMENSIONS:
        value = getattr(boundary, dim)
        if value is not None:
            doc[dim] = sorted(value)
    if boundary.require_international is not None:
        doc["require_international"] = boundary.require_international
    if boundary.require_advising_change is not None:
        doc["require_advising_change"] = boundary.require_advising_change
    if boundary.not_advised_by:
        doc["not_advised_by"] = sorted(boundary.not_advised_by)
    if boundary.other_info:
        doc["other_info"] = boundary.other_info
    if boundary.show_boundary:
        doc["show_boundary"] = True
    if not boundary.show_to_parent_author:
        doc["show_to_parent_author"] = False
    return doc


def boundary_from_dict(doc: dict[str, Any]) -> ConsentBoundary:
    """Parse a canonical boundary document, rejecting malformed structure.

    Structural errors (unknown keys, wrong types) raise
    InvalidBoundaryDocument; semantic problems such as empty restricted sets
    are left for validate_boundary so callers can report them all at once.
    """
    if not isinstance(doc, dict):
        raise InvalidBoundaryDocument("boundary document must be an object")
    unknown = set(doc) - _BOUNDARY_KEYS
    if unknown:
        raise InvalidBoundaryDocument(f"unknown boundary keys: {sorted(unknown)}")

    kwargs: dict[str, Any] = {}
    for dim in SET_DIMENSIONS:
        if dim in doc:
            kwargs[dim] = _string_set(dim, doc[dim])
    if "require_international" in doc:
        value = doc["require_international"]
        if not isinstance(value, bool):
            raise InvalidBoundaryDocument("require_international must be a boolean")
        kwargs["require_international"] = value
    if "require_advising_change" in doc:
        if doc["require_advising_change"] is not True:
            raise InvalidBoundaryDocument("require_advising_change may only be true")
        kwargs["require_advising_change"] = True
    if "not_advised_by" in doc:
        kwargs["not_advised_by"] = _string_set("not_advised_by", doc["not_advised_by"])
    if "other_info" in doc:
        if not isinstance(doc["other_info"], str):
            raise InvalidBoundaryDocument("other_info must be a string")
        kwargs["other_info"] = doc["other_info"]
    for flag in ("show_boundary", "show_to_parent_author"):
        if flag in doc:
            if not isinstance(doc[flag], bool):
                raise InvalidBoundaryDocument(f"{flag} must be a boolean")
            kwargs[flag] = doc[flag]
    return ConsentBoundary(**kwargs)


def boundary_to_json(boundary: ConsentBoundary) -> str:
    return json.dumps(boundary_to_dict(boundary), sort_keys=True, separators=(",", ":"))


def boundary_from_json(text: str) -> ConsentBoundary:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidBoundaryDocument(f"boundary document is not valid JSON: {exc}") from exc
    return boundary_from_dict(doc)


def _string_set(key: str, value: Any) -> frozenset[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvalidBoundaryDocument(f"{key} must be an array of strings")
    return frozenset(value)
