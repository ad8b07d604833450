"""Voluntarily declared user traits: the matching substrate for boundaries.

Every field is independently omissible. An omitted field means "undeclared"
and is never coerced to a default: matching is fail-closed, so an undeclared
trait fails any boundary dimension that restricts on it. Empty sets count as
undeclared for the set-valued fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from .errors import InvalidBoundaryDocument
from .vocab import Vocabulary

# Field-level units a user can declare or clear. "advisors" spans both the
# current and prior advisor sets: they form one declarable unit for the
# fail-closed exclusion semantics.
TRAIT_FIELDS = (
    "gender",
    "races",
    "international",
    "phd_program",
    "current_advisors",
    "prior_advisors",
    "challenges_experienced",
    "advising_status_changed",
)

_SET_FIELDS = frozenset({"races", "current_advisors", "prior_advisors", "challenges_experienced"})
_BOOL_FIELDS = frozenset({"international", "advising_status_changed"})


@dataclass(frozen=True)
class TraitProfile:
    gender: str | None = None
    races: frozenset[str] = frozenset()
    international: bool | None = None
    phd_program: str | None = None
    current_advisors: frozenset[str] = frozenset()
    prior_advisors: frozenset[str] = frozenset()
    challenges_experienced: frozenset[str] = frozenset()
    advising_status_changed: bool | None = None

    @property
    def all_advisors(self) -> frozenset[str]:
        return self.current_advisors | self.prior_advisors

    def declared_fields(self) -> list[str]:
        """Names of fields the user has actually declared."""
        out = []
        for name in TRAIT_FIELDS:
            value = getattr(self, name)
            if name in _SET_FIELDS:
                if value:
                    out.append(name)
            elif value is not None:
                out.append(name)
        return out

    def without(self, field_name: str) -> "TraitProfile":
        """Copy with one trait field cleared back to undeclared."""
        if field_name in _SET_FIELDS:
            return replace(self, **{field_name: frozenset()})
        return replace(self, **{field_name: None})

    def to_dict(self) -> dict:
        """Serialize with undeclared fields omitted; set values sorted."""
        out: dict[str, Any] = {}
        for name in TRAIT_FIELDS:
            value = getattr(self, name)
            if name in _SET_FIELDS:
                if value:
                    out[name] = sorted(value)
            elif value is not None:
                out[name] = value
        return out


def profile_from_dict(raw: dict) -> TraitProfile:
    """Parse a serialized profile. Unknown keys and wrong types are rejected."""
    if not isinstance(raw, dict):
        raise InvalidBoundaryDocument("trait profile must be an object")
    unknown = set(raw) - set(TRAIT_FIELDS)
    if unknown:
        raise InvalidBoundaryDocument(f"unknown trait fields: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    for name, value in raw.items():
        if value is None:
            continue
        if name in _SET_FIELDS:
            if not isinstance(value, (list, tuple, set, frozenset)) or \
                    not all(isinstance(v, str) for v in value):
                raise InvalidBoundaryDocument(f"trait field {name!r} must be a list of strings")
            kwargs[name] = frozenset(value)
        elif name in _BOOL_FIELDS:
            if not isinstance(value, bool):
                raise InvalidBoundaryDocument(f"trait field {name!r} must be a boolean")
            kwargs[name] = value
        else:
            if not isinstance(value, str):
                raise InvalidBoundaryDocument(f"trait field {name!r} must be a string")
            kwargs[name] = value
    return TraitProfile(**kwargs)


def validate_profile(profile: TraitProfile, vocab: Vocabulary) -> None:
    """Check program/faculty/challenge references against the vocabulary."""
    if profile.phd_program is not None:
        vocab.require_program(profile.phd_program)
    for fac in sorted(profile.current_advisors | profile.prior_advisors):
        vocab.require_faculty(fac)
    for challenge in sorted(profile.challenges_experienced):
        vocab.require_challenge(challenge)


def apply_patch(profile: TraitProfile, patch: dict) -> tuple[TraitProfile, list[tuple[str, Any, Any]]]:
    """Apply a partial trait update.

    Keys present in ``patch`` replace the field wholesale; an explicit null
    clears the field back to undeclared; absent keys are untouched. Returns
    the new profile plus one ``(field, old, new)`` change record per field
    that actually changed, in declaration order.
    """
    unknown = set(patch) - set(TRAIT_FIELDS)
    if unknown:
        raise InvalidBoundaryDocument(f"unknown trait fields: {sorted(unknown)}")
    merged = dict(profile.to_dict())
    for name, value in patch.items():
        if value is None:
            merged.pop(name, None)
        else:
            merged[name] = sorted(value) if name in _SET_FIELDS else value
    updated = profile_from_dict(merged)
    changes = []
    for name in TRAIT_FIELDS:
        old = getattr(profile, name)
        new = getattr(updated, name)
        if old != new:
            old_ser = sorted(old) if isinstance(old, frozenset) else old
            new_ser = sorted(new) if isinstance(new, frozenset) else new
            changes.append((name, old_ser, new_ser))
    return updated, changes
