"""Controlled vocabularies: PhD programs, faculty, and challenge categories.

Program, faculty, and challenge identifiers referenced by trait profiles and
consent boundaries must come from these registries. Gender and race labels
are deliberately open (self-description is allowed), so the vocabulary only
carries *suggested* option lists for those.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import UnknownVocabularyId


@dataclass(frozen=True)
class VocabEntry:
    id: str
    label: str


# Suggested (non-binding) selector options for the open identity dimensions.
GENDER_OPTIONS = ("woman", "man", "non-binary", "self-described")
RACE_OPTIONS = (
    "asian",
    "black",
    "hispanic-latinx",
    "middle-eastern-north-african",
    "native-american",
    "pacific-islander",
    "white",
    "mixed",
)

DEFAULT_PROGRAMS = (
    VocabEntry("prog-cs", "Computer Science"),
    VocabEntry("prog-infosci", "Information Science"),
    VocabEntry("prog-ece", "Electrical and Computer Engineering"),
    VocabEntry("prog-stats", "Statistics"),
)

DEFAULT_FACULTY = (
    VocabEntry("fac-astone", "A. Stone"),
    VocabEntry("fac-jreyes", "J. Reyes"),
    VocabEntry("fac-mokafor", "M. Okafor"),
    VocabEntry("fac-lnguyen", "L. Nguyen"),
    VocabEntry("fac-dkim", "D. Kim"),
    VocabEntry("fac-rpatel", "R. Patel"),
    VocabEntry("fac-thuang", "T. Huang"),
    VocabEntry("fac-eberg", "E. Berg"),
)

DEFAULT_CHALLENGES = (
    VocabEntry("micromanagement", "Micromanagement"),
    VocabEntry("communication-issue", "Communication issues"),
    VocabEntry("lack-of-feedback", "Lack of feedback"),
    VocabEntry("lack-of-support", "Lack of support or availability"),
    VocabEntry("overwork-expectations", "Unreasonable workload expectations"),
    VocabEntry("exploitation", "Exploitation of student work"),
    VocabEntry("authorship-dispute", "Authorship disputes"),
    VocabEntry("forced-direction", "Research direction forced by advisor"),
    VocabEntry("sudden-dismissal", "Sudden dismissal or abandonment"),
    VocabEntry("funding-insecurity", "Funding insecurity"),
    VocabEntry("bullying", "Bullying"),
    VocabEntry("harassment", "Harassment"),
    VocabEntry("mental-health-strain", "Mental health strain"),
    VocabEntry("dual-relationship", "Blurred personal/professional relationship"),
)


@dataclass
class Vocabulary:
    """Lookup tables consulted by profile and boundary validation."""

    programs: dict[str, VocabEntry] = field(default_factory=dict)
    faculty: dict[str, VocabEntry] = field(default_factory=dict)
    challenges: dict[str, VocabEntry] = field(default_factory=dict)

    def require_program(self, program_id: str) -> None:
        if program_id not in self.programs:
            raise UnknownVocabularyId(f"unknown program id {program_id!r}")

    def require_faculty(self, faculty_id: str) -> None:
        if faculty_id not in self.faculty:
            raise UnknownVocabularyId(f"unknown faculty id {faculty_id!r}")

    def require_challenge(self, challenge_id: str) -> None:
        if challenge_id not in self.challenges:
            raise UnknownVocabularyId(f"unknown challenge id {challenge_id!r}")

    def as_dict(self) -> dict:
        return {
            "programs": [vars(e) for e in self.programs.values()],
            "faculty": [vars(e) for e in self.faculty.values()],
            "challenges": [vars(e) for e in self.challenges.values()],
            "genders": list(GENDER_OPTIONS),
            "races": list(RACE_OPTIONS),
        }


def default_vocabulary() -> Vocabulary:
    return Vocabulary(
        programs={e.id: e for e in DEFAULT_PROGRAMS},
        faculty={e.id: e for e in DEFAULT_FACULTY},
        challenges={e.id: e for e in DEFAULT_CHALLENGES},
    )


def _load_entries(path: Path) -> list[VocabEntry]:
    raw = json.loads(path.read_text())
    entries = []
    for item in raw:
        if isinstance(item, str):
            entries.append(VocabEntry(item, item))
        else:
            entries.append(VocabEntry(str(item["id"]), str(item.get("label", item["id"]))))
    return entries


def load_vocabulary(programs_path: Path | None = None,
                    faculty_path: Path | None = None,
                    challenges_path: Path | None = None) -> Vocabulary:
    """Load vocabularies from JSON files; missing paths fall back to defaults.

    Each file holds a JSON array of ``{"id": ..., "label": ...}`` objects
    (bare strings are accepted and used as both id and label).
    """
    vocab = default_vocabulary()
    if programs_path is not None:
        vocab.programs = {e.id: e for e in _load_entries(programs_path)}
    if faculty_path is not None:
        vocab.faculty = {e.id: e for e in _load_entries(faculty_path)}
    if challenges_path is not None:
        vocab.challenges = {e.id: e for e in _load_entries(challenges_path)}
    return vocab
