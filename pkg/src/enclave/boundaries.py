"""Consent boundary evaluation: validation, matching, composition, narrowing.

Everything here is pure and stateless. A boundary is a per-node audience
predicate over trait dimensions, persona names, and an optional free-text
escape hatch. Semantics in one breath:

* dimensions combine by conjunction; multi-value sets within a dimension are
  disjunctive;
* an undeclared viewer trait fails every dimension that restricts on it,
  including the advisor exclusion list (fail-closed);
* a node's audience is its own boundary's matches, plus the parent author
  when the reply-to grant is on, intersected with the parent's audience, so
  audiences only ever shrink down a thread;
* post-publication edits may only narrow, checked syntactically so the
  guarantee holds for every future population.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

from .errors import (
    BoundaryValidationError,
    EmptyRestriction,
    IdentityNotHeld,
    MalformedChain,
    UnknownVocabularyId,
    UsernameNotInThread,
    WideningViolation,
)
from .traits import TraitProfile
from .vocab import Vocabulary

NodeKind = Literal["post", "comment"]

# Dimensions encoded as "None = unrestricted, frozenset = restricted".
SET_DIMENSIONS = (
    "gender_allowed",
    "races_allowed",
    "challenges_any",
    "programs_allowed",
    "advised_by_any",
    "usernames_allowed",
)


@dataclass(frozen=True)
class ConsentBoundary:
    """Audience predicate attached to a single post or comment.

    ``None`` always means "unrestricted" for a dimension. The default
    instance (all dimensions unrestricted, no exclusions) is the public
    boundary: visible to every active account.
    """

    gender_allowed: frozenset[str] | None = None
    races_allowed: frozenset[str] | None = None
    require_international: bool | None = None
    challenges_any: frozenset[str] | None = None
    require_advising_change: bool | None = None
    programs_allowed: frozenset[str] | None = None
    advised_by_any: frozenset[str] | None = None
    not_advised_by: frozenset[str] = frozenset()
    usernames_allowed: frozenset[str] | None = None
    other_info: str = ""
    show_boundary: bool = False
    show_to_parent_author: bool = True

    def is_public(self) -> bool:
        return (
            all(getattr(self, dim) is None for dim in SET_DIMENSIONS)
            and self.require_international is None
            and self.require_advising_change is None
            and not self.not_advised_by
        )

    def needs_moderation(self) -> bool:
        return bool(self.other_info.strip())


PUBLIC_BOUNDARY = ConsentBoundary()


@dataclass(frozen=True)
class MatchContext:
    viewer_account_id: str
    viewer_profile: TraitProfile
    viewer_personas: frozenset[str]
    author_account_id: str
    moderator_flag: bool = False


@dataclass(frozen=True)
class PopulationMember:
    """One eligible (active) account in an audience computation."""

    account_id: str
    profile: TraitProfile
    personas: frozenset[str]
    moderator: bool = False


@dataclass(frozen=True)
class ChainLevel:
    """One node of a root-to-target chain, as composition sees it."""

    node_id: str
    parent_id: str | None
    author_account_id: str
    boundary: ConsentBoundary
    resolved_recipients: frozenset[str] | None = None


@dataclass
class ValidationResult:
    errors: list[BoundaryValidationError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_first(self) -> None:
        if self.errors:
            raise self.errors[0]


@dataclass
class RestrictionResult:
    violations: list[WideningViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_first(self) -> None:
        if self.violations:
            raise self.violations[0]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_boundary(
    boundary: ConsentBoundary,
    author_profile: TraitProfile,
    context: NodeKind,
    thread_participants: Optional[frozenset[str]] = None,
    vocab: Optional[Vocabulary] = None,
) -> ValidationResult:
    """Validate a boundary against its author's declared traits.

    Identity dimensions (gender, race, international status) may only carry
    values the author holds. Restricted sets must be non-empty. Comment
    boundaries may only name personas that already appeared in the thread.
    """
    errors: list[BoundaryValidationError] = []

    for dim in SET_DIMENSIONS:
        value = getattr(boundary, dim)
        if value is not None and not value:
            errors.append(EmptyRestriction(f"{dim} restricted to an empty set", dimension=dim))

    if boundary.gender_allowed:
        if author_profile.gender is None or author_profile.gender not in boundary.gender_allowed:
            errors.append(IdentityNotHeld(
                "author has not declared a gender in the allowed set", dimension="gender"))
    if boundary.races_allowed:
        if not (author_profile.races & boundary.races_allowed):
            errors.append(IdentityNotHeld(
                "author has not declared a race in the allowed set", dimension="races"))
    if boundary.require_international is not None:
        if author_profile.international is None or \
                author_profile.international != boundary.require_international:
            errors.append(IdentityNotHeld(
                "author's declared international status does not match", dimension="international"))

    if context == "comment" and boundary.usernames_allowed:
        participants = thread_participants or frozenset()
        for name in sorted(boundary.usernames_allowed - participants):
            errors.append(UsernameNotInThread(
                f"persona {name!r} has not participated in the thread", dimension="usernames"))

    if vocab is not None:
        for challenge in sorted(boundary.challenges_any or ()):
            if challenge not in vocab.challenges:
                errors.append(UnknownVocabularyId(
                    f"unknown challenge id {challenge!r}", dimension="challenges"))
        for program in sorted(boundary.programs_allowed or ()):
            if program not in vocab.programs:
                errors.append(UnknownVocabularyId(
                    f"unknown program id {program!r}", dimension="programs"))
        for fac in sorted((boundary.advised_by_any or frozenset()) | boundary.not_advised_by):
            if fac not in vocab.faculty:
                errors.append(UnknownVocabularyId(
                    f"unknown faculty id {fac!r}", dimension="faculty"))

    return ValidationResult(errors)


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def _dimensions_pass(boundary: ConsentBoundary, profile: TraitProfile,
                     personas: frozenset[str]) -> bool:
    """Conjunction over restricted dimensions, fail-closed on undeclared."""
    if boundary.gender_allowed is not None:
        if profile.gender is None or profile.gender not in boundary.gender_allowed:
            return False
    if boundary.races_allowed is not None:
        if not (profile.races & boundary.races_allowed):
            return False
    if boundary.require_international is not None:
        if profile.international is None or profile.international != boundary.require_international:
            return False
    if boundary.challenges_any is not None:
        if not (profile.challenges_experienced & boundary.challenges_any):
            return False
    if boundary.require_advising_change is not None:
        if profile.advising_status_changed is not True:
            return False
    if boundary.programs_allowed is not None:
        if profile.phd_program is None or profile.phd_program not in boundary.programs_allowed:
            return False
    advisors = profile.current_advisors | profile.prior_advisors
    if boundary.advised_by_any is not None:
        if not (advisors & boundary.advised_by_any):
            return False
    if boundary.not_advised_by:
        # Fail-closed: an exclusion is only satisfiable by a declared advisor
        # history that avoids the excluded faculty.
        if not advisors or (advisors & boundary.not_advised_by):
            return False
    if boundary.usernames_allowed is not None:
        if not (personas & boundary.usernames_allowed):
            return False
    return True


def matches(boundary: ConsentBoundary, ctx: MatchContext) -> bool:
    """True iff the viewer is inside the boundary.

    Authors always match their own boundary; moderators match everything.
    Total over validated inputs.
    """
    if ctx.viewer_account_id == ctx.author_account_id:
        return True
    if ctx.moderator_flag:
        return True
    return _dimensions_pass(boundary, ctx.viewer_profile, ctx.viewer_personas)


# ---------------------------------------------------------------------------
# Thread composition
# ---------------------------------------------------------------------------

def _level_pass(member: PopulationMember, level: ChainLevel,
                parent_author: str | None) -> bool:
    if member.moderator or member.account_id == level.author_account_id:
        return True
    if (parent_author is not None and member.account_id == parent_author
            and level.boundary.show_to_parent_author):
        return True
    if not _dimensions_pass(level.boundary, member.profile, member.personas):
        return False
    if level.resolved_recipients is not None and \
            member.account_id not in level.resolved_recipients:
        return False
    return True


def _check_chain(chain: Sequence[ChainLevel]) -> None:
    if not chain:
        raise MalformedChain("empty node chain")
    if chain[0].parent_id is not None:
        raise MalformedChain("chain must start at a root post")
    for prev, cur in zip(chain, chain[1:]):
        if cur.parent_id != prev.node_id:
            raise MalformedChain(
                f"node {cur.node_id!r} does not link to {prev.node_id!r}")


def compose_audience(chain: Sequence[ChainLevel],
                     population: Iterable[PopulationMember]) -> frozenset[str]:
    """Audience of the last node in a root-to-target chain.

    A member is in the audience iff they pass every level: their own match
    (or the reply-to grant, or authorship, or moderator standing) at each
    node along the chain. The grant at a level never relaxes ancestor
    levels, so audiences are monotonically decreasing down the thread.
    """
    _check_chain(chain)
    audience = set()
    for member in population:
        ok = True
        parent_author: str | None = None
        for level in chain:
            if not _level_pass(member, level, parent_author):
                ok = False
                break
            parent_author = level.author_account_id
        if ok:
            audience.add(member.account_id)
    return frozenset(audience)


def level_audience(level: ChainLevel, population: Iterable[PopulationMember],
                   parent_author: str | None) -> frozenset[str]:
    """Single-level audience (no ancestor intersection); composition helper."""
    return frozenset(m.account_id for m in population
                     if _level_pass(m, level, parent_author))


def boundary_metadata_view(chain: Sequence[ChainLevel],
                           population: Iterable[PopulationMember],
                           viewer_account_id: str) -> ConsentBoundary | None:
    """The target node's boundary, iff the author shows it and the viewer is
    inside the audience. Otherwise nothing: a hidden-boundary node must be
    indistinguishable from a public one."""
    target = chain[-1]
    if not target.boundary.show_boundary:
        return None
    if viewer_account_id not in compose_audience(chain, population):
        return None
    return target.boundary


# ---------------------------------------------------------------------------
# Restriction (narrow-only edits)
# ---------------------------------------------------------------------------

def _narrowed(old: frozenset[str] | None, new: frozenset[str] | None) -> bool:
    if old is None:
        return True  # unrestricted -> anything (restricting is allowed)
    if new is None:
        return False  # restricted -> unrestricted is widening
    return new <= old


def check_restriction(old: ConsentBoundary, new: ConsentBoundary) -> RestrictionResult:
    """Syntactic narrowing check for a boundary edit.

    Dimension-wise: unrestricted may become restricted, restricted sets may
    only shrink, exclusions may only grow, required flags may only turn on.
    Display flags (show_boundary, show_to_parent_author) are freely
    togglable. Syntactic narrowing implies the new audience is a subset of
    the old one over every possible population, including future ones.
    """
    violations: list[WideningViolation] = []

    for dim in SET_DIMENSIONS:
        if not _narrowed(getattr(old, dim), getattr(new, dim)):
            violations.append(WideningViolation(dim))

    if old.require_international is not None and \
            new.require_international != old.require_international:
        violations.append(WideningViolation("require_international"))
    if old.require_advising_change is not None and \
            new.require_advising_change != old.require_advising_change:
        violations.append(WideningViolation("require_advising_change"))
    if not (new.not_advised_by >= old.not_advised_by):
        violations.append(WideningViolation("not_advised_by"))
    if new.other_info.strip() != old.other_info.strip():
        # Free text routes through moderation; it cannot be renegotiated as
        # part of a narrowing edit.
        violations.append(WideningViolation("other_info"))

    return RestrictionResult(violations)
