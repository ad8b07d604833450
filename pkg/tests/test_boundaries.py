"""Boundary validation, matching, and narrowing checks."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enclave.boundaries import (
    ConsentBoundary,
    MatchContext,
    PUBLIC_BOUNDARY,
    check_restriction,
    matches,
    validate_boundary,
)
from enclave.traits import TraitProfile

from .conftest import activate, make_platform
from .strategies import author_valid_boundaries, boundaries, profiles

# The running worked example: a post for international students who have
# dealt with communication issues or missing feedback, explicitly excluding
# anyone advised by the faculty member being discussed.
TARGETED = ConsentBoundary(
    require_international=True,
    not_advised_by=frozenset({"fac-astone"}),
    challenges_any=frozenset({"communication-issue", "lack-of-feedback"}),
)


def ctx(profile: TraitProfile, viewer="acc_viewer", author="acc_author",
        personas=frozenset(), moderator=False) -> MatchContext:
    return MatchContext(viewer, profile, frozenset(personas), author, moderator)


# ---------------------------------------------------------------------------
# validate_boundary
# ---------------------------------------------------------------------------

class TestValidation:
    def test_author_holding_identity_passes(self, vocab):
        author = TraitProfile(international=True,
                              challenges_experienced=frozenset({"communication-issue"}))
        result = validate_boundary(TARGETED, author, "post", None, vocab)
        assert result.ok

    def test_undeclared_gender_cannot_restrict_on_gender(self, vocab):
        boundary = ConsentBoundary(gender_allowed=frozenset({"woman"}))
        result = validate_boundary(boundary, TraitProfile(), "post", None, vocab)
        assert not result.ok
        assert result.errors[0].code == "identity_not_held"
        assert result.errors[0].dimension == "gender"

    def test_gender_outside_allowed_set_not_held(self, vocab):
        boundary = ConsentBoundary(gender_allowed=frozenset({"woman"}))
        result = validate_boundary(boundary, TraitProfile(gender="man"), "post", None, vocab)
        assert [e.code for e in result.errors] == ["identity_not_held"]

    def test_race_identity_must_intersect(self, vocab):
        boundary = ConsentBoundary(races_allowed=frozenset({"asian"}))
        ok = validate_boundary(boundary, TraitProfile(races=frozenset({"asian", "white"})),
                               "post", None, vocab)
        assert ok.ok
        bad = validate_boundary(boundary, TraitProfile(races=frozenset({"white"})),
                                "post", None, vocab)
        assert bad.errors[0].dimension == "races"

    def test_domestic_author_may_require_domestic(self, vocab):
        boundary = ConsentBoundary(require_international=False)
        ok = validate_boundary(boundary, TraitProfile(international=False),
                               "post", None, vocab)
        assert ok.ok
        bad = validate_boundary(boundary, TraitProfile(international=True),
                                "post", None, vocab)
        assert bad.errors[0].dimension == "international"

    def test_empty_restricted_set_is_an_error_not_nobody(self, vocab):
        boundary = ConsentBoundary(challenges_any=frozenset())
        result = validate_boundary(boundary, TraitProfile(), "post", None, vocab)
        assert result.errors[0].code == "empty_restriction"

    def test_unknown_vocabulary_ids_rejected(self, vocab):
        boundary = ConsentBoundary(
            challenges_any=frozenset({"made-up-challenge"}),
            programs_allowed=frozenset({"prog-made-up"}),
            not_advised_by=frozenset({"fac-nobody"}),
        )
        result = validate_boundary(boundary, TraitProfile(), "post", None, vocab)
        assert sorted(e.code for e in result.errors) == ["unknown_vocabulary_id"] * 3

    def test_comment_usernames_must_have_participated(self, vocab):
        # Enumerate the personas of a real three-node thread, then check a
        # name that never appeared there.
        platform = make_platform()
        poster = activate(platform, "p1@univ.edu", TraitProfile(), "fern09")
        replier = activate(platform, "p2@univ.edu", TraitProfile(), "quietreed")
        post = platform.create_post(poster.account_id, "fern09", "root")
        platform.create_comment(replier.account_id, "quietreed", post.node_id, "re")
        platform.create_comment(poster.account_id, "fern09", post.node_id, "re2")
        _, participants = platform.content.thread_participants(post.thread_id)
        assert participants == frozenset({"fern09", "quietreed"})

        boundary = ConsentBoundary(usernames_allowed=frozenset({"ghost99"}))
        result = validate_boundary(boundary, TraitProfile(), "comment",
                                   participants, vocab)
        assert result.errors[0].code == "username_not_in_thread"
        ok = validate_boundary(
            ConsentBoundary(usernames_allowed=frozenset({"quietreed"})),
            TraitProfile(), "comment", participants, vocab)
        assert ok.ok

    def test_post_usernames_not_limited_to_thread(self, vocab):
        boundary = ConsentBoundary(usernames_allowed=frozenset({"anyone_at_all"}))
        result = validate_boundary(boundary, TraitProfile(), "post", None, vocab)
        assert result.ok


# ---------------------------------------------------------------------------
# matches
# ---------------------------------------------------------------------------

class TestMatching:
    def test_worked_example_match(self):
        viewer = TraitProfile(
            international=True,
            current_advisors=frozenset({"fac-jreyes"}),
            challenges_experienced=frozenset({"lack-of-feedback"}),
        )
        assert matches(TARGETED, ctx(viewer)) is True

    def test_worked_example_excluded_advisee(self):
        viewer = TraitProfile(
            international=True,
            current_advisors=frozenset({"fac-astone"}),
            challenges_experienced=frozenset({"communication-issue", "lack-of-feedback"}),
        )
        assert matches(TARGETED, ctx(viewer)) is False

    def test_prior_advisee_also_excluded(self):
        viewer = TraitProfile(
            international=True,
            prior_advisors=frozenset({"fac-astone"}),
            challenges_experienced=frozenset({"lack-of-feedback"}),
        )
        assert matches(TARGETED, ctx(viewer)) is False

    def test_public_boundary_matches_everyone(self):
        assert matches(PUBLIC_BOUNDARY, ctx(TraitProfile())) is True

    def test_undeclared_international_fails_closed(self):
        viewer = TraitProfile(
            current_advisors=frozenset({"fac-jreyes"}),
            challenges_experienced=frozenset({"lack-of-feedback"}),
        )
        assert matches(TARGETED, ctx(viewer)) is False

    def test_exclusion_fails_closed_on_undeclared_advisors(self):
        viewer = TraitProfile(
            international=True,
            challenges_experienced=frozenset({"lack-of-feedback"}),
        )
        assert matches(TARGETED, ctx(viewer)) is False

    def test_author_always_inside_own_boundary(self):
        assert matches(TARGETED, ctx(TraitProfile(), viewer="a", author="a")) is True

    def test_moderator_always_inside(self):
        assert matches(TARGETED, ctx(TraitProfile(), moderator=True)) is True

    def test_username_dimension_checks_all_owned_personas(self):
        boundary = ConsentBoundary(usernames_allowed=frozenset({"fern09"}))
        assert matches(boundary, ctx(TraitProfile(), personas={"fern09", "other"}))
        assert not matches(boundary, ctx(TraitProfile(), personas={"other"}))

    def test_within_dimension_values_are_disjunctive(self):
        viewer = TraitProfile(
            international=True,
            current_advisors=frozenset({"fac-dkim"}),
            challenges_experienced=frozenset({"communication-issue"}),
        )
        assert matches(TARGETED, ctx(viewer)) is True


# ---------------------------------------------------------------------------
# Matching properties
# ---------------------------------------------------------------------------

class TestMatchingProperties:
    @settings(max_examples=150, deadline=None)
    @given(profile=profiles, boundary=boundaries, data=st.data())
    def test_fail_closed_clearing_a_trait_never_grants_access(self, profile, boundary, data):
        declared = profile.declared_fields()
        if not declared:
            return
        field = data.draw(st.sampled_from(declared))
        stripped = profile.without(field)
        if field in ("current_advisors", "prior_advisors"):
            # advisor history is one declarable unit
            stripped = stripped.without("current_advisors").without("prior_advisors")
        before = matches(boundary, ctx(profile))
        after = matches(boundary, ctx(stripped))
        assert not (after and not before)

    @settings(max_examples=150, deadline=None)
    @given(profile=profiles, boundary=boundaries, data=st.data())
    def test_widening_one_allow_set_never_revokes_access(self, profile, boundary, data):
        from .strategies import CHALLENGES, GENDERS, PROGRAMS, RACES
        pools = {
            "gender_allowed": GENDERS,
            "races_allowed": RACES,
            "challenges_any": CHALLENGES,
            "programs_allowed": PROGRAMS,
        }
        dim = data.draw(st.sampled_from(sorted(pools)))
        current = getattr(boundary, dim)
        if current is None:
            return
        extra = data.draw(st.sampled_from(pools[dim]))
        widened = ConsentBoundary(**{
            **{k: getattr(boundary, k) for k in boundary.__dataclass_fields__},
            dim: current | {extra},
        })
        if matches(boundary, ctx(profile)):
            assert matches(widened, ctx(profile))

    @settings(max_examples=150, deadline=None)
    @given(profile=profiles, data=st.data())
    def test_adding_a_restriction_never_grants_access(self, profile, data):
        base = data.draw(boundaries)
        restricted = data.draw(boundaries)
        # combined carries every restriction of base plus extras
        merged = {}
        for name in base.__dataclass_fields__:
            b, r = getattr(base, name), getattr(restricted, name)
            if name == "not_advised_by":
                merged[name] = b | r
            elif name in ("other_info",):
                merged[name] = b
            elif name in ("show_boundary", "show_to_parent_author"):
                merged[name] = b
            else:
                merged[name] = b if b is not None else r
        combined = ConsentBoundary(**merged)
        if not matches(base, ctx(profile)):
            assert not matches(combined, ctx(profile))


# ---------------------------------------------------------------------------
# check_restriction
# ---------------------------------------------------------------------------

class TestRestriction:
    def test_narrowing_sequence_public_race_then_status(self):
        step1 = ConsentBoundary(races_allowed=frozenset({"asian"}))
        step2 = ConsentBoundary(races_allowed=frozenset({"asian"}),
                                require_advising_change=True)
        assert check_restriction(PUBLIC_BOUNDARY, step1).ok
        assert check_restriction(step1, step2).ok

    def test_unrestricting_a_dimension_is_widening(self):
        narrowed = ConsentBoundary(races_allowed=frozenset({"asian"}))
        result = check_restriction(narrowed, PUBLIC_BOUNDARY)
        assert not result.ok
        assert result.violations[0].dimension == "races_allowed"

    def test_growing_an_allow_set_is_widening(self):
        old = ConsentBoundary(races_allowed=frozenset({"asian"}))
        new = ConsentBoundary(races_allowed=frozenset({"asian", "white"}))
        assert not check_restriction(old, new).ok

    def test_exclusions_may_only_grow(self):
        old = ConsentBoundary(not_advised_by=frozenset({"fac-astone", "fac-dkim"}))
        bigger = ConsentBoundary(not_advised_by=frozenset({"fac-astone", "fac-dkim", "fac-jreyes"}))
        smaller = ConsentBoundary(not_advised_by=frozenset({"fac-astone"}))
        assert check_restriction(old, bigger).ok
        assert check_restriction(old, smaller).violations[0].dimension == "not_advised_by"

    def test_required_flags_may_only_turn_on(self):
        flagged = ConsentBoundary(require_advising_change=True)
        assert check_restriction(PUBLIC_BOUNDARY, flagged).ok
        assert not check_restriction(flagged, PUBLIC_BOUNDARY).ok

    def test_required_value_cannot_flip(self):
        intl = ConsentBoundary(require_international=True)
        domestic = ConsentBoundary(require_international=False)
        assert not check_restriction(intl, domestic).ok

    def test_display_flags_are_exempt(self):
        old = ConsentBoundary(races_allowed=frozenset({"asian"}),
                              show_boundary=False, show_to_parent_author=True)
        new = ConsentBoundary(races_allowed=frozenset({"asian"}),
                              show_boundary=True, show_to_parent_author=False)
        assert check_restriction(old, new).ok
        assert check_restriction(new, old).ok

    def test_free_text_cannot_change_in_a_restriction(self):
        old = ConsentBoundary(other_info="my lab cohort")
        new = ConsentBoundary(other_info="someone else entirely")
        assert not check_restriction(old, new).ok
        assert check_restriction(old, ConsentBoundary(other_info="my lab cohort")).ok

    @settings(max_examples=200, deadline=None)
    @given(data=st.data())
    def test_accepted_restrictions_shrink_audiences_extensionally(self, data):
        """Syntactic narrowing must imply audience subset over any population."""
        author = data.draw(profiles)
        old = data.draw(author_valid_boundaries(author))
        new = data.draw(author_valid_boundaries(author))
        result = check_restriction(old, new)
        if not result.ok:
            return
        for i in range(30):
            viewer = data.draw(profiles)
            context = ctx(viewer, viewer=f"v{i}")
            if matches(new, context):
                assert matches(old, context), (old, new, viewer)
