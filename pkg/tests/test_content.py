"""Content lifecycle: publishing, holds, restriction, deletion, feeds."""

from __future__ import annotations

import pytest

from enclave.boundaries import ConsentBoundary, PUBLIC_BOUNDARY
from enclave.errors import (
    NotAuthor,
    NotAuthorized,
    NotHeld,
    ParentNotVisible,
    UnknownThread,
    WideningViolation,
)
from enclave.sim import oracle
from enclave.traits import TraitProfile

from .conftest import activate, make_platform


def oracle_agrees_everywhere(platform):
    snap = platform.export_state()
    for node_id in snap["nodes"]:
        engine = platform.audience_of(node_id)
        brute = oracle.oracle_audience(snap, node_id)
        assert engine == brute, f"audience mismatch on {node_id}"


@pytest.fixture
def world(platform):
    """Small population with varied traits plus a public root post."""
    people = {
        "ana": activate(platform, "ana@univ.edu",
                        TraitProfile(races=frozenset({"asian"}),
                                     advising_status_changed=True,
                                     current_advisors=frozenset({"fac-dkim"})),
                        "ana_posts"),
        "bo": activate(platform, "bo@univ.edu",
                       TraitProfile(races=frozenset({"asian"}),
                                    international=True,
                                    current_advisors=frozenset({"fac-jreyes"})),
                       "bo_posts"),
        "cy": activate(platform, "cy@univ.edu",
                       TraitProfile(races=frozenset({"white"}),
                                    advising_status_changed=True,
                                    current_advisors=frozenset({"fac-astone"})),
                       "cy_posts"),
        "di": activate(platform, "di@univ.edu", TraitProfile(), "di_posts"),
    }
    post = platform.create_post(people["di"].account_id, "di_posts", "welcome thread")
    return platform, people, post


class TestCreatePost:
    def test_public_post_reaches_every_active_account(self, world):
        platform, people, post = world
        audience = platform.audience_of(post.node_id)
        expected = {a.account_id for a in people.values()} | {platform.moderator.account_id}
        assert audience == frozenset(expected)
        for account in people.values():
            assert post.node_id in [n.node_id for n in platform.get_feed(account.account_id)]
        oracle_agrees_everywhere(platform)

    def test_targeted_post_fixture(self, world):
        platform, people, _ = world
        boundary = ConsentBoundary(races_allowed=frozenset({"asian"}),
                                   show_boundary=True)
        post = platform.create_post(people["ana"].account_id, "ana_posts",
                                    "for students who share this background",
                                    boundary)
        audience = platform.audience_of(post.node_id)
        assert audience == frozenset({
            people["ana"].account_id, people["bo"].account_id,
            platform.moderator.account_id})
        oracle_agrees_everywhere(platform)

    def test_pending_accounts_are_not_audience(self, platform):
        author = activate(platform, "a@univ.edu", TraitProfile(), "author01")
        pending = platform.register("p@univ.edu", TraitProfile(), "pending1")
        post = platform.create_post(author.account_id, "author01", "hello")
        assert pending.account_id not in platform.audience_of(post.node_id)

    def test_free_text_boundary_goes_to_held(self, world):
        platform, people, _ = world
        outbox_before = len(platform.transport.messages)
        post = platform.create_post(
            people["ana"].account_id, "ana_posts", "only for my cohort",
            ConsentBoundary(other_info="students in my lab cohort"))
        assert post.state.value == "held"
        # held: no feed for anyone, no notifications, but queued for review
        for person in people.values():
            assert post.node_id not in [n.node_id for n in platform.get_feed(person.account_id)]
        assert len(platform.transport.messages) == outbox_before
        queue = platform.moderation.queue(platform.moderator.account_id)
        assert [h["node_id"] for h in queue["held"]] == [post.node_id]
        # visible in-thread only to author and moderator
        assert platform.audience_of(post.node_id) == frozenset(
            {people["ana"].account_id, platform.moderator.account_id})
        oracle_agrees_everywhere(platform)

    def test_comments_on_held_posts_rejected(self, world):
        platform, people, _ = world
        held = platform.create_post(
            people["ana"].account_id, "ana_posts", "quiet one",
            ConsentBoundary(other_info="the people from last week's meeting"))
        with pytest.raises(ParentNotVisible):
            platform.create_comment(people["bo"].account_id, "bo_posts",
                                    held.node_id, "what?")


class TestCreateComment:
    def test_unrestricted_comment_inherits_parent_audience(self, world):
        platform, people, post = world
        comment = platform.create_comment(people["ana"].account_id, "ana_posts",
                                          post.node_id, "seconding this")
        assert platform.audience_of(comment.node_id) == platform.audience_of(post.node_id)
        oracle_agrees_everywhere(platform)

    def test_commenter_outside_parent_audience_rejected(self, world):
        platform, people, _ = world
        gated = platform.create_post(
            people["ana"].account_id, "ana_posts", "changed-advisor circle",
            ConsentBoundary(require_advising_change=True))
        with pytest.raises(ParentNotVisible):
            platform.create_comment(people["bo"].account_id, "bo_posts",
                                    gated.node_id, "I cannot even see this")

    def test_composed_reply_with_grant(self, world):
        platform, people, post = world
        ev = activate(platform, "ev@univ.edu",
                      TraitProfile(international=True, advising_status_changed=True),
                      "ev_posts")
        comment = platform.create_comment(
            people["cy"].account_id, "cy_posts", post.node_id,
            "sharing my experience",
            ConsentBoundary(require_advising_change=True))
        reply = platform.create_comment(
            ev.account_id, "ev_posts", comment.node_id,
            "replying to you directly",
            ConsentBoundary(require_international=True,
                            require_advising_change=True))
        audience = platform.audience_of(reply.node_id)
        # cy is not international but is being replied to => grant keeps them;
        # ana and di fail the reply's boundary; bo never saw the parent
        assert audience == frozenset({
            people["cy"].account_id, ev.account_id,
            platform.moderator.account_id})
        assert audience <= platform.audience_of(comment.node_id)
        oracle_agrees_everywhere(platform)


class TestRestriction:
    def test_narrowing_sequence_shrinks_audiences_silently(self, world):
        platform, people, post = world
        comment = platform.create_comment(people["ana"].account_id, "ana_posts",
                                          post.node_id, "starts public")
        before = platform.audience_of(comment.node_id)
        outbox_before = len(platform.transport.messages)

        step1 = platform.restrict_node_boundary(
            people["ana"].account_id, comment.node_id,
            ConsentBoundary(races_allowed=frozenset({"asian"})))
        mid = platform.audience_of(step1.node_id)
        platform.restrict_node_boundary(
            people["ana"].account_id, comment.node_id,
            ConsentBoundary(races_allowed=frozenset({"asian"}),
                            require_advising_change=True))
        after = platform.audience_of(comment.node_id)

        assert after < mid < before
        assert len(platform.transport.messages) == outbox_before
        assert len(platform.notifier.events) == 2  # the two publishes only
        oracle_agrees_everywhere(platform)

    def test_widening_rejected(self, world):
        platform, people, post = world
        comment = platform.create_comment(
            people["ana"].account_id, "ana_posts", post.node_id, "narrow",
            ConsentBoundary(races_allowed=frozenset({"asian"})))
        with pytest.raises(WideningViolation):
            platform.restrict_node_boundary(people["ana"].account_id,
                                            comment.node_id, PUBLIC_BOUNDARY)

    def test_only_author_may_restrict(self, world):
        platform, people, post = world
        with pytest.raises(NotAuthor):
            platform.restrict_node_boundary(
                people["ana"].account_id, post.node_id,
                ConsentBoundary(require_advising_change=True))

    def test_excluded_replier_loses_thread_and_own_reply(self, world):
        platform, people, post = world
        reply = platform.create_comment(people["bo"].account_id, "bo_posts",
                                        post.node_id, "bo was here")
        assert post.node_id in [n.node_id for n in platform.get_feed(people["bo"].account_id)]

        platform.restrict_node_boundary(
            people["di"].account_id, post.node_id,
            ConsentBoundary(require_advising_change=True))

        # bo never declared an advising change: the post leaves their feed
        # and their own reply goes with it (no notification of any kind)
        feed = [n.node_id for n in platform.get_feed(people["bo"].account_id)]
        assert post.node_id not in feed
        visible = platform.get_thread(people["bo"].account_id, post.thread_id)
        assert visible == []
        assert people["bo"].account_id not in platform.audience_of(reply.node_id)
        oracle_agrees_everywhere(platform)

    def test_history_is_pointwise_narrowing(self, world):
        platform, people, post = world
        comment = platform.create_comment(people["ana"].account_id, "ana_posts",
                                          post.node_id, "history check")
        platform.restrict_node_boundary(
            people["ana"].account_id, comment.node_id,
            ConsentBoundary(races_allowed=frozenset({"asian"})))
        platform.restrict_node_boundary(
            people["ana"].account_id, comment.node_id,
            ConsentBoundary(races_allowed=frozenset({"asian"}),
                            require_advising_change=True))
        from enclave.boundaries import check_restriction
        history = [b for _, b in comment.boundary_history]
        assert history[-1] == comment.boundary
        for old, new in zip(history, history[1:]):
            assert check_restriction(old, new).ok

    def test_narrowing_survives_participant_churn(self, world):
        # a comment restricted to a persona stays restrictable after that
        # persona's nodes are deleted; newly introduced names still need to
        # have participated
        platform, people, post = world
        other = platform.create_comment(people["bo"].account_id, "bo_posts",
                                        post.node_id, "present")
        mine = platform.create_comment(
            people["ana"].account_id, "ana_posts", post.node_id, "for bo",
            ConsentBoundary(usernames_allowed=frozenset({"bo_posts"})))
        plain = platform.create_comment(people["ana"].account_id, "ana_posts",
                                        post.node_id, "open")
        platform.delete_node(people["bo"].account_id, other.node_id)

        platform.restrict_node_boundary(
            people["ana"].account_id, mine.node_id,
            ConsentBoundary(usernames_allowed=frozenset({"bo_posts"}),
                            require_advising_change=True))

        from enclave.errors import UsernameNotInThread
        with pytest.raises(UsernameNotInThread):
            platform.restrict_node_boundary(
                people["ana"].account_id, plain.node_id,
                ConsentBoundary(usernames_allowed=frozenset({"never_here"})))

    def test_restriction_does_not_touch_other_nodes(self, world):
        platform, people, post = world
        other = platform.create_post(people["ana"].account_id, "ana_posts",
                                     "a separate post")
        before = other.boundary
        platform.restrict_node_boundary(
            people["di"].account_id, post.node_id,
            ConsentBoundary(require_advising_change=True))
        assert other.boundary == before


class TestVisibilityToggle:
    def test_round_trip_and_view_rules(self, world):
        platform, people, post = world
        node = platform.create_post(
            people["ana"].account_id, "ana_posts", "with visible boundary",
            ConsentBoundary(races_allowed=frozenset({"asian"}), show_boundary=True))
        assert platform.boundary_view(people["bo"].account_id, node.node_id) is not None
        platform.toggle_boundary_visibility(people["ana"].account_id, node.node_id, False)
        assert platform.boundary_view(people["bo"].account_id, node.node_id) is None
        platform.toggle_boundary_visibility(people["ana"].account_id, node.node_id, True)
        assert platform.boundary_view(people["bo"].account_id, node.node_id) is not None
        # outside the audience the boundary is never served
        assert platform.boundary_view(people["cy"].account_id, node.node_id) is None

    def test_only_author_toggles(self, world):
        platform, people, post = world
        with pytest.raises(NotAuthor):
            platform.toggle_boundary_visibility(people["ana"].account_id,
                                                post.node_id, True)


class TestDeletion:
    def test_post_deletion_hides_whole_thread(self, world):
        platform, people, post = world
        comment = platform.create_comment(people["ana"].account_id, "ana_posts",
                                          post.node_id, "soon gone")
        platform.delete_node(people["di"].account_id, post.node_id)
        for person in people.values():
            assert platform.get_feed(person.account_id) == []
            assert platform.get_thread(person.account_id, post.thread_id) == []
        # bodies retained for moderator audit
        mod_view = platform.get_thread(platform.moderator.account_id, post.thread_id)
        assert {n.node_id for n in mod_view} == {post.node_id, comment.node_id}
        oracle_agrees_everywhere(platform)

    def test_comment_deletion_hides_subtree_only(self, world):
        platform, people, post = world
        mid = platform.create_comment(people["ana"].account_id, "ana_posts",
                                      post.node_id, "middle")
        child = platform.create_comment(people["bo"].account_id, "bo_posts",
                                        mid.node_id, "under middle")
        sibling = platform.create_comment(people["cy"].account_id, "cy_posts",
                                          post.node_id, "sibling")
        platform.delete_node(people["ana"].account_id, mid.node_id)
        visible = {n.node_id for n in platform.get_thread(people["di"].account_id,
                                                          post.thread_id)}
        assert visible == {post.node_id, sibling.node_id}
        assert child.node_id not in visible
        oracle_agrees_everywhere(platform)

    def test_only_author_or_moderator_deletes(self, world):
        platform, people, post = world
        with pytest.raises(NotAuthorized):
            platform.delete_node(people["ana"].account_id, post.node_id)
        removed = platform.moderate_remove(platform.moderator.account_id,
                                           post.node_id, "breaks community rules")
        assert removed.state.value == "deleted"
        reasons = [r.detail for r in platform.moderation.removal_records()]
        assert reasons == ["breaks community rules"]


class TestLastUsedBoundary:
    def test_recency_then_default_then_public(self, world):
        platform, people, post = world
        boundary = ConsentBoundary(require_advising_change=True)
        platform.create_comment(people["ana"].account_id, "ana_posts",
                                post.node_id, "with boundary", boundary)
        assert platform.last_used_boundary(people["ana"].account_id,
                                           post.thread_id) == boundary

        # no nodes in thread: fall back to the account default
        default = ConsentBoundary(races_allowed=frozenset({"asian"}))
        platform.registry.set_default_boundary(people["bo"].account_id, default)
        assert platform.last_used_boundary(people["bo"].account_id,
                                           post.thread_id) == default

        # no nodes, no default: public
        assert platform.last_used_boundary(people["cy"].account_id,
                                           post.thread_id) == PUBLIC_BOUNDARY

    def test_unknown_thread_raises(self, world):
        platform, people, _ = world
        with pytest.raises(UnknownThread):
            platform.last_used_boundary(people["ana"].account_id, "thr_999999")


class TestFeedsAndThreads:
    def test_feed_is_reverse_chronological(self, world):
        platform, people, post = world
        second = platform.create_post(people["ana"].account_id, "ana_posts", "two")
        third = platform.create_post(people["bo"].account_id, "bo_posts", "three")
        feed = [n.node_id for n in platform.get_feed(people["di"].account_id)]
        assert feed == [third.node_id, second.node_id, post.node_id]

    def test_feed_matches_oracle_for_every_viewer(self, world):
        platform, people, post = world
        platform.create_post(people["ana"].account_id, "ana_posts", "gated",
                             ConsentBoundary(races_allowed=frozenset({"asian"})))
        platform.create_post(people["cy"].account_id, "cy_posts", "switchers",
                             ConsentBoundary(require_advising_change=True))
        snap = platform.export_state()
        for account in list(people.values()) + [platform.moderator]:
            feed = [n.node_id for n in platform.get_feed(account.account_id)]
            assert feed == oracle.oracle_feed(snap, account.account_id)

    def test_thread_view_matches_oracle(self, world):
        platform, people, post = world
        c1 = platform.create_comment(people["ana"].account_id, "ana_posts",
                                     post.node_id, "open")
        platform.create_comment(
            people["cy"].account_id, "cy_posts", c1.node_id, "gated",
            ConsentBoundary(require_advising_change=True))
        snap = platform.export_state()
        for account in list(people.values()) + [platform.moderator]:
            visible = {n.node_id for n in platform.get_thread(account.account_id,
                                                              post.thread_id)}
            assert visible == oracle.oracle_visible_thread(
                snap, account.account_id, post.thread_id)

    def test_held_visible_only_to_author_in_thread_view(self, world):
        platform, people, post = world
        held = platform.create_comment(
            people["ana"].account_id, "ana_posts", post.node_id, "for some",
            ConsentBoundary(other_info="people who know the situation"))
        assert held.state.value == "held"
        own_view = {n.node_id for n in platform.get_thread(people["ana"].account_id,
                                                           post.thread_id)}
        other_view = {n.node_id for n in platform.get_thread(people["bo"].account_id,
                                                             post.thread_id)}
        assert held.node_id in own_view
        assert held.node_id not in other_view
