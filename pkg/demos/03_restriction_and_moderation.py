"""Walkthrough: narrowing after publication, and free-text audiences.

Published boundaries can only narrow. Narrowing is silent: excluded repliers
simply stop seeing the thread, including their own replies. A boundary with
free text ("other information") holds the node until the moderator picks the
audience; the structured dimensions still cap whatever the moderator chooses.

Run:  python3 demos/03_restriction_and_moderation.py
"""

from enclave import ConsentBoundary, Platform, TraitProfile
from enclave.errors import WideningViolation

platform = Platform()
moderator = platform.moderator


def join(email, persona, **kw):
    sets = {k: frozenset(v) for k, v in kw.items() if isinstance(v, (list, set))}
    scalars = {k: v for k, v in kw.items() if not isinstance(v, (list, set))}
    account = platform.register(email, TraitProfile(**scalars, **sets), persona)
    platform.approve_signup(moderator.account_id, account.account_id, True)
    return account


author = join("pia@univ.edu", "editor01", races=["asian"],
              advising_status_changed=True)
poster = join("max@univ.edu", "poster01")
peer = join("ann@univ.edu", "peer0001", races=["asian"])
other = join("kai@univ.edu", "other001", races=["white"])

post = platform.create_post(poster.account_id, "poster01", "introductions?")
comment = platform.create_comment(author.account_id, "editor01", post.node_id,
                                  "sharing my switch story")
reply = platform.create_comment(other.account_id, "other001", comment.node_id,
                                "following this")

print("before:", sorted(platform.audience_of(comment.node_id)))
sent_before = len(platform.transport.messages)

platform.restrict_node_boundary(
    author.account_id, comment.node_id,
    ConsentBoundary(races_allowed=frozenset({"asian"})))
platform.restrict_node_boundary(
    author.account_id, comment.node_id,
    ConsentBoundary(races_allowed=frozenset({"asian"}),
                    require_advising_change=True))

print("after two narrowings:", sorted(platform.audience_of(comment.node_id)))
print("emails sent during narrowing:", len(platform.transport.messages) - sent_before)
print("excluded replier loses even their own reply:",
      other.account_id not in platform.audience_of(reply.node_id))

try:
    platform.restrict_node_boundary(author.account_id, comment.node_id,
                                    ConsentBoundary())
except WideningViolation as exc:
    print("widening rejected:", exc.message)

held = platform.create_post(
    author.account_id, "editor01", "only for people from the tuesday group",
    ConsentBoundary(require_advising_change=True,
                    other_info="the tuesday peer-mentoring circle"))
print("\nheld post state:", held.state.value)
queue = platform.moderation.queue(moderator.account_id)
entry = queue["held"][0]
print("moderation queue shows:", entry["other_info"],
      "| structured candidates:", entry["structural_audience"])

platform.resolve_other_info(moderator.account_id, held.node_id,
                            frozenset([peer.account_id, other.account_id]))
print("after resolution:", sorted(platform.audience_of(held.node_id)))
print("('other001' was chosen but fails the structured dimension, so stays out)")
