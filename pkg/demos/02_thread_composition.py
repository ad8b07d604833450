"""Walkthrough: comment boundaries nest inside the post's.

Every comment inherits the whole chain above it: its own boundary can only
narrow further. The one exception is the reply-to grant; the person being
replied to keeps seeing the reply (unless the replier turns that off), but
even the grant never overrides an ancestor boundary.

Run:  python3 demos/02_thread_composition.py
"""

from enclave import ConsentBoundary, Platform, TraitProfile

platform = Platform()
moderator = platform.moderator


def join(email, persona, intl=None, changed=None):
    account = platform.register(
        email, TraitProfile(international=intl, advising_status_changed=changed),
        persona)
    platform.approve_signup(moderator.account_id, account.account_id, True)
    return account


poster = join("ona@univ.edu", "thread_root", intl=False, changed=True)
target = join("ravi@univ.edu", "reply_target", intl=False, changed=True)
replier = join("ines@univ.edu", "reply_author", intl=True, changed=True)
peer = join("tam@univ.edu", "both_traits", intl=True, changed=True)
lurker = join("joe@univ.edu", "no_change", intl=True, changed=False)

post = platform.create_post(
    poster.account_id, "thread_root",
    "switched advisors last year, happy to answer questions",
    ConsentBoundary(require_advising_change=True))

comment = platform.create_comment(
    target.account_id, "reply_target", post.node_id,
    "how did you handle the funding gap?",
    ConsentBoundary(require_advising_change=True))

reply = platform.create_comment(
    replier.account_id, "reply_author", comment.node_id,
    "same situation, happy to compare notes",
    ConsentBoundary(require_international=True, require_advising_change=True))

for node, name in [(post, "post"), (comment, "comment"), (reply, "reply")]:
    print(f"{name:>8} audience: {sorted(platform.audience_of(node.node_id))}")

print("\nreply target kept via grant:",
      target.account_id in platform.audience_of(reply.node_id))
print("poster (not international) excluded from reply:",
      poster.account_id not in platform.audience_of(reply.node_id))
print("lurker (never switched) sees nothing at all:",
      [n.node_id for n in platform.get_thread(lurker.account_id, post.thread_id)])

print("\neach viewer's slice of the thread:")
for account in (poster, target, replier, peer):
    visible = [n.persona for n in platform.get_thread(account.account_id,
                                                      post.thread_id)]
    print(f"  as {account.default_persona:>12}: {visible}")
