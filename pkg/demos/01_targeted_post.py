"""Walkthrough: posting to a trait-defined audience.

A poster shares something only with international students who have dealt
with communication issues or missing feedback, while keeping anyone advised
by one particular faculty member out. Nobody learns anyone's identity; the
engine resolves the audience from voluntarily declared traits.

Run:  python3 demos/01_targeted_post.py
"""

from enclave import ConsentBoundary, Platform, TraitProfile

platform = Platform()
moderator = platform.moderator


def join(email, persona, **traits):
    sets = {k: frozenset(v) for k, v in traits.items() if isinstance(v, (list, set))}
    scalars = {k: v for k, v in traits.items() if not isinstance(v, (list, set))}
    account = platform.register(email, TraitProfile(**scalars, **sets), persona)
    platform.approve_signup(moderator.account_id, account.account_id, True)
    return account


poster = join("mika@univ.edu", "quietreed", international=True,
              challenges_experienced=["communication-issue"],
              current_advisors=["fac-jreyes"])
ally = join("noor@univ.edu", "fern09", international=True,
            challenges_experienced=["lack-of-feedback"],
            current_advisors=["fac-dkim"])
advisee = join("sam@univ.edu", "tide42", international=True,
               challenges_experienced=["communication-issue"],
               current_advisors=["fac-astone"])          # advised by the excluded faculty
domestic = join("lee@univ.edu", "brook77", international=False,
                challenges_experienced=["lack-of-feedback"],
                current_advisors=["fac-dkim"])
undeclared = join("kim@univ.edu", "stone88")             # declared nothing

post = platform.create_post(
    poster.account_id, "quietreed",
    "how do you bring up feedback gaps without souring the relationship?",
    ConsentBoundary(
        require_international=True,
        not_advised_by=frozenset({"fac-astone"}),
        challenges_any=frozenset({"communication-issue", "lack-of-feedback"}),
        show_boundary=True,
    ),
)

print("audience:", sorted(platform.audience_of(post.node_id)))
for account, name in [(poster, "poster"), (ally, "matching peer"),
                      (advisee, "excluded advisee"), (domestic, "domestic"),
                      (undeclared, "undeclared")]:
    feed = [n.node_id for n in platform.get_feed(account.account_id)]
    print(f"{name:>17}: {'sees the post' if post.node_id in feed else 'sees nothing'}")

event = platform.notifier.events[-1]
print("notified:", sorted(event.recipients), "| preview:", repr(event.preview))
print("boundary chip served to the ally:",
      platform.boundary_view(ally.account_id, post.node_id) is not None)
