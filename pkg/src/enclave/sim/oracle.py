"""Independent brute-force visibility oracle.

Recomputes who can see what from first principles, per viewer and per node,
directly over a plain world snapshot (dicts of accounts and nodes with
canonical boundary documents). It deliberately shares no evaluation code
with the engine in ``enclave.boundaries`` / ``enclave.content``: this module
is the referee those are checked against, on every fixture and fuzz world.

World snapshot schema (produced by the shadow world and by the platform's
state export):

    {
      "accounts": {account_id: {"email", "status", "moderator", "personas",
                                "profile"}},
      "nodes":    {node_id: {"node_id", "thread_id", "parent_id", "author",
                             "persona", "body", "boundary", "state",
                             "resolved_recipients", "seq"}},
    }

Profile and boundary values are the canonical serialized forms (sets as
sorted arrays, undeclared/unrestricted keys absent). For snapshot-wide
audits, ``audience_map`` prepares both sides once and walks threads
top-down; the per-viewer functions stay as the plain, slow reference.
"""

from __future__ import annotations

from typing import Any

World = dict[str, Any]


# ---------------------------------------------------------------------------
# Per-viewer boundary check (the oracle's own matching logic)
# ---------------------------------------------------------------------------

def _viewer_inside_boundary(doc: dict, profile: dict, personas: set[str]) -> bool:
    """Does a viewer with this declared profile satisfy every restriction?

    Restrictions combine with AND; the value lists inside one restriction
    are OR. A viewer who left a trait undeclared fails any restriction on
    that trait, and the advisor exclusion also fails viewers with no
    declared advisors at all.
    """
    if "gender_allowed" in doc:
        if profile.get("gender") not in doc["gender_allowed"]:
            return False
    if "races_allowed" in doc:
        if not set(profile.get("races", [])) & set(doc["races_allowed"]):
            return False
    if "require_international" in doc:
        if "international" not in profile:
            return False
        if profile["international"] != doc["require_international"]:
            return False
    if "challenges_any" in doc:
        if not set(profile.get("challenges_experienced", [])) & set(doc["challenges_any"]):
            return False
    if "require_advising_change" in doc:
        if profile.get("advising_status_changed") is not True:
            return False
    if "programs_allowed" in doc:
        if profile.get("phd_program") not in doc["programs_allowed"]:
            return False
    advisors = set(profile.get("current_advisors", [])) | set(profile.get("prior_advisors", []))
    if "advised_by_any" in doc:
        if not advisors & set(doc["advised_by_any"]):
            return False
    if "not_advised_by" in doc and doc["not_advised_by"]:
        if not advisors:
            return False
        if advisors & set(doc["not_advised_by"]):
            return False
    if "usernames_allowed" in doc:
        if not personas & set(doc["usernames_allowed"]):
            return False
    return True


# ---------------------------------------------------------------------------
# World helpers
# ---------------------------------------------------------------------------

def active_accounts(world: World) -> dict[str, dict]:
    return {aid: acc for aid, acc in world["accounts"].items()
            if acc["status"] == "active"}


def chain_to_root(world: World, node_id: str) -> list[dict]:
    """Nodes from the root post down to (and including) the target."""
    nodes = world["nodes"]
    chain = []
    cursor: str | None = node_id
    while cursor is not None:
        node = nodes[cursor]
        chain.append(node)
        cursor = node.get("parent_id")
    chain.reverse()
    return chain


def _viewer_passes_level(world: World, viewer_id: str, node: dict,
                         parent_author: str | None) -> bool:
    account = world["accounts"][viewer_id]
    if account.get("moderator"):
        return True
    if viewer_id == node["author"]:
        return True
    doc = node["boundary"]
    if parent_author is not None and viewer_id == parent_author and \
            doc.get("show_to_parent_author", True):
        return True
    if not _viewer_inside_boundary(doc, account.get("profile", {}),
                                   set(account.get("personas", []))):
        return False
    resolved = node.get("resolved_recipients")
    if resolved is not None and viewer_id not in resolved:
        return False
    return True


def viewer_in_audience(world: World, viewer_id: str, node_id: str) -> bool:
    """Brute-force per-viewer visibility of one node (published chains)."""
    account = world["accounts"].get(viewer_id)
    if account is None or account["status"] != "active":
        return False
    parent_author: str | None = None
    for node in chain_to_root(world, node_id):
        if not _viewer_passes_level(world, viewer_id, node, parent_author):
            return False
        parent_author = node["author"]
    return True


def oracle_audience(world: World, node_id: str) -> frozenset[str]:
    """Everyone permitted to view the node at this instant.

    Held nodes belong only to their author and the moderators; deleted
    nodes (or nodes under a deleted ancestor) only to moderators.
    """
    actives = active_accounts(world)
    moderators = {aid for aid, acc in actives.items() if acc.get("moderator")}
    chain = chain_to_root(world, node_id)
    node = chain[-1]

    if any(n["state"] == "deleted" for n in chain):
        return frozenset(moderators)
    if node["state"] == "held":
        grant = {node["author"]} if node["author"] in actives else set()
        return frozenset(moderators | grant)

    return frozenset(aid for aid in actives
                     if viewer_in_audience(world, aid, node_id))


# ---------------------------------------------------------------------------
# Snapshot-wide audit (prepared once, walked top-down)
# ---------------------------------------------------------------------------

class _Viewer:
    __slots__ = ("account_id", "moderator", "gender", "races", "international",
                 "challenges", "changed", "program", "advisors", "personas")

    def __init__(self, account_id: str, account: dict):
        profile = account.get("profile", {})
        self.account_id = account_id
        self.moderator = bool(account.get("moderator"))
        self.gender = profile.get("gender")
        self.races = frozenset(profile.get("races", []))
        self.international = profile.get("international")
        self.challenges = frozenset(profile.get("challenges_experienced", []))
        self.changed = profile.get("advising_status_changed")
        self.program = profile.get("phd_program")
        self.advisors = frozenset(profile.get("current_advisors", [])) | \
            frozenset(profile.get("prior_advisors", []))
        self.personas = frozenset(account.get("personas", []))


def _prepared_inside(doc: dict, v: _Viewer) -> bool:
    # same conjunction as _viewer_inside_boundary, over precomputed sets
    if "gender_allowed" in doc and v.gender not in doc["gender_allowed"]:
        return False
    if "races_allowed" in doc and not (v.races & doc["races_allowed"]):
        return False
    if "require_international" in doc and v.international != doc["require_international"]:
        return False
    if "challenges_any" in doc and not (v.challenges & doc["challenges_any"]):
        return False
    if "require_advising_change" in doc and v.changed is not True:
        return False
    if "programs_allowed" in doc and v.program not in doc["programs_allowed"]:
        return False
    if "advised_by_any" in doc and not (v.advisors & doc["advised_by_any"]):
        return False
    if "not_advised_by" in doc:
        if not v.advisors or (v.advisors & doc["not_advised_by"]):
            return False
    if "usernames_allowed" in doc and not (v.personas & doc["usernames_allowed"]):
        return False
    return True


_SET_KEYS = ("gender_allowed", "races_allowed", "challenges_any",
             "programs_allowed", "advised_by_any", "not_advised_by",
             "usernames_allowed")


def _prepare_doc(doc: dict) -> dict:
    prepared = dict(doc)
    for key in _SET_KEYS:
        if key in prepared:
            prepared[key] = frozenset(prepared[key])
    if not prepared.get("not_advised_by"):
        # an empty exclusion list restricts nothing
        prepared.pop("not_advised_by", None)
    return prepared


def audience_map(world: World) -> dict[str, frozenset[str]]:
    """Audience of every node, composed root-down over prepared viewers."""
    viewers = [_Viewer(aid, acc) for aid, acc in world["accounts"].items()
               if acc["status"] == "active"]
    moderators = frozenset(v.account_id for v in viewers if v.moderator)
    active_ids = frozenset(v.account_id for v in viewers)
    by_id = {v.account_id: v for v in viewers}

    nodes = sorted(world["nodes"].values(), key=lambda n: n["seq"])
    audiences: dict[str, frozenset[str]] = {}
    dead: set[str] = set()

    for node in nodes:
        node_id = node["node_id"]
        parent_id = node.get("parent_id")
        if node["state"] == "deleted" or parent_id in dead:
            dead.add(node_id)
            audiences[node_id] = moderators
            continue
        if node["state"] == "held":
            author = frozenset({node["author"]}) & active_ids
            audiences[node_id] = moderators | author
            continue
        doc = _prepare_doc(node["boundary"])
        resolved = node.get("resolved_recipients")
        resolved_set = frozenset(resolved) if resolved is not None else None
        author = node["author"]
        parent_author = world["nodes"][parent_id]["author"] if parent_id else None
        grant_on = doc.get("show_to_parent_author", True)
        pool = audiences[parent_id] if parent_id else active_ids

        members = set()
        for viewer_id in pool:
            v = by_id[viewer_id]
            if v.moderator or viewer_id == author:
                members.add(viewer_id)
                continue
            if grant_on and parent_author is not None and viewer_id == parent_author:
                members.add(viewer_id)
                continue
            if not _prepared_inside(doc, v):
                continue
            if resolved_set is not None and viewer_id not in resolved_set:
                continue
            members.add(viewer_id)
        audiences[node_id] = frozenset(members)
    return audiences


# ---------------------------------------------------------------------------
# Feeds, threads, participants, notifications
# ---------------------------------------------------------------------------

def oracle_feed(world: World, viewer_id: str,
                audiences: dict[str, frozenset[str]] | None = None) -> list[str]:
    """Visible published posts, newest first."""
    posts = [n for n in world["nodes"].values()
             if n.get("parent_id") is None and n["state"] == "published"]
    posts.sort(key=lambda n: n["seq"], reverse=True)
    if audiences is None:
        return [n["node_id"] for n in posts
                if viewer_id in oracle_audience(world, n["node_id"])]
    return [n["node_id"] for n in posts if viewer_id in audiences[n["node_id"]]]


def oracle_visible_thread(world: World, viewer_id: str, thread_id: str,
                          audiences: dict[str, frozenset[str]] | None = None) -> set[str]:
    """Node ids the viewer may see in a thread view (held own nodes included)."""
    account = world["accounts"].get(viewer_id)
    if account is None or account["status"] != "active":
        return set()
    if account.get("moderator"):
        return {nid for nid, n in world["nodes"].items()
                if n["thread_id"] == thread_id}
    if audiences is None:
        audiences = audience_map(world)
    visible = set()
    for nid, node in world["nodes"].items():
        if node["thread_id"] != thread_id:
            continue
        if viewer_id not in audiences[nid]:
            continue
        if node["state"] == "published":
            visible.add(nid)
        elif node["state"] == "held" and node["author"] == viewer_id:
            visible.add(nid)
    return visible


def thread_participants(world: World, thread_id: str) -> set[str]:
    """Accounts with at least one live (published, not hidden) node."""
    out = set()
    for nid, node in world["nodes"].items():
        if node["thread_id"] != thread_id or node["state"] != "published":
            continue
        if any(n["state"] != "published" for n in chain_to_root(world, nid)):
            continue
        out.add(node["author"])
    return out


def expected_post_recipients(world: World, node_id: str) -> frozenset[str]:
    node = world["nodes"][node_id]
    return oracle_audience(world, node_id) - {node["author"]}


def expected_comment_recipients(world: World, node_id: str) -> frozenset[str]:
    node = world["nodes"][node_id]
    participants = thread_participants(world, node["thread_id"])
    return (frozenset(participants) & oracle_audience(world, node_id)) - {node["author"]}
