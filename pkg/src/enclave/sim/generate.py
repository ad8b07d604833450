"""Deterministic scenario generation.

``generate`` builds randomized worlds for fuzzing: a population with varied
declared traits, then a weighted action stream (posts to comments at roughly
1:7.7, trait edits, narrowing edits, persona churn, held nodes with
moderator resolutions, and deliberate invalid attempts tagged with the error
they must produce). ``generate_deployment`` emits a fixed-shape scenario at
a small-community deployment scale: 47 users, exactly 18 posts and 139
comments.

Everything is drawn from one ``random.Random(seed)`` over sorted pools, so a
seed maps to one byte-identical scenario forever.
"""

from __future__ import annotations

import random

from ..boundaries import check_restriction
from ..serialization import boundary_from_dict
from ..vocab import (
    DEFAULT_CHALLENGES,
    DEFAULT_FACULTY,
    DEFAULT_PROGRAMS,
    GENDER_OPTIONS,
    RACE_OPTIONS,
)
from . import oracle
from .scenario import Action, Scenario, ScenarioUser
from .world import ShadowWorld

PROGRAMS = sorted(e.id for e in DEFAULT_PROGRAMS)
FACULTY = sorted(e.id for e in DEFAULT_FACULTY)
CHALLENGES = sorted(e.id for e in DEFAULT_CHALLENGES)

_WORDS = (
    "advice", "advisor", "balance", "change", "coping", "deadline", "draft",
    "feedback", "funding", "meeting", "mentoring", "paper", "pressure",
    "progress", "quals", "research", "switching", "thesis", "workload",
)

MAX_DEPTH = 6


def _body(rng: random.Random) -> str:
    n = rng.randint(4, 40)
    return " ".join(rng.choice(_WORDS) for _ in range(n))


def _persona(rng: random.Random, taken: set[str]) -> str:
    while True:
        name = f"{rng.choice(_WORDS)}_{rng.randint(0, 9999):04d}"
        if name not in taken:
            taken.add(name)
            return name


def _profile(rng: random.Random) -> dict:
    profile: dict = {}
    if rng.random() < 0.83:
        profile["gender"] = rng.choices(
            list(GENDER_OPTIONS), weights=[49, 32, 2, 17])[0]
    if rng.random() < 0.9:
        profile["races"] = sorted(rng.sample(list(RACE_OPTIONS),
                                             rng.choices([1, 2], weights=[9, 1])[0]))
    if rng.random() < 0.94:
        profile["international"] = rng.random() < 0.59
    if rng.random() < 0.92:
        profile["phd_program"] = rng.choice(PROGRAMS[:2])
    if rng.random() < 0.72:
        profile["current_advisors"] = sorted(rng.sample(FACULTY, rng.choices(
            [1, 2], weights=[8, 2])[0]))
    if rng.random() < 0.21:
        profile["prior_advisors"] = sorted(rng.sample(FACULTY, 1))
    if rng.random() < 0.65:
        profile["challenges_experienced"] = sorted(rng.sample(
            CHALLENGES, rng.randint(1, 4)))
    if rng.random() < 0.4:
        profile["advising_status_changed"] = rng.random() < 0.6
    return profile


def _author_boundary(rng: random.Random, profile: dict,
                     thread_personas: list[str] | None = None,
                     public_rate: float = 0.55) -> dict:
    """A boundary the author is allowed to set, usually public."""
    if rng.random() < public_rate:
        return {}
    doc: dict = {}
    options = []
    if "gender" in profile:
        options.append("gender")
    if profile.get("races"):
        options.append("races")
    if "international" in profile:
        options.append("international")
    options.extend(["challenges", "change", "program", "advised_by", "excluded"])
    if thread_personas:
        options.append("usernames")
    rng.shuffle(options)
    for dim in options[:rng.randint(1, 3)]:
        if dim == "gender":
            doc["gender_allowed"] = [profile["gender"]]
        elif dim == "races":
            doc["races_allowed"] = sorted(rng.sample(profile["races"], 1))
        elif dim == "international":
            doc["require_international"] = profile["international"]
        elif dim == "challenges":
            doc["challenges_any"] = sorted(rng.sample(CHALLENGES, rng.randint(1, 3)))
        elif dim == "change":
            doc["require_advising_change"] = True
        elif dim == "program":
            doc["programs_allowed"] = sorted(rng.sample(PROGRAMS, rng.randint(1, 2)))
        elif dim == "advised_by":
            doc["advised_by_any"] = sorted(rng.sample(FACULTY, rng.randint(1, 2)))
        elif dim == "excluded":
            doc["not_advised_by"] = sorted(rng.sample(FACULTY, rng.randint(1, 2)))
        elif dim == "usernames":
            doc["usernames_allowed"] = sorted(rng.sample(
                thread_personas, min(len(thread_personas), rng.randint(1, 2))))
    if doc and rng.random() < 0.4:
        doc["show_boundary"] = True
    if rng.random() < 0.08:
        doc["show_to_parent_author"] = False
    return doc


class _Builder:
    """Shared bookkeeping for the generator: a shadow world keyed by emails
    and labels, plus depth and authorship indexes."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.world = ShadowWorld()
        self.actions: list[Action] = []
        self.taken_personas: set[str] = set()
        self.depth: dict[str, int] = {}
        self.labels: list[str] = []
        self.held_labels: list[str] = []
        self.n_labels = 0
        self.moderator_email = "moderator@univ.edu"
        self.world.add_account(self.moderator_email, self.moderator_email,
                               {}, ["steward"], status="active", moderator=True)
        self.taken_personas.add("steward")

    def new_label(self) -> str:
        self.n_labels += 1
        return f"n{self.n_labels:04d}"

    def users(self, count: int) -> list[ScenarioUser]:
        out = []
        for i in range(count):
            email = f"u{i:03d}@univ.edu"
            profile = _profile(self.rng)
            personas = [_persona(self.rng, self.taken_personas)]
            if self.rng.random() < 0.3:
                personas.append(_persona(self.rng, self.taken_personas))
            out.append(ScenarioUser(email, profile, tuple(personas)))
            self.world.add_account(email, email, profile, personas, status="active")
        return out

    def active_emails(self) -> list[str]:
        return [aid for aid, acc in self.world.accounts.items()
                if acc["status"] == "active" and not acc["moderator"]]

    def live_nodes(self, max_depth: int = MAX_DEPTH - 1) -> list[str]:
        """Labels open for replies: published, live lineage, within depth."""
        out = []
        for label in self.labels:
            node = self.world.nodes[label]
            if node["state"] != "published":
                continue
            if self.depth[label] > max_depth:
                continue
            chain = oracle.chain_to_root(self.world.snapshot(), label)
            if any(n["state"] != "published" for n in chain):
                continue
            out.append(label)
        return out

    def audience_emails(self, label: str) -> list[str]:
        audience = oracle.oracle_audience(self.world.snapshot(), label)
        return sorted(a for a in audience
                      if not self.world.accounts[a]["moderator"])

    def emit_post(self, *, held: bool = False) -> bool:
        author = self.rng.choice(self.active_emails())
        profile = self.world.accounts[author]["profile"]
        boundary = _author_boundary(self.rng, profile)
        if held:
            boundary["other_info"] = "people I described to the moderator"
        label = self.new_label()
        persona = self.rng.choice(self.world.accounts[author]["personas"])
        self.actions.append(Action("post", {
            "actor": author, "label": label, "persona": persona,
            "body": _body(self.rng), "boundary": boundary,
        }))
        self.world.add_node(label, f"t_{label}", None, author, persona,
                            "", boundary, "held" if held else "published")
        self.depth[label] = 0
        self.labels.append(label)
        if held:
            self.held_labels.append(label)
        return True

    def emit_comment(self) -> bool:
        candidates = self.live_nodes()
        if not candidates:
            return False
        parent = self.rng.choice(candidates)
        pool = [e for e in self.audience_emails(parent)]
        if not pool:
            return False
        author = self.rng.choice(pool)
        thread_id = self.world.nodes[parent]["thread_id"]
        bound = self._bound_persona(author, thread_id)
        persona = bound or self.rng.choice(self.world.accounts[author]["personas"])
        snapshot = self.world.snapshot()
        thread_personas = sorted({
            n["persona"] for n in self.world.nodes.values()
            if n["thread_id"] == thread_id and n["state"] == "published"
            and all(c["state"] == "published"
                    for c in oracle.chain_to_root(snapshot, n["node_id"]))})
        profile = self.world.accounts[author]["profile"]
        boundary = _author_boundary(self.rng, profile, thread_personas)
        label = self.new_label()
        self.actions.append(Action("comment", {
            "actor": author, "label": label, "parent": parent,
            "persona": persona, "body": _body(self.rng), "boundary": boundary,
        }))
        self.world.add_node(label, thread_id, parent, author, persona,
                            "", boundary, "published")
        self.depth[label] = self.depth[parent] + 1
        self.labels.append(label)
        return True

    def _bound_persona(self, author: str, thread_id: str) -> str | None:
        for node in self.world.nodes.values():
            if node["thread_id"] == thread_id and node["author"] == author:
                return node["persona"]
        return None

    def emit_restrict(self) -> bool:
        own = [(label, self.world.nodes[label]) for label in self.labels
               if self.world.nodes[label]["state"] == "published"]
        self.rng.shuffle(own)
        for label, node in own:
            author = node["author"]
            profile = self.world.accounts[author]["profile"]
            narrowed = self._narrow(dict(node["boundary"]), profile)
            if narrowed is None:
                continue
            old = boundary_from_dict({k: v for k, v in node["boundary"].items()})
            new = boundary_from_dict(narrowed)
            if not check_restriction(old, new).ok:
                continue
            if not self._author_still_holds(narrowed, profile):
                continue
            self.actions.append(Action("restrict", {
                "actor": author, "node": label, "boundary": narrowed,
            }))
            self.world.set_boundary(label, narrowed)
            return True
        return False

    def _narrow(self, doc: dict, profile: dict) -> dict | None:
        rng = self.rng
        choices = []
        if "require_advising_change" not in doc:
            choices.append("add_change")
        if "races_allowed" not in doc and profile.get("races"):
            choices.append("add_race")
        if "gender_allowed" not in doc and "gender" in profile:
            choices.append("add_gender")
        if "require_international" not in doc and "international" in profile:
            choices.append("add_international")
        if len(doc.get("challenges_any", [])) > 1:
            choices.append("shrink_challenges")
        choices.append("grow_exclusion")
        pick = rng.choice(sorted(choices))
        if pick == "add_change":
            doc["require_advising_change"] = True
        elif pick == "add_race":
            doc["races_allowed"] = sorted(rng.sample(profile["races"], 1))
        elif pick == "add_gender":
            doc["gender_allowed"] = [profile["gender"]]
        elif pick == "add_international":
            doc["require_international"] = profile["international"]
        elif pick == "shrink_challenges":
            doc["challenges_any"] = sorted(rng.sample(
                doc["challenges_any"], len(doc["challenges_any"]) - 1))
        elif pick == "grow_exclusion":
            current = set(doc.get("not_advised_by", []))
            remaining = [f for f in FACULTY if f not in current]
            if not remaining:
                return None
            current.add(rng.choice(remaining))
            doc["not_advised_by"] = sorted(current)
        return doc

    def _author_still_holds(self, doc: dict, profile: dict) -> bool:
        if "gender_allowed" in doc and profile.get("gender") not in doc["gender_allowed"]:
            return False
        if "races_allowed" in doc and not (
                set(profile.get("races", [])) & set(doc["races_allowed"])):
            return False
        if "require_international" in doc and \
                profile.get("international") != doc["require_international"]:
            return False
        return True

    def emit_toggle(self) -> bool:
        own = [label for label in self.labels
               if self.world.nodes[label]["state"] == "published"]
        if not own:
            return False
        label = self.rng.choice(own)
        node = self.world.nodes[label]
        show = not node["boundary"].get("show_boundary", False)
        self.actions.append(Action("toggle_visibility", {
            "actor": node["author"], "node": label, "show": show,
        }))
        self.world.set_show_boundary(label, show)
        return True

    def emit_delete(self) -> bool:
        candidates = [label for label in self.labels
                      if self.world.nodes[label]["state"] == "published"]
        if not candidates:
            return False
        label = self.rng.choice(candidates)
        node = self.world.nodes[label]
        if self.rng.random() < 0.3:
            self.actions.append(Action("mod_remove", {
                "node": label, "reason": "community rules"}))
        else:
            self.actions.append(Action("delete", {
                "actor": node["author"], "node": label}))
        self.world.mark_deleted(label)
        return True

    def emit_update_traits(self) -> bool:
        author = self.rng.choice(self.active_emails())
        profile = self.world.accounts[author]["profile"]
        patch: dict = {}
        field = self.rng.choice(["gender", "races", "international", "phd_program",
                                 "current_advisors", "prior_advisors",
                                 "challenges_experienced", "advising_status_changed"])
        clear = field in profile and self.rng.random() < 0.15
        if clear:
            patch[field] = None
        elif field == "gender":
            patch[field] = self.rng.choice(list(GENDER_OPTIONS))
        elif field == "races":
            patch[field] = sorted(self.rng.sample(list(RACE_OPTIONS), 1))
        elif field == "international":
            patch[field] = self.rng.random() < 0.5
        elif field == "phd_program":
            patch[field] = self.rng.choice(PROGRAMS)
        elif field in ("current_advisors", "prior_advisors"):
            patch[field] = sorted(self.rng.sample(FACULTY, self.rng.randint(1, 2)))
        elif field == "challenges_experienced":
            patch[field] = sorted(self.rng.sample(CHALLENGES, self.rng.randint(1, 3)))
        else:
            patch[field] = True
        self.actions.append(Action("update_traits", {"actor": author, "patch": patch}))
        self.world.apply_trait_patch(author, patch)
        return True

    def emit_claim_persona(self) -> bool:
        author = self.rng.choice(self.active_emails())
        name = _persona(self.rng, self.taken_personas)
        self.actions.append(Action("claim_persona", {"actor": author, "name": name}))
        self.world.add_persona(author, name)
        return True

    def emit_register(self) -> bool:
        existing = len([a for a in self.world.accounts.values()])
        email = f"u{existing + 100:03d}@univ.edu"
        if self.world.account_by_email(email):
            return False
        profile = _profile(self.rng)
        persona = _persona(self.rng, self.taken_personas)
        self.actions.append(Action("register", {
            "email": email, "traits": profile, "persona": persona}))
        self.world.add_account(email, email, profile, [persona], status="pending")
        if self.rng.random() < 0.7:
            self.actions.append(Action("approve", {
                "account_email": email, "decision": "approve"}))
            self.world.set_status(email, "active")
        return True

    def emit_resolve(self) -> bool:
        if not self.held_labels:
            return False
        label = self.held_labels.pop(0)
        candidates = self.audience_emails(label)
        extras = self.rng.sample(self.active_emails(),
                                 min(3, len(self.active_emails())))
        recipients = sorted(set(candidates[:4]) | set(extras))
        self.actions.append(Action("resolve", {
            "node": label, "recipients": recipients}))
        self.world.resolve(label, recipients)
        return True

    # -- deliberate failures --------------------------------------------------

    def emit_invalid(self) -> bool:
        kinds = ["widening", "identity_not_held", "parent_not_visible",
                 "persona_taken", "persona_mismatch"]
        self.rng.shuffle(kinds)
        for kind in kinds:
            if getattr(self, f"_invalid_{kind}")():
                return True
        return False

    def _invalid_widening(self) -> bool:
        for label in self.labels:
            node = self.world.nodes[label]
            doc = node["boundary"]
            narrow_keys = set(doc) - {"show_boundary", "show_to_parent_author"}
            if node["state"] == "published" and narrow_keys:
                self.actions.append(Action("restrict", {
                    "actor": node["author"], "node": label, "boundary": {},
                }, expect="widening_violation"))
                return True
        return False

    def _invalid_identity_not_held(self) -> bool:
        for email in self.active_emails():
            profile = self.world.accounts[email]["profile"]
            if "gender" not in profile:
                boundary = {"gender_allowed": ["woman"]}
            elif profile["gender"] != "man":
                boundary = {"gender_allowed": ["man"]}
            else:
                boundary = {"gender_allowed": ["woman"]}
            persona = self.world.accounts[email]["personas"][0]
            self.actions.append(Action("post", {
                "actor": email, "label": self.new_label(), "persona": persona,
                "body": _body(self.rng), "boundary": boundary,
            }, expect="identity_not_held"))
            return True
        return False

    def _invalid_parent_not_visible(self) -> bool:
        for label in self.live_nodes():
            audience = set(self.audience_emails(label))
            outsiders = [e for e in self.active_emails() if e not in audience]
            if outsiders:
                author = self.rng.choice(outsiders)
                persona = self.world.accounts[author]["personas"][0]
                self.actions.append(Action("comment", {
                    "actor": author, "label": self.new_label(), "parent": label,
                    "persona": persona, "body": _body(self.rng), "boundary": {},
                }, expect="parent_not_visible"))
                return True
        return False

    def _invalid_persona_taken(self) -> bool:
        emails = self.active_emails()
        if len(emails) < 2:
            return False
        victim, thief = self.rng.sample(emails, 2)
        name = self.world.accounts[victim]["personas"][0]
        self.actions.append(Action("claim_persona", {
            "actor": thief, "name": name}, expect="persona_taken"))
        return True

    def _invalid_persona_mismatch(self) -> bool:
        for label in self.live_nodes():
            thread_id = self.world.nodes[label]["thread_id"]
            audience = set(self.audience_emails(label))
            for email in sorted(audience):
                bound = self._bound_persona(email, thread_id)
                personas = self.world.accounts[email]["personas"]
                others = [p for p in personas if p != bound]
                if bound and others:
                    self.actions.append(Action("comment", {
                        "actor": email, "label": self.new_label(), "parent": label,
                        "persona": others[0], "body": _body(self.rng),
                        "boundary": {},
                    }, expect="persona_mismatch"))
                    return True
        return False


def generate(seed: int, n_users: int = 47, n_actions: int = 200) -> Scenario:
    """Randomized world: weighted action mix, byte-identical per seed."""
    rng = random.Random(seed)
    builder = _Builder(rng)
    users = builder.users(n_users)

    kinds = ["post", "comment", "update_traits", "claim_persona", "restrict",
             "toggle", "delete", "held_post", "resolve", "register", "invalid"]
    weights = [8, 62, 6, 4, 7, 3, 2, 1.5, 1.5, 1.5, 5]

    while len(builder.actions) < n_actions:
        kind = rng.choices(kinds, weights=weights)[0]
        if kind == "post":
            builder.emit_post()
        elif kind == "comment":
            builder.emit_comment() or builder.emit_post()
        elif kind == "update_traits":
            builder.emit_update_traits()
        elif kind == "claim_persona":
            builder.emit_claim_persona()
        elif kind == "restrict":
            builder.emit_restrict()
        elif kind == "toggle":
            builder.emit_toggle()
        elif kind == "delete":
            builder.emit_delete()
        elif kind == "held_post":
            builder.emit_post(held=True)
        elif kind == "resolve":
            builder.emit_resolve()
        elif kind == "register":
            builder.emit_register()
        elif kind == "invalid":
            builder.emit_invalid()

    return Scenario(users=users, actions=builder.actions[:n_actions], seed=seed)


def generate_deployment(seed: int, n_users: int = 47, n_posts: int = 18,
                         n_comments: int = 139) -> Scenario:
    """Deployment-scale scenario: exact post/comment counts, about a quarter
    of content carrying non-public boundaries, plus a sprinkle of trait
    edits, narrowing edits, and visibility toggles."""
    rng = random.Random(seed)
    builder = _Builder(rng)
    users = builder.users(n_users)

    posts_left, comments_left = n_posts, n_comments
    while posts_left or comments_left:
        total = posts_left + comments_left
        make_post = rng.random() < (posts_left / total) if total else False
        if make_post or not builder.labels:
            if posts_left:
                builder.emit_post()
                posts_left -= 1
            elif comments_left and builder.emit_comment():
                comments_left -= 1
        elif comments_left:
            if builder.emit_comment():
                comments_left -= 1
            elif posts_left:
                builder.emit_post()
                posts_left -= 1
        if rng.random() < 0.08:
            builder.emit_update_traits()
        if rng.random() < 0.04:
            builder.emit_restrict()
        if rng.random() < 0.03:
            builder.emit_toggle()

    return Scenario(users=users, actions=builder.actions, seed=seed)
