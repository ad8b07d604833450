"""Scenario replay with oracle verification.

In-process mode drives a fresh platform directly and holds it to the strict
contract: after every mutation, the audience of every node is recomputed by
the brute-force oracle and compared with the engine, and every notification
event is checked against the oracle's expected recipient set the instant it
is emitted. HTTP mode drives a running service through its public API and
verifies the wire contract instead: per-viewer feeds and thread views equal
the oracle, outbox deliveries match expected recipients, boundary metadata
appears only where allowed, responses leak no identities, and invisible
nodes are indistinguishable from missing ones.

Reports contain no timestamps, so one scenario in one mode yields one
byte-identical report.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from ..boundaries import PUBLIC_BOUNDARY
from ..errors import EnclaveError
from ..notifications import MemoryOutbox
from ..platform import Platform
from ..serialization import boundary_from_dict
from ..traits import profile_from_dict
from . import oracle
from .scenario import Action, Scenario
from .world import ShadowWorld

MODERATOR_EMAIL = "moderator@univ.edu"

# Trait units a viewer can erase; the advisor history erases as one unit.
ERASABLE_TRAITS = (
    ("gender",),
    ("races",),
    ("international",),
    ("phd_program",),
    ("challenges_experienced",),
    ("advising_status_changed",),
    ("current_advisors", "prior_advisors"),
)


class ExpectationFailed(EnclaveError):
    code = "expectation_failed"

    def __init__(self, index: int, expected: str, actual: str, action: Action):
        super().__init__(
            f"action {index} ({action.op}): expected {expected!r}, got {actual!r}")
        self.index = index


class LogicalClock:
    """Deterministic platform clock: one second per call."""

    def __init__(self, start: str = "2025-01-01T00:00:00+00:00"):
        self._now = datetime.fromisoformat(start).astimezone(timezone.utc)

    def __call__(self) -> datetime:
        self._now += timedelta(seconds=1)
        return self._now


@dataclass
class ReplayReport:
    mode: str
    seed: int | None = None
    actions_applied: int = 0
    posts: int = 0
    comments: int = 0
    mismatches: list[dict] = field(default_factory=list)
    node_audiences: dict[str, list[str]] = field(default_factory=dict)
    notifications: list[dict] = field(default_factory=list)
    non_leakage: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def add_mismatch(self, kind: str, **detail) -> None:
        entry = {"kind": kind}
        entry.update(detail)
        self.mismatches.append(entry)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "actions_applied": self.actions_applied,
            "posts": self.posts,
            "comments": self.comments,
            "ok": self.ok,
            "mismatches": self.mismatches,
            "node_audiences": {k: self.node_audiences[k]
                               for k in sorted(self.node_audiences)},
            "notifications": self.notifications,
            "non_leakage": self.non_leakage,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _sorted(values) -> list[str]:
    return sorted(values)


# ---------------------------------------------------------------------------
# Shared verification over a final world snapshot
# ---------------------------------------------------------------------------

def check_monotonicity(world: dict, report: ReplayReport) -> None:
    audiences = oracle.audience_map(world)
    for node_id, node in world["nodes"].items():
        parent_id = node.get("parent_id")
        if parent_id and not audiences[node_id] <= audiences[parent_id]:
            report.add_mismatch(
                "monotonicity", node_id=node_id,
                extra=_sorted(audiences[node_id] - audiences[parent_id]))


def check_thread_personas(world: dict, report: ReplayReport) -> None:
    seen: dict[tuple[str, str], str] = {}
    for node_id, node in world["nodes"].items():
        key = (node["author"], node["thread_id"])
        persona = seen.setdefault(key, node["persona"])
        if node["persona"] != persona:
            report.add_mismatch("thread_persona", node_id=node_id,
                                expected=persona, actual=node["persona"])


def fail_closed_violations(world: dict, samples: int, rng: random.Random,
                           report: ReplayReport) -> None:
    """Metamorphic check: erasing a declared trait unit never adds the
    erasing viewer to any audience."""
    before = oracle.audience_map(world)
    candidates = []
    for account_id in sorted(world["accounts"]):
        account = world["accounts"][account_id]
        if account["status"] != "active":
            continue
        profile = account["profile"]
        for unit in ERASABLE_TRAITS:
            if any(f in profile for f in unit):
                candidates.append((account_id, unit))
    rng.shuffle(candidates)
    for account_id, unit in candidates[:samples]:
        stripped = {k: v for k, v in world["accounts"][account_id]["profile"].items()
                    if k not in unit}
        mutated_accounts = dict(world["accounts"])
        mutated_accounts[account_id] = dict(mutated_accounts[account_id],
                                            profile=stripped)
        mutated = {"accounts": mutated_accounts, "nodes": world["nodes"]}
        after = oracle.audience_map(mutated)
        for node_id in world["nodes"]:
            if account_id in after[node_id] and account_id not in before[node_id]:
                report.add_mismatch("fail_closed", node_id=node_id,
                                    account=account_id, erased=list(unit))


@dataclass
class _HttpResult:
    """Adapter giving HTTP response bodies the attributes replay needs."""

    body: dict

    @property
    def node_id(self):
        return self.body.get("node_id")

    @property
    def thread_id(self):
        return self.body.get("thread_id")

    @property
    def account_id(self):
        return self.body.get("account_id")


def update_shadow(shadow: ShadowWorld, accounts: dict, labels: dict,
                  action: Action, result) -> None:
    """Mirror one successful action into the shadow world."""
    p = action.payload
    if action.op in ("post", "comment"):
        labels[p["label"]] = result.node_id
        doc = p.get("boundary") or {}
        held = bool(doc.get("other_info", "").strip())
        shadow.add_node(
            result.node_id, result.thread_id,
            labels[p["parent"]] if action.op == "comment" else None,
            accounts[p["actor"]], p["persona"], p.get("body", ""),
            doc, "held" if held else "published")
    elif action.op == "restrict":
        shadow.set_boundary(labels[p["node"]], p.get("boundary") or {})
    elif action.op == "toggle_visibility":
        shadow.set_show_boundary(labels[p["node"]], bool(p.get("show")))
    elif action.op in ("delete", "mod_remove"):
        shadow.mark_deleted(labels[p["node"]])
    elif action.op == "update_traits":
        shadow.apply_trait_patch(accounts[p["actor"]], p.get("patch") or {})
    elif action.op == "claim_persona":
        shadow.add_persona(accounts[p["actor"]], p["name"])
    elif action.op == "register":
        accounts[p["email"]] = result.account_id
        shadow.add_account(result.account_id, p["email"],
                           dict(p.get("traits") or {}), [p["persona"]],
                           status="pending")
    elif action.op == "approve":
        status = "active" if p.get("decision", "approve") == "approve" \
            else "rejected"
        shadow.set_status(accounts[p["account_email"]], status)
    elif action.op == "resolve":
        shadow.resolve(labels[p["node"]],
                       [accounts[e] for e in p.get("recipients", [])])


# ---------------------------------------------------------------------------
# In-process replay
# ---------------------------------------------------------------------------

class InProcessReplayer:
    def __init__(self, check_every: str = "mutation",
                 fail_closed_samples: int = 0):
        if check_every not in ("mutation", "end"):
            raise ValueError("check_every must be 'mutation' or 'end'")
        self.check_every = check_every
        self.fail_closed_samples = fail_closed_samples

    def run(self, scenario: Scenario) -> ReplayReport:
        report = ReplayReport(mode="in-process", seed=scenario.seed)
        platform = Platform(transport=MemoryOutbox(), clock=LogicalClock(),
                            moderator_email=MODERATOR_EMAIL)
        shadow = ShadowWorld()
        # kept for post-run inspection by tests and the acceptance suite
        self.platform, self.shadow = platform, shadow
        moderator_id = platform.moderator.account_id
        shadow.add_account(moderator_id, MODERATOR_EMAIL, {},
                           [platform.moderator.default_persona],
                           status="active", moderator=True)
        accounts: dict[str, str] = {MODERATOR_EMAIL: moderator_id}
        labels: dict[str, str] = {}

        for user in scenario.users:
            account = platform.register(user.email,
                                        profile_from_dict(user.traits),
                                        user.personas[0])
            platform.approve_signup(moderator_id, account.account_id, True)
            for extra in user.personas[1:]:
                platform.claim_persona(account.account_id, extra)
            accounts[user.email] = account.account_id
            shadow.add_account(account.account_id, user.email, dict(user.traits),
                               list(user.personas), status="active")

        for index, action in enumerate(scenario.actions):
            events_before = len(platform.notifier.events)
            outcome, result = self._apply(platform, accounts, labels, action)
            if outcome != action.expect:
                raise ExpectationFailed(index, action.expect, outcome, action)
            if outcome != "ok":
                continue
            update_shadow(shadow, accounts, labels, action, result)
            report.actions_applied += 1
            if action.op == "post":
                report.posts += 1
            elif action.op == "comment":
                report.comments += 1

            snapshot = shadow.snapshot()
            new_events = platform.notifier.events[events_before:]
            self._check_events(action, index, new_events, snapshot, report)
            if self.check_every == "mutation" and action.op != "claim_persona":
                self._check_audiences(platform, snapshot, report, index)

        snapshot = shadow.snapshot()
        self._check_audiences(platform, snapshot, report, None)
        self._check_reads(platform, accounts, shadow, report)
        check_monotonicity(snapshot, report)
        check_thread_personas(snapshot, report)
        if self.fail_closed_samples:
            fail_closed_violations(snapshot, self.fail_closed_samples,
                                   random.Random(scenario.seed or 0), report)

        for node_id, audience in sorted(oracle.audience_map(snapshot).items()):
            report.node_audiences[node_id] = _sorted(audience)
        report.notifications = [e.to_dict() for e in platform.notifier.events]
        return report

    # -- applying actions ---------------------------------------------------

    def _apply(self, platform: Platform, accounts: dict, labels: dict,
               action: Action):
        p = action.payload
        actor = accounts.get(p.get("actor", ""), "")
        try:
            if action.op == "post":
                node = platform.create_post(
                    actor, p["persona"], p.get("body", ""),
                    boundary_from_dict(p.get("boundary") or {}))
                return "ok", node
            if action.op == "comment":
                node = platform.create_comment(
                    actor, p["persona"], labels[p["parent"]], p.get("body", ""),
                    boundary_from_dict(p.get("boundary") or {}))
                return "ok", node
            if action.op == "restrict":
                node = platform.restrict_node_boundary(
                    actor, labels[p["node"]],
                    boundary_from_dict(p.get("boundary") or {}))
                return "ok", node
            if action.op == "toggle_visibility":
                return "ok", platform.toggle_boundary_visibility(
                    actor, labels[p["node"]], bool(p.get("show")))
            if action.op == "delete":
                return "ok", platform.delete_node(actor, labels[p["node"]])
            if action.op == "update_traits":
                return "ok", platform.update_traits(actor, p.get("patch") or {})
            if action.op == "claim_persona":
                return "ok", platform.claim_persona(actor, p["name"])
            if action.op == "register":
                account = platform.register(p["email"],
                                            profile_from_dict(p.get("traits") or {}),
                                            p["persona"])
                return "ok", account
            if action.op == "approve":
                account_id = accounts[p["account_email"]]
                return "ok", platform.approve_signup(
                    platform.moderator.account_id, account_id,
                    p.get("decision", "approve") == "approve")
            if action.op == "resolve":
                recipients = frozenset(accounts[e] for e in p.get("recipients", []))
                return "ok", platform.resolve_other_info(
                    platform.moderator.account_id, labels[p["node"]], recipients)
            if action.op == "mod_remove":
                return "ok", platform.moderate_remove(
                    platform.moderator.account_id, labels[p["node"]],
                    p.get("reason", ""))
            raise ValueError(f"unknown action op {action.op!r}")
        except EnclaveError as exc:
            return exc.code, None

    # -- checks ---------------------------------------------------------------

    def _check_events(self, action: Action, index: int, events, world: dict,
                      report: ReplayReport) -> None:
        if action.op in ("restrict", "toggle_visibility", "delete", "mod_remove"):
            if events:
                report.add_mismatch("silent_edit_notified", action_index=index,
                                    events=[e.node_id for e in events])
            return
        for event in events:
            if event.kind == "new_post":
                expected = oracle.expected_post_recipients(world, event.node_id)
            else:
                expected = oracle.expected_comment_recipients(world, event.node_id)
            if event.recipients != expected:
                report.add_mismatch(
                    "notification", action_index=index, node_id=event.node_id,
                    expected=_sorted(expected), actual=_sorted(event.recipients))
            audience = oracle.oracle_audience(world, event.node_id)
            if not event.recipients <= audience:
                report.add_mismatch(
                    "notification_leak", action_index=index, node_id=event.node_id,
                    leaked=_sorted(event.recipients - audience))

    def _check_audiences(self, platform: Platform, world: dict,
                         report: ReplayReport, index) -> None:
        expected = oracle.audience_map(world)
        actual_map = platform.all_audiences()
        for node_id in world["nodes"]:
            actual = actual_map[node_id]
            if actual != expected[node_id]:
                report.add_mismatch(
                    "audience", action_index=index, node_id=node_id,
                    expected=_sorted(expected[node_id]), actual=_sorted(actual))

    def _check_reads(self, platform: Platform, accounts: dict,
                     shadow: ShadowWorld, report: ReplayReport) -> None:
        world = shadow.snapshot()
        threads = sorted({n["thread_id"] for n in world["nodes"].values()})
        audiences = oracle.audience_map(world)
        for email in sorted(accounts):
            viewer = accounts[email]
            if world["accounts"][viewer]["status"] != "active":
                continue
            feed = [n.node_id for n in platform.get_feed(viewer)]
            if feed != oracle.oracle_feed(world, viewer, audiences):
                report.add_mismatch("feed", viewer=viewer, actual=feed,
                                    expected=oracle.oracle_feed(world, viewer, audiences))
            for thread_id in threads:
                visible = {n.node_id for n in platform.get_thread(viewer, thread_id)}
                expected = oracle.oracle_visible_thread(world, viewer, thread_id,
                                                        audiences)
                if visible != expected:
                    report.add_mismatch(
                        "thread_view", viewer=viewer, thread=thread_id,
                        expected=_sorted(expected), actual=_sorted(visible))


def replay(scenario: Scenario, check_every: str = "mutation") -> ReplayReport:
    return InProcessReplayer(check_every=check_every).run(scenario)


# ---------------------------------------------------------------------------
# Fuzzing
# ---------------------------------------------------------------------------

def fuzz_world_seed(seed: int, index: int) -> int:
    return (seed * 1_000_003 + index) & 0x7FFFFFFF


def run_fuzz(seed: int, worlds: int, max_users: int = 50,
             max_actions: int = 200, check_every: str = "end",
             fail_closed_samples: int = 3) -> dict:
    """Replay many generated worlds; returns aggregate statistics."""
    from .generate import generate

    stats = {"worlds": 0, "actions": 0, "posts": 0, "comments": 0,
             "mismatches": [], "notifications": 0}
    for index in range(worlds):
        world_seed = fuzz_world_seed(seed, index)
        rng = random.Random(world_seed)
        n_users = rng.randint(4, max_users)
        n_actions = rng.randint(20, max_actions)
        scenario = generate(world_seed, n_users, n_actions)
        replayer = InProcessReplayer(check_every=check_every,
                                     fail_closed_samples=fail_closed_samples)
        report = replayer.run(scenario)
        stats["worlds"] += 1
        stats["actions"] += report.actions_applied
        stats["posts"] += report.posts
        stats["comments"] += report.comments
        stats["notifications"] += len(report.notifications)
        for mismatch in report.mismatches:
            stats["mismatches"].append({"world_seed": world_seed, **mismatch})
    return stats


# ---------------------------------------------------------------------------
# HTTP replay
# ---------------------------------------------------------------------------

EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
ACCOUNT_ID_RE = re.compile(r"acc_\d{6}")

# At the wire, invisible targets answer exactly like missing ones.
_WIRE_EQUIVALENT = {"parent_not_visible": "not_found",
                    "unknown_node": "not_found",
                    "unknown_thread": "not_found"}


class HttpReplayer:
    """Drives a running service and verifies the wire contract."""

    def __init__(self, base_url: str, outbox_path: str | Path | None = None,
                 moderator_email: str = MODERATOR_EMAIL):
        import httpx

        self._client = httpx.Client(base_url=base_url, timeout=30.0)
        self.outbox_path = Path(outbox_path) if outbox_path else None
        self.moderator_email = moderator_email
        self._sessions: dict[str, dict] = {}
        self._own_ids: dict[str, str] = {}
        self.corpus: list[dict] = []

    # -- plumbing -------------------------------------------------------------

    def _record(self, email: str, method: str, path: str, response) -> None:
        self.corpus.append({
            "session": email, "method": method, "path": path,
            "status": response.status_code, "text": response.text,
        })

    def _call(self, email: str, method: str, path: str, body: dict | None = None):
        headers = self._session(email)
        request = {"headers": headers}
        if body is not None:
            request["json"] = body
        response = self._client.request(method, path, **request)
        self._record(email, method, path, response)
        return response

    def _session(self, email: str) -> dict:
        if email not in self._sessions:
            response = self._client.post("/session", json={"email": email})
            response.raise_for_status()
            data = response.json()
            self._sessions[email] = {
                "Authorization": f"Bearer {data['token']}"}
            self._own_ids[email] = data["account_id"]
        return self._sessions[email]

    def _outbox_offset(self) -> int:
        if self.outbox_path is None or not self.outbox_path.exists():
            return 0
        return len(self.outbox_path.read_text().splitlines())

    def _outbox_delta(self, offset: int) -> list[dict]:
        if self.outbox_path is None or not self.outbox_path.exists():
            return []
        lines = self.outbox_path.read_text().splitlines()[offset:]
        return [json.loads(line) for line in lines]

    # -- replay ---------------------------------------------------------------

    def run(self, scenario: Scenario) -> ReplayReport:
        report = ReplayReport(mode="http", seed=scenario.seed)
        shadow = ShadowWorld()
        accounts: dict[str, str] = {}
        labels: dict[str, str] = {}

        self._session(self.moderator_email)
        mod_id = self._own_ids[self.moderator_email]
        accounts[self.moderator_email] = mod_id
        shadow.add_account(mod_id, self.moderator_email, {}, ["steward"],
                           status="active", moderator=True)

        for user in scenario.users:
            response = self._call(self.moderator_email, "POST", "/register", {
                "email": user.email, "traits": user.traits,
                "persona": user.personas[0]})
            account_id = response.json()["account_id"]
            self._call(self.moderator_email, "POST",
                       f"/mod/signups/{account_id}", {"decision": "approve"})
            accounts[user.email] = account_id
            for extra in user.personas[1:]:
                self._call(user.email, "POST", "/personas", {"name": extra})
            shadow.add_account(account_id, user.email, dict(user.traits),
                               list(user.personas), status="active")

        for index, action in enumerate(scenario.actions):
            offset = self._outbox_offset()
            outcome, payload = self._apply(accounts, labels, action)
            expected = _WIRE_EQUIVALENT.get(action.expect, action.expect)
            if outcome != expected:
                raise ExpectationFailed(index, expected, outcome, action)
            if outcome != "ok":
                continue
            update_shadow(shadow, accounts, labels, action,
                          _HttpResult(payload) if payload else None)
            report.actions_applied += 1
            if action.op == "post":
                report.posts += 1
            elif action.op == "comment":
                report.comments += 1
            self._check_outbox_delta(action, index, offset, shadow, labels, report)

        world = shadow.snapshot()
        self._audiences = oracle.audience_map(world)
        self._check_reads(world, accounts, labels, report)
        self._check_not_found_probes(world, accounts, report)
        check_monotonicity(world, report)
        check_thread_personas(world, report)
        self._scan_corpus(world, report)

        for node_id, audience in sorted(oracle.audience_map(world).items()):
            report.node_audiences[node_id] = _sorted(audience)
        return report

    def _apply(self, accounts: dict, labels: dict, action: Action):
        p = action.payload
        op = action.op
        if op == "post":
            response = self._call(p["actor"], "POST", "/posts", {
                "persona": p["persona"], "body": p.get("body", ""),
                "boundary": p.get("boundary") or {}})
        elif op == "comment":
            response = self._call(
                p["actor"], "POST", f"/posts/{labels[p['parent']]}/comments", {
                    "persona": p["persona"], "body": p.get("body", ""),
                    "boundary": p.get("boundary") or {}})
        elif op == "restrict":
            response = self._call(
                p["actor"], "PATCH", f"/nodes/{labels[p['node']]}/boundary",
                {"boundary": p.get("boundary") or {}})
        elif op == "toggle_visibility":
            response = self._call(
                p["actor"], "PATCH",
                f"/nodes/{labels[p['node']]}/boundary-visibility",
                {"show": bool(p.get("show"))})
        elif op == "delete":
            response = self._call(p["actor"], "DELETE",
                                  f"/nodes/{labels[p['node']]}")
        elif op == "update_traits":
            response = self._call(p["actor"], "PATCH", "/account",
                                  {"traits": p.get("patch") or {}})
        elif op == "claim_persona":
            response = self._call(p["actor"], "POST", "/personas",
                                  {"name": p["name"]})
        elif op == "register":
            response = self._call(self.moderator_email, "POST", "/register", {
                "email": p["email"], "traits": p.get("traits") or {},
                "persona": p["persona"]})
        elif op == "approve":
            account_id = accounts[p["account_email"]]
            response = self._call(
                self.moderator_email, "POST", f"/mod/signups/{account_id}",
                {"decision": p.get("decision", "approve")})
        elif op == "resolve":
            response = self._call(
                self.moderator_email, "POST",
                f"/mod/nodes/{labels[p['node']]}/resolve",
                {"recipients": [accounts[e] for e in p.get("recipients", [])]})
        elif op == "mod_remove":
            response = self._call(self.moderator_email, "DELETE",
                                  f"/mod/nodes/{labels[p['node']]}",
                                  {"reason": p.get("reason", "")})
        else:
            raise ValueError(f"unknown action op {op!r}")

        if response.status_code < 300:
            body = response.json() if response.content else {}
            if op == "register":
                accounts[p["email"]] = body["account_id"]
            return "ok", body
        try:
            return response.json().get("error", "error"), None
        except ValueError:
            return "error", None

    def _check_outbox_delta(self, action: Action, index: int, offset: int,
                            shadow: ShadowWorld, labels: dict,
                            report: ReplayReport) -> None:
        if self.outbox_path is None:
            return
        world = shadow.snapshot()
        delta = self._outbox_delta(offset)
        addresses = sorted(m["address"] for m in delta)
        if action.op in ("restrict", "toggle_visibility", "delete", "mod_remove"):
            if addresses:
                report.add_mismatch("silent_edit_notified", action_index=index,
                                    addresses=addresses)
            return
        if action.op not in ("post", "comment", "resolve"):
            return
        label = action.payload.get("label") or action.payload.get("node")
        node_id = labels.get(label)
        if node_id is None or world["nodes"][node_id]["state"] != "published":
            if addresses:
                report.add_mismatch("held_notified", action_index=index,
                                    addresses=addresses)
            return
        if world["nodes"][node_id]["parent_id"] is None:
            expected_ids = oracle.expected_post_recipients(world, node_id)
        else:
            expected_ids = oracle.expected_comment_recipients(world, node_id)
        expected = sorted(world["accounts"][a]["email"] for a in expected_ids)
        if addresses != expected:
            report.add_mismatch("notification", action_index=index,
                                node_id=node_id, expected=expected,
                                actual=addresses)
        report.notifications.append({"node_id": node_id,
                                     "recipients": expected})

    # -- wire checks -------------------------------------------------------------

    def _check_reads(self, world: dict, accounts: dict, labels: dict,
                     report: ReplayReport) -> None:
        runtime_threads = sorted({n["thread_id"] for n in world["nodes"].values()})
        for email in sorted(accounts):
            viewer = accounts[email]
            if world["accounts"][viewer]["status"] != "active":
                continue
            response = self._call(email, "GET", "/feed")
            feed = [p["node_id"] for p in response.json()["posts"]]
            if feed != oracle.oracle_feed(world, viewer, self._audiences):
                report.add_mismatch("feed", viewer=viewer, actual=feed,
                                    expected=oracle.oracle_feed(world, viewer,
                                                                self._audiences))
            for payload in response.json()["posts"]:
                self._check_boundary_key(world, viewer, payload, report)
            for thread_id in runtime_threads:
                response = self._call(email, "GET", f"/threads/{thread_id}")
                expected = oracle.oracle_visible_thread(world, viewer, thread_id,
                                                        self._audiences)
                if response.status_code == 404:
                    if expected:
                        report.add_mismatch("thread_view", viewer=viewer,
                                            thread=thread_id,
                                            expected=_sorted(expected), actual=[])
                    continue
                visible = {n["node_id"] for n in response.json()["nodes"]}
                if visible != expected:
                    report.add_mismatch("thread_view", viewer=viewer,
                                        thread=thread_id,
                                        expected=_sorted(expected),
                                        actual=_sorted(visible))
                for payload in response.json()["nodes"]:
                    self._check_boundary_key(world, viewer, payload, report)

    def _check_boundary_key(self, world: dict, viewer: str, payload: dict,
                            report: ReplayReport) -> None:
        node = world["nodes"].get(payload["node_id"])
        if node is None:
            return
        lineage_live = all(n["state"] == "published"
                           for n in oracle.chain_to_root(world, node["node_id"]))
        allowed = (node["state"] == "published" and lineage_live
                   and node["boundary"].get("show_boundary", False)
                   and viewer in oracle.oracle_audience(world, node["node_id"]))
        if "boundary" in payload and not allowed:
            report.add_mismatch("boundary_leak", node_id=node["node_id"],
                                viewer=viewer)
        if allowed and "boundary" not in payload:
            report.add_mismatch("boundary_missing", node_id=node["node_id"],
                                viewer=viewer)

    def _check_not_found_probes(self, world: dict, accounts: dict,
                                report: ReplayReport) -> None:
        """An invisible thread must answer exactly like a missing one."""
        probes = 0
        for email in sorted(accounts):
            viewer = accounts[email]
            if world["accounts"][viewer]["status"] != "active" or \
                    world["accounts"][viewer]["moderator"]:
                continue
            for thread_id in sorted({n["thread_id"] for n in world["nodes"].values()}):
                if oracle.oracle_visible_thread(world, viewer, thread_id):
                    continue
                invisible = self._call(email, "GET", f"/threads/{thread_id}")
                missing = self._call(email, "GET", "/threads/thr_999999")
                if (invisible.status_code, invisible.text) != \
                        (missing.status_code, missing.text):
                    report.add_mismatch("not_found_probe", viewer=viewer,
                                        thread=thread_id,
                                        invisible=[invisible.status_code,
                                                   invisible.text],
                                        missing=[missing.status_code,
                                                 missing.text])
                probes += 1
                if probes >= 5:
                    return

    def _scan_corpus(self, world: dict, report: ReplayReport) -> None:
        email_by_id = {aid: acc["email"] for aid, acc in world["accounts"].items()}
        violations = []
        for entry in self.corpus:
            session = entry["session"]
            if session == self.moderator_email:
                continue  # the moderator legitimately sees emails and ids
            own_id = self._own_ids.get(session)
            for found in EMAIL_RE.findall(entry["text"]):
                if found != session:
                    violations.append({"kind": "email", "session": session,
                                       "path": entry["path"], "value": found})
            for found in ACCOUNT_ID_RE.findall(entry["text"]):
                if found != own_id and found in email_by_id:
                    violations.append({"kind": "account_id", "session": session,
                                       "path": entry["path"], "value": found})
        report.non_leakage = {
            "responses_scanned": len(self.corpus),
            "violations": violations,
        }
        for violation in violations:
            report.add_mismatch("wire_leak", **violation)
