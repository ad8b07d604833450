"""Shadow world: the replayer's own record of what the platform state must
be, built purely from the actions it issued and the ids that came back.

The oracle evaluates visibility over this model, never over engine
internals, which keeps the two sides of every comparison independent.
"""

from __future__ import annotations

import copy


class ShadowWorld:
    def __init__(self):
        self.accounts: dict[str, dict] = {}
        self.nodes: dict[str, dict] = {}
        self._seq = 0

    # -- accounts -----------------------------------------------------------

    def add_account(self, account_id: str, email: str, traits: dict,
                    personas: list[str], status: str = "pending",
                    moderator: bool = False) -> None:
        self.accounts[account_id] = {
            "email": email,
            "status": status,
            "moderator": moderator,
            "personas": sorted(personas),
            "profile": copy.deepcopy(traits),
        }

    def account_by_email(self, email: str) -> str | None:
        for account_id, acc in self.accounts.items():
            if acc["email"] == email:
                return account_id
        return None

    def set_status(self, account_id: str, status: str) -> None:
        self.accounts[account_id]["status"] = status

    def add_persona(self, account_id: str, name: str) -> None:
        personas = set(self.accounts[account_id]["personas"])
        personas.add(name)
        self.accounts[account_id]["personas"] = sorted(personas)

    def apply_trait_patch(self, account_id: str, patch: dict) -> None:
        profile = self.accounts[account_id]["profile"]
        for key, value in patch.items():
            if value is None or value == []:
                profile.pop(key, None)
            elif isinstance(value, list):
                profile[key] = sorted(value)
            else:
                profile[key] = value

    # -- nodes --------------------------------------------------------------

    def add_node(self, node_id: str, thread_id: str, parent_id: str | None,
                 author_id: str, persona: str, body: str, boundary: dict,
                 state: str) -> None:
        self._seq += 1
        self.nodes[node_id] = {
            "node_id": node_id,
            "thread_id": thread_id,
            "parent_id": parent_id,
            "author": author_id,
            "persona": persona,
            "body": body,
            "boundary": copy.deepcopy(boundary),
            "state": state,
            "resolved_recipients": None,
            "seq": self._seq,
        }

    def set_boundary(self, node_id: str, boundary: dict) -> None:
        self.nodes[node_id]["boundary"] = copy.deepcopy(boundary)

    def set_show_boundary(self, node_id: str, show: bool) -> None:
        doc = self.nodes[node_id]["boundary"]
        if show:
            doc["show_boundary"] = True
        else:
            doc.pop("show_boundary", None)

    def mark_deleted(self, node_id: str) -> None:
        self.nodes[node_id]["state"] = "deleted"

    def resolve(self, node_id: str, recipient_ids: list[str]) -> None:
        node = self.nodes[node_id]
        node["state"] = "published"
        node["resolved_recipients"] = sorted(recipient_ids)

    # -- views --------------------------------------------------------------

    def snapshot(self) -> dict:
        return {"accounts": self.accounts, "nodes": self.nodes}

    def thread_ids(self) -> list[str]:
        seen = []
        for node in sorted(self.nodes.values(), key=lambda n: n["seq"]):
            if node["thread_id"] not in seen:
                seen.append(node["thread_id"])
        return seen

    def active_emails(self) -> list[str]:
        return sorted(acc["email"] for acc in self.accounts.values()
                      if acc["status"] == "active")
