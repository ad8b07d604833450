"""Moderator workflows: sign-up review, held-node resolution, removal.

Every moderator action appends to an immutable, totally ordered audit log,
optionally mirrored to an append-only file. The platform runs with exactly
one moderator account, designated by configuration.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .content import ContentStore
from .registry import IdentityRegistry
from .serialization import boundary_to_dict


@dataclass(frozen=True)
class AuditRecord:
    seq: int
    at: datetime
    actor_account_id: str
    action: str
    target: str
    detail: str

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "at": self.at.isoformat(),
            "actor": self.actor_account_id,
            "action": self.action,
            "target": self.target,
            "detail": self.detail,
        }


class AuditLog:
    """Append-only, totally ordered record of moderator actions."""

    def __init__(self, export_path: str | Path | None = None):
        self._records: list[AuditRecord] = []
        self._lock = threading.Lock()
        self._export_path = Path(export_path) if export_path else None

    def append(self, at: datetime, actor: str, action: str, target: str,
               detail: str = "") -> AuditRecord:
        with self._lock:
            record = AuditRecord(len(self._records) + 1, at, actor, action, target, detail)
            self._records.append(record)
            if self._export_path is not None:
                with self._export_path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
            return record

    def records(self) -> list[AuditRecord]:
        with self._lock:
            return list(self._records)


class ModerationService:
    def __init__(self, registry: IdentityRegistry, content: ContentStore,
                 audit: AuditLog, clock):
        self._registry = registry
        self._content = content
        self._audit = audit
        self._clock = clock

    def queue(self, moderator_id: str, audit_limit: int = 100) -> dict:
        """Pending sign-ups, held nodes, and recent trait changes."""
        self._registry.require_moderator(moderator_id)
        signups = [
            {
                "account_id": a.account_id,
                "email": a.contact_email,
                "requested_persona": a.default_persona,
                "traits": a.profile.to_dict(),
                "created_at": a.created_at.isoformat(),
            }
            for a in self._registry.pending_accounts()
        ]
        held = []
        for node in self._content.held_nodes():
            held.append({
                "node_id": node.node_id,
                "thread_id": node.thread_id,
                "author_account_id": node.author_account_id,
                "persona": node.persona,
                "body": node.body,
                "boundary": boundary_to_dict(node.boundary),
                "other_info": node.boundary.other_info,
                # candidates already passing the structured dimensions, to
                # ground the moderator's audience choice
                "structural_audience": sorted(self._structural_candidates(node.node_id)),
            })
        audits = [r.to_dict() for r in self._registry.trait_feed(audit_limit)]
        return {"signups": signups, "held": held, "trait_audits": audits}

    def _structural_candidates(self, node_id: str) -> frozenset[str]:
        from .boundaries import compose_audience, ChainLevel
        chain = self._content.chain(node_id)
        levels = [
            ChainLevel(n.node_id, n.parent_id, n.author_account_id, n.boundary,
                       n.resolved_recipients)
            for n in chain
        ]
        return compose_audience(levels, self._registry.population())

    def approve_signup(self, moderator_id: str, account_id: str, approve: bool):
        account = self._registry.approve_signup(moderator_id, account_id, approve)
        self._audit.append(self._clock(), moderator_id,
                           "approve_signup" if approve else "reject_signup",
                           account_id)
        return account

    def resolve_other_info(self, moderator_id: str, node_id: str,
                           recipients: frozenset[str]):
        """Publish a held node with a moderator-chosen audience.

        The chosen recipients intersect with the audience implied by the
        node's structured dimensions and with every ancestor audience; the
        free text never widens beyond what the author already allowed.
        """
        self._registry.require_moderator(moderator_id)
        node = self._content.resolve_held(node_id, recipients)
        self._audit.append(self._clock(), moderator_id, "resolve_other_info",
                           node_id, detail=",".join(sorted(recipients)))
        return node

    def remove_node(self, moderator_id: str, node_id: str, reason: str):
        self._registry.require_moderator(moderator_id)
        node = self._content.delete_node(moderator_id, node_id,
                                         as_moderator=True, reason=reason)
        self._audit.append(self._clock(), moderator_id, "remove_node",
                           node_id, detail=reason)
        return node

    def removal_records(self) -> list[AuditRecord]:
        return [r for r in self._audit.records() if r.action == "remove_node"]
