"""Publish-time notification events and the pluggable mail transport.

Recipient sets are computed at the instant a node is published and never
recomputed: a notification is a fact about who was inside the boundary at
emission time. Boundary restrictions deliberately emit nothing.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Protocol

PREVIEW_WORDS = 20
ELLIPSIS = "…"


def render_preview(body: str) -> str:
    """First 20 whitespace-delimited words, with an ellipsis if truncated."""
    words = body.split()
    if len(words) <= PREVIEW_WORDS:
        return " ".join(words)
    return " ".join(words[:PREVIEW_WORDS]) + ELLIPSIS


@dataclass(frozen=True)
class NotificationEvent:
    node_id: str
    kind: str  # "new_post" | "new_comment"
    recipients: frozenset[str]
    preview: str
    created_at: datetime

    def to_dict(self) -> dict:
        return {
            "node_id": self.node_id,
            "kind": self.kind,
            "recipients": sorted(self.recipients),
            "preview": self.preview,
        }


class Transport(Protocol):
    def deliver(self, address: str, subject: str, body: str) -> None: ...


class MemoryOutbox:
    """In-memory transport for tests and in-process replays."""

    def __init__(self):
        self.messages: list[dict] = []

    def deliver(self, address: str, subject: str, body: str) -> None:
        self.messages.append({"address": address, "subject": subject, "body": body})


class FileOutbox:
    """Default transport: appends one JSON record per message to a local
    outbox file. A real mail-gateway client is a drop-in replacement."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def deliver(self, address: str, subject: str, body: str) -> None:
        record = json.dumps(
            {"address": address, "subject": subject, "body": body},
            sort_keys=True)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(record + "\n")


class Notifier:
    """Renders and dispatches notification events after publishing writes."""

    def __init__(self, registry, transport: Transport, site_name: str = "enclave",
                 clock=None):
        self._registry = registry
        self._transport = transport
        self._site_name = site_name
        self._clock = clock
        self.events: list[NotificationEvent] = []

    def _now(self) -> datetime:
        from .registry import utc_now
        return self._clock() if self._clock else utc_now()

    def on_post_published(self, node, audience: frozenset[str]) -> NotificationEvent:
        """Notify everyone inside the post's boundary, except the author."""
        recipients = frozenset(audience) - {node.author_account_id}
        event = NotificationEvent(
            node_id=node.node_id,
            kind="new_post",
            recipients=recipients,
            preview=render_preview(node.body),
            created_at=self._now(),
        )
        self._dispatch(event, subject=f"[{self._site_name}] New post from @{node.persona}")
        return event

    def on_comment_published(self, node, audience: frozenset[str],
                             participants: frozenset[str]) -> NotificationEvent:
        """Notify thread participants, but only those still inside the
        comment's own audience: an excluded participant gets no preview."""
        recipients = (frozenset(participants) & frozenset(audience)) - {node.author_account_id}
        event = NotificationEvent(
            node_id=node.node_id,
            kind="new_comment",
            recipients=recipients,
            preview=render_preview(node.body),
            created_at=self._now(),
        )
        self._dispatch(event, subject=f"[{self._site_name}] New comment from @{node.persona}")
        return event

    def _dispatch(self, event: NotificationEvent, subject: str) -> None:
        self.events.append(event)
        for account_id in sorted(event.recipients):
            account = self._registry.get(account_id)
            self._transport.deliver(account.contact_email, subject, event.preview)
