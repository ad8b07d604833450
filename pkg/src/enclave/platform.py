"""Platform facade: wires the registry, content store, notifier, and
moderation service behind one serialized write surface.

This is the object the HTTP layer and the replay harness drive. All content
mutations take the platform lock, so within a thread the create/restrict/
delete order is total and notification recipient sets are snapshot-consistent
with the write that triggered them.
"""

from __future__ import annotations

import threading
from typing import Iterable

from .boundaries import ConsentBoundary, PUBLIC_BOUNDARY
from .content import ContentNode, ContentStore, NodeState
from .moderation import AuditLog, ModerationService
from .notifications import MemoryOutbox, NotificationEvent, Notifier, Transport
from .registry import Account, Clock, IdentityRegistry, utc_now
from .traits import TraitProfile
from .vocab import Vocabulary, default_vocabulary

DEFAULT_DOMAINS = ("univ.edu",)


class Platform:
    def __init__(
        self,
        vocab: Vocabulary | None = None,
        allowed_domains: Iterable[str] = DEFAULT_DOMAINS,
        transport: Transport | None = None,
        clock: Clock = utc_now,
        site_name: str = "enclave",
        audit_export_path=None,
        moderator_email: str = "moderator@univ.edu",
        moderator_persona: str = "steward",
    ):
        self.vocab = vocab or default_vocabulary()
        self.clock = clock
        self.transport = transport or MemoryOutbox()
        self.registry = IdentityRegistry(self.vocab, allowed_domains, clock)
        self.content = ContentStore(self.registry, self.vocab, clock)
        self.notifier = Notifier(self.registry, self.transport, site_name, clock)
        self.audit = AuditLog(audit_export_path)
        self.moderation = ModerationService(self.registry, self.content,
                                            self.audit, clock)
        self._lock = threading.RLock()
        # The moderator is a regular, pre-approved member account with the
        # moderator flag; it does not await its own review.
        self.moderator = self.registry.register(
            moderator_email, TraitProfile(), moderator_persona,
            moderator=True, preapproved=True, enforce_domain=False)

    # -- accounts -------------------------------------------------------------

    def register(self, email: str, traits: TraitProfile, persona: str) -> Account:
        return self.registry.register(email, traits, persona)

    def approve_signup(self, moderator_id: str, account_id: str, approve: bool) -> Account:
        with self._lock:
            return self.moderation.approve_signup(moderator_id, account_id, approve)

    def update_traits(self, account_id: str, patch: dict) -> TraitProfile:
        with self._lock:
            return self.registry.update_traits(account_id, patch)

    def claim_persona(self, account_id: str, name: str):
        return self.registry.claim_persona(account_id, name)

    # -- content ---------------------------------------------------------------

    def create_post(self, account_id: str, persona: str, body: str,
                    boundary: ConsentBoundary = PUBLIC_BOUNDARY) -> ContentNode:
        with self._lock:
            node = self.content.create_post(account_id, persona, body, boundary)
            self._emit_publish(node)
            return node

    def create_comment(self, account_id: str, persona: str, parent_id: str,
                       body: str, boundary: ConsentBoundary = PUBLIC_BOUNDARY) -> ContentNode:
        with self._lock:
            node = self.content.create_comment(account_id, persona, parent_id,
                                               body, boundary)
            self._emit_publish(node)
            return node

    def restrict_node_boundary(self, account_id: str, node_id: str,
                               new_boundary: ConsentBoundary) -> ContentNode:
        # Restrictions are silent by design: no event, no email, nothing.
        with self._lock:
            return self.content.restrict_boundary(account_id, node_id, new_boundary)

    def toggle_boundary_visibility(self, account_id: str, node_id: str,
                                   show: bool) -> ContentNode:
        with self._lock:
            return self.content.toggle_boundary_visibility(account_id, node_id, show)

    def delete_node(self, account_id: str, node_id: str) -> ContentNode:
        with self._lock:
            return self.content.delete_node(account_id, node_id)

    def resolve_other_info(self, moderator_id: str, node_id: str,
                           recipients: frozenset[str]) -> ContentNode:
        with self._lock:
            node = self.moderation.resolve_other_info(moderator_id, node_id, recipients)
            self._emit_publish(node)
            return node

    def moderate_remove(self, moderator_id: str, node_id: str, reason: str) -> ContentNode:
        with self._lock:
            return self.moderation.remove_node(moderator_id, node_id, reason)

    def _emit_publish(self, node: ContentNode) -> NotificationEvent | None:
        if node.state != NodeState.PUBLISHED:
            return None
        audience = self.content.audience_of(node.node_id)
        if node.is_post:
            return self.notifier.on_post_published(node, audience)
        participants, _ = self.content.thread_participants(node.thread_id)
        return self.notifier.on_comment_published(node, audience, participants)

    # -- reads -------------------------------------------------------------------

    def get_feed(self, viewer_id: str) -> list[ContentNode]:
        with self._lock:
            return self.content.feed(viewer_id)

    def get_thread(self, viewer_id: str, thread_id: str) -> list[ContentNode]:
        with self._lock:
            return self.content.visible_thread(viewer_id, thread_id)

    def last_used_boundary(self, account_id: str, thread_id: str) -> ConsentBoundary:
        return self.content.last_used_boundary(account_id, thread_id)

    def audience_of(self, node_id: str) -> frozenset[str]:
        with self._lock:
            return self.content.audience_of(node_id)

    def all_audiences(self) -> dict[str, frozenset[str]]:
        with self._lock:
            return self.content.all_audiences()

    def boundary_view(self, viewer_id: str, node_id: str) -> ConsentBoundary | None:
        return self.content.boundary_view(viewer_id, node_id)

    # -- verification exports -------------------------------------------------------

    def export_state(self) -> dict:
        """Plain-dict world snapshot (accounts + nodes), the format the
        independent oracle evaluates and the replay harness diffs."""
        with self._lock:
            return {
                "accounts": self.registry.export_accounts(),
                "nodes": self.content.export_nodes(),
            }
