"""Posts, comments, threads, feeds, and post-publication boundary edits.

Visibility facts, in order of severity:

* a node inside a deleted lineage is visible to moderators only (deleting a
  post hides the whole thread, deleting a comment hides its subtree);
* a held node (free-text audience pending moderator resolution) is visible
  only to its author and the moderator, sits in no feed, and notifies nobody;
* a published node is visible exactly to its composed audience: own boundary
  matches plus the reply-to grant, intersected with every ancestor audience.

Boundary edits after publication may only narrow and never notify anyone.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum

from .boundaries import (
    ChainLevel,
    ConsentBoundary,
    PUBLIC_BOUNDARY,
    check_restriction,
    compose_audience,
    level_audience,
    validate_boundary,
)
from .errors import (
    NotAuthor,
    NotAuthorized,
    NotHeld,
    ParentNotVisible,
    UnknownAccount,
    UnknownNode,
    UnknownThread,
)
from .registry import IdentityRegistry
from .vocab import Vocabulary


class NodeState(str, Enum):
    PUBLISHED = "published"
    HELD = "held"
    DELETED = "deleted"


@dataclass
class ContentNode:
    node_id: str
    thread_id: str
    parent_id: str | None
    author_account_id: str
    persona: str
    body: str
    boundary: ConsentBoundary
    state: NodeState
    created_at: datetime
    seq: int
    boundary_history: list[tuple[datetime, ConsentBoundary]] = field(default_factory=list)
    resolved_recipients: frozenset[str] | None = None
    delete_reason: str | None = None

    @property
    def is_post(self) -> bool:
        return self.parent_id is None


class ContentStore:
    """Thread-serialized content state plus audience/visibility queries."""

    def __init__(self, registry: IdentityRegistry, vocab: Vocabulary, clock):
        self._registry = registry
        self._vocab = vocab
        self._clock = clock
        self._nodes: dict[str, ContentNode] = {}
        self._threads: dict[str, list[str]] = {}
        self._seq = 0

    # -- lookups -------------------------------------------------------------

    def get_node(self, node_id: str) -> ContentNode:
        node = self._nodes.get(node_id)
        if node is None:
            raise UnknownNode(f"no node {node_id!r}")
        return node

    def find_node(self, node_id: str) -> ContentNode | None:
        return self._nodes.get(node_id)

    def thread_ids(self) -> list[str]:
        return list(self._threads)

    def all_audiences(self) -> dict[str, frozenset[str]]:
        out: dict[str, frozenset[str]] = {}
        for thread_id in self._threads:
            out.update(self.thread_audiences(thread_id))
        return out

    def thread_node_ids(self, thread_id: str) -> list[str]:
        ids = self._threads.get(thread_id)
        if ids is None:
            raise UnknownThread(f"no thread {thread_id!r}")
        return list(ids)

    def nodes(self) -> list[ContentNode]:
        return list(self._nodes.values())

    def chain(self, node_id: str) -> list[ContentNode]:
        out: list[ContentNode] = []
        cursor: str | None = node_id
        while cursor is not None:
            node = self.get_node(cursor)
            out.append(node)
            cursor = node.parent_id
        out.reverse()
        return out

    def _chain_levels(self, node_id: str) -> list[ChainLevel]:
        return [
            ChainLevel(
                node_id=n.node_id,
                parent_id=n.parent_id,
                author_account_id=n.author_account_id,
                boundary=n.boundary,
                resolved_recipients=n.resolved_recipients,
            )
            for n in self.chain(node_id)
        ]

    # -- audiences -----------------------------------------------------------

    def audience_of(self, node_id: str) -> frozenset[str]:
        """Accounts permitted to view the node at this instant."""
        population = self._registry.population()
        moderators = frozenset(m.account_id for m in population if m.moderator)
        chain = self.chain(node_id)
        node = chain[-1]
        if any(n.state == NodeState.DELETED for n in chain):
            return moderators
        if node.state == NodeState.HELD:
            author = frozenset(
                m.account_id for m in population
                if m.account_id == node.author_account_id)
            return moderators | author
        return compose_audience(self._chain_levels(node_id), population)

    def thread_audiences(self, thread_id: str) -> dict[str, frozenset[str]]:
        """Audience for every node of a thread, composed top-down.

        Node ids are stored in creation order, so parents are always
        resolved before their children.
        """
        population = self._registry.population()
        moderators = frozenset(m.account_id for m in population if m.moderator)
        active_ids = frozenset(m.account_id for m in population)
        audiences: dict[str, frozenset[str]] = {}
        dead: set[str] = set()  # nodes whose lineage contains a deletion
        for node_id in self.thread_node_ids(thread_id):
            node = self._nodes[node_id]
            if node.state == NodeState.DELETED or node.parent_id in dead:
                dead.add(node_id)
                audiences[node_id] = moderators
                continue
            if node.state == NodeState.HELD:
                author = frozenset({node.author_account_id}) & active_ids
                audiences[node_id] = moderators | author
                continue
            parent = self._nodes[node.parent_id] if node.parent_id else None
            own = level_audience(
                ChainLevel(node.node_id, node.parent_id, node.author_account_id,
                           node.boundary, node.resolved_recipients),
                population,
                parent.author_account_id if parent else None,
            )
            audiences[node_id] = own if parent is None else own & audiences[parent.node_id]
        return audiences

    def _lineage_deleted(self, node_id: str) -> bool:
        return any(n.state == NodeState.DELETED for n in self.chain(node_id))

    def visible_to(self, viewer_id: str, node_id: str) -> bool:
        node = self.get_node(node_id)
        account = self._registry.get(viewer_id)
        if account.moderator:
            return True
        if self._lineage_deleted(node_id):
            return False
        if node.state == NodeState.HELD:
            return viewer_id == node.author_account_id and account.is_active
        return viewer_id in self.audience_of(node_id)

    def thread_participants(self, thread_id: str) -> tuple[frozenset[str], frozenset[str]]:
        """(account ids, persona names) with a live node in the thread."""
        accounts, personas = set(), set()
        for node_id in self.thread_node_ids(thread_id):
            node = self._nodes[node_id]
            if node.state != NodeState.PUBLISHED or self._lineage_deleted(node_id):
                continue
            accounts.add(node.author_account_id)
            personas.add(node.persona)
        return frozenset(accounts), frozenset(personas)

    # -- creation ------------------------------------------------------------

    def create_post(self, account_id: str, persona: str, body: str,
                    boundary: ConsentBoundary) -> ContentNode:
        author = self._registry.require_active(account_id)
        canonical = self._registry.require_owned_persona(account_id, persona)
        validate_boundary(boundary, author.profile, "post", None, self._vocab).raise_first()

        self._seq += 1
        thread_id = f"thr_{self._seq:06d}"
        node = self._new_node(thread_id, None, account_id, canonical, body, boundary)
        self._threads[thread_id] = [node.node_id]
        self._registry.bind_thread_persona(account_id, thread_id, canonical)
        return node

    def create_comment(self, account_id: str, persona: str, parent_id: str,
                       body: str, boundary: ConsentBoundary) -> ContentNode:
        author = self._registry.require_active(account_id)
        parent = self.get_node(parent_id)
        if parent.state != NodeState.PUBLISHED or self._lineage_deleted(parent_id):
            raise ParentNotVisible(f"node {parent_id!r} is not open for replies")
        if account_id not in self.audience_of(parent_id):
            raise ParentNotVisible("commenter is outside the parent audience")
        canonical = self._registry.require_owned_persona(account_id, persona)
        _, participant_personas = self.thread_participants(parent.thread_id)
        validate_boundary(boundary, author.profile, "comment",
                          participant_personas, self._vocab).raise_first()
        # Bind before creating so a persona mismatch rejects the whole write.
        self._registry.bind_thread_persona(account_id, parent.thread_id, canonical)

        node = self._new_node(parent.thread_id, parent_id, account_id, canonical,
                              body, boundary)
        self._threads[parent.thread_id].append(node.node_id)
        return node

    def _new_node(self, thread_id: str, parent_id: str | None, account_id: str,
                  persona: str, body: str, boundary: ConsentBoundary) -> ContentNode:
        self._seq += 1
        now = self._clock()
        state = NodeState.HELD if boundary.needs_moderation() else NodeState.PUBLISHED
        node = ContentNode(
            node_id=f"node_{self._seq:06d}",
            thread_id=thread_id,
            parent_id=parent_id,
            author_account_id=account_id,
            persona=persona,
            body=body,
            boundary=boundary,
            state=state,
            created_at=now,
            seq=self._seq,
            boundary_history=[(now, boundary)],
        )
        self._nodes[node.node_id] = node
        return node

    # -- boundary edits --------------------------------------------------------

    def restrict_boundary(self, account_id: str, node_id: str,
                          new_boundary: ConsentBoundary) -> ContentNode:
        """Replace a node's boundary with a strictly-narrowing one.

        Descendant audiences shrink automatically through composition.
        Nothing is notified: excluded repliers silently lose access, to the
        thread and to their own replies in it.
        """
        node = self.get_node(node_id)
        if node.author_account_id != account_id:
            raise NotAuthor("only the author may restrict a boundary")
        author = self._registry.require_active(account_id)
        participants = None
        if not node.is_post:
            _, participants = self.thread_participants(node.thread_id)
            # names already consented to stay valid even if their nodes were
            # deleted since; only newly introduced names face the
            # participation check, so narrowing is never blocked by churn
            participants = participants | (node.boundary.usernames_allowed
                                           or frozenset())
        validate_boundary(new_boundary, author.profile,
                          "post" if node.is_post else "comment",
                          participants, self._vocab).raise_first()
        check_restriction(node.boundary, new_boundary).raise_first()
        node.boundary = new_boundary
        node.boundary_history.append((self._clock(), new_boundary))
        return node

    def toggle_boundary_visibility(self, account_id: str, node_id: str,
                                   show: bool) -> ContentNode:
        node = self.get_node(node_id)
        if node.author_account_id != account_id:
            raise NotAuthor("only the author may toggle boundary visibility")
        self._registry.require_active(account_id)
        node.boundary = replace(node.boundary, show_boundary=show)
        node.boundary_history.append((self._clock(), node.boundary))
        return node

    # -- deletion --------------------------------------------------------------

    def delete_node(self, actor_id: str, node_id: str, *, as_moderator: bool = False,
                    reason: str | None = None) -> ContentNode:
        node = self.get_node(node_id)
        actor = self._registry.get(actor_id)
        if as_moderator:
            if not actor.moderator:
                raise NotAuthorized("moderator removal requires the moderator")
        elif node.author_account_id != actor_id:
            raise NotAuthorized("only the author or the moderator may delete")
        node.state = NodeState.DELETED
        node.delete_reason = reason
        return node

    # -- held-node resolution ----------------------------------------------------

    def resolve_held(self, node_id: str, recipients: frozenset[str]) -> ContentNode:
        node = self.get_node(node_id)
        if node.state != NodeState.HELD:
            raise NotHeld(f"node {node_id!r} is not awaiting resolution")
        for account_id in recipients:
            self._registry.get(account_id)  # raises UnknownAccount
        node.resolved_recipients = frozenset(recipients)
        node.state = NodeState.PUBLISHED
        return node

    def held_nodes(self) -> list[ContentNode]:
        return [n for n in self._nodes.values() if n.state == NodeState.HELD]

    # -- reads -------------------------------------------------------------------

    def last_used_boundary(self, account_id: str, thread_id: str) -> ConsentBoundary:
        """Prefill source for the composer: the account's most recent live
        node in the thread, else its default boundary, else public."""
        self.thread_node_ids(thread_id)
        candidates = [
            n for n in self._nodes.values()
            if n.thread_id == thread_id and n.author_account_id == account_id
            and n.state != NodeState.DELETED
        ]
        if candidates:
            return max(candidates, key=lambda n: n.seq).boundary
        account = self._registry.get(account_id)
        if account.default_boundary is not None:
            return account.default_boundary
        return PUBLIC_BOUNDARY

    def feed(self, viewer_id: str) -> list[ContentNode]:
        """Published posts whose audience contains the viewer, newest first."""
        self._registry.require_active(viewer_id)
        posts = [n for n in self._nodes.values()
                 if n.is_post and n.state == NodeState.PUBLISHED]
        posts.sort(key=lambda n: n.seq, reverse=True)
        return [n for n in posts if viewer_id in self.audience_of(n.node_id)]

    def visible_thread(self, viewer_id: str, thread_id: str) -> list[ContentNode]:
        """The viewer's slice of a thread, in tree order. Moderators see all
        states; authors see their own held nodes; everyone else sees exactly
        the published nodes whose audience contains them."""
        viewer = self._registry.get(viewer_id)
        node_ids = self.thread_node_ids(thread_id)
        audiences = self.thread_audiences(thread_id)
        visible: set[str] = set()
        for node_id in node_ids:
            node = self._nodes[node_id]
            if viewer.moderator:
                visible.add(node_id)
            elif node.state == NodeState.HELD:
                if node.author_account_id == viewer_id and viewer.is_active \
                        and not self._lineage_deleted(node_id):
                    visible.add(node_id)
            elif node.state == NodeState.PUBLISHED:
                # thread_audiences already collapses deleted lineages to
                # moderators-only, so membership is the whole check
                if viewer_id in audiences[node_id]:
                    visible.add(node_id)
        ordered = self._tree_order(thread_id)
        return [self._nodes[nid] for nid in ordered if nid in visible]

    def boundary_view(self, viewer_id: str, node_id: str) -> ConsentBoundary | None:
        """The node's boundary, only for opted-in nodes and in-audience
        viewers; hidden-boundary nodes stay indistinguishable from public."""
        node = self.get_node(node_id)
        if not node.boundary.show_boundary:
            return None
        if node.state != NodeState.PUBLISHED or self._lineage_deleted(node_id):
            return None
        if viewer_id not in self.audience_of(node_id):
            return None
        return node.boundary

    def _tree_order(self, thread_id: str) -> list[str]:
        children: dict[str | None, list[str]] = {}
        for node_id in self.thread_node_ids(thread_id):
            node = self._nodes[node_id]
            children.setdefault(node.parent_id, []).append(node_id)
        for siblings in children.values():
            siblings.sort(key=lambda nid: self._nodes[nid].seq)
        out: list[str] = []

        def walk(parent: str | None) -> None:
            for nid in children.get(parent, []):
                out.append(nid)
                walk(nid)

        walk(None)
        return out

    # -- export --------------------------------------------------------------

    def export_nodes(self) -> dict[str, dict]:
        from .serialization import boundary_to_dict
        return {
            n.node_id: {
                "node_id": n.node_id,
                "thread_id": n.thread_id,
                "parent_id": n.parent_id,
                "author": n.author_account_id,
                "persona": n.persona,
                "body": n.body,
                "boundary": boundary_to_dict(n.boundary),
                "state": n.state.value,
                "resolved_recipients": (
                    sorted(n.resolved_recipients)
                    if n.resolved_recipients is not None else None),
                "seq": n.seq,
                "created_at": n.created_at.isoformat(),
            }
            for n in self._nodes.values()
        }
