"""HTTP surface: session-authenticated JSON API over the platform.

Confidentiality rules enforced at this layer:

* responses never carry another user's account id, email, or any
  account-to-persona mapping; node payloads identify authors by persona only;
* a node (or thread) the caller may not see answers exactly like one that
  does not exist: same 404 status, same body, so existence cannot be probed;
* boundary metadata appears in a payload only when the author opted in and
  the caller is inside the audience; a hidden-boundary node is shaped
  exactly like a public one.
"""

from __future__ import annotations

import secrets
import threading

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .boundaries import ConsentBoundary, PUBLIC_BOUNDARY, validate_boundary
from .content import ContentNode, NodeState
from .errors import (
    AccountNotActive,
    BoundaryValidationError,
    DomainNotAllowed,
    DuplicateEmail,
    EnclaveError,
    InvalidBoundaryDocument,
    InvalidName,
    InvalidPersona,
    NotAuthor,
    NotAuthorized,
    NotHeld,
    NotModerator,
    NotPending,
    ParentNotVisible,
    PersonaMismatch,
    PersonaTaken,
    UnknownAccount,
    UnknownNode,
    UnknownThread,
    WideningViolation,
)
from .platform import Platform
from .serialization import boundary_from_dict, boundary_to_dict
from .traits import profile_from_dict

NOT_FOUND_BODY = {"error": "not_found", "message": "not found"}

_STATUS = {
    DomainNotAllowed: 422,
    InvalidName: 422,
    InvalidPersona: 422,
    UnknownAccount: 422,
    BoundaryValidationError: 422,
    InvalidBoundaryDocument: 422,
    WideningViolation: 422,
    DuplicateEmail: 409,
    PersonaTaken: 409,
    PersonaMismatch: 409,
    NotPending: 409,
    NotHeld: 409,
    AccountNotActive: 403,
    NotModerator: 403,
    NotAuthor: 403,
    NotAuthorized: 403,
    UnknownThread: 404,
    UnknownNode: 404,
    ParentNotVisible: 404,
}


def _status_for(exc: EnclaveError) -> int:
    for klass in type(exc).__mro__:
        if klass in _STATUS:
            return _STATUS[klass]
    return 500


class SessionStore:
    """Opaque bearer tokens with server-side state and a fixed request cap."""

    def __init__(self, request_cap: int):
        self._lock = threading.Lock()
        self._sessions: dict[str, str] = {}
        self._counts: dict[str, int] = {}
        self._cap = request_cap

    def create(self, account_id: str) -> str:
        token = secrets.token_urlsafe(24)
        with self._lock:
            self._sessions[token] = account_id
            self._counts[token] = 0
        return token

    def account_for(self, token: str) -> str | None:
        with self._lock:
            account_id = self._sessions.get(token)
            if account_id is None:
                return None
            self._counts[token] += 1
            if self._counts[token] > self._cap:
                return "__over_cap__"
            return account_id


def create_app(platform: Platform, session_request_cap: int = 100_000) -> FastAPI:
    app = FastAPI(title="enclave", docs_url=None, redoc_url=None, openapi_url=None)
    sessions = SessionStore(session_request_cap)

    # -- plumbing -------------------------------------------------------------

    @app.exception_handler(EnclaveError)
    async def on_error(_request, exc: EnclaveError):
        status = _status_for(exc)
        if status == 404:
            # invisible and nonexistent must be indistinguishable
            return JSONResponse(NOT_FOUND_BODY, status_code=404)
        return JSONResponse({"error": exc.code, "message": exc.message},
                            status_code=status)

    def not_found() -> JSONResponse:
        return JSONResponse(NOT_FOUND_BODY, status_code=404)

    async def caller(request: Request) -> str:
        header = request.headers.get("authorization", "")
        token = header.removeprefix("Bearer ").strip()
        account_id = sessions.account_for(token) if token else None
        if account_id is None:
            raise _Unauthenticated()
        if account_id == "__over_cap__":
            raise _OverCap()
        return account_id

    class _Unauthenticated(Exception):
        pass

    class _OverCap(Exception):
        pass

    @app.exception_handler(_Unauthenticated)
    async def on_unauthenticated(_request, _exc):
        return JSONResponse({"error": "unauthenticated",
                             "message": "missing or invalid session token"},
                            status_code=401)

    @app.exception_handler(_OverCap)
    async def on_over_cap(_request, _exc):
        return JSONResponse({"error": "request_cap_exceeded",
                             "message": "session request cap exceeded"},
                            status_code=429)

    def node_payload(node: ContentNode, viewer_id: str) -> dict:
        payload = {
            "node_id": node.node_id,
            "thread_id": node.thread_id,
            "parent_id": node.parent_id,
            "persona": node.persona,
            "body": node.body,
            "created_at": node.created_at.isoformat(),
            "own": node.author_account_id == viewer_id,
        }
        view = platform.boundary_view(viewer_id, node.node_id)
        if view is not None:
            payload["boundary"] = boundary_to_dict(view)
        if node.state != NodeState.PUBLISHED:
            payload["state"] = node.state.value
        return payload

    def account_payload(account) -> dict:
        return {
            "account_id": account.account_id,
            "email": account.contact_email,
            "status": account.status.value,
            "moderator": account.moderator,
            "default_persona": account.default_persona,
            "personas": sorted(platform.registry.personas_of(account.account_id)),
            "traits": account.profile.to_dict(),
            "default_boundary": (
                boundary_to_dict(account.default_boundary)
                if account.default_boundary is not None else None),
        }

    def parse_boundary(raw) -> ConsentBoundary:
        if raw is None:
            return PUBLIC_BOUNDARY
        return boundary_from_dict(raw)

    async def json_body(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            return {}
        return body if isinstance(body, dict) else {}

    def gate_node_op(node_id: str, viewer_id: str, *, owner_only: bool = True):
        """Author-scoped node ops: owners act on their nodes even when an
        ancestor restriction hid them; everyone else gets 403 if they can
        see the node and an opaque 404 if they cannot."""
        node = platform.content.get_node(node_id)
        if node.author_account_id == viewer_id:
            if node.state == NodeState.DELETED:
                raise UnknownNode(node_id)
            return node
        if platform.content.visible_to(viewer_id, node_id):
            if owner_only:
                raise NotAuthor("not the author of this node")
            return node
        raise UnknownNode(node_id)

    # -- sessions and accounts --------------------------------------------------

    @app.post("/register", status_code=201)
    async def register(request: Request):
        body = await json_body(request)
        traits = profile_from_dict(body.get("traits") or {})
        account = platform.register(body.get("email", ""), traits,
                                    body.get("persona", ""))
        return {"account_id": account.account_id, "status": account.status.value}

    @app.post("/session")
    async def login(request: Request):
        body = await json_body(request)
        account = platform.registry.by_email(body.get("email", ""))
        if account is None:
            return JSONResponse({"error": "unauthenticated",
                                 "message": "no active account for that address"},
                                status_code=401)
        if not account.is_active:
            raise AccountNotActive(f"account is {account.status.value}")
        token = sessions.create(account.account_id)
        return {"token": token, "account_id": account.account_id}

    @app.get("/account")
    async def get_account(viewer: str = Depends(caller)):
        return account_payload(platform.registry.get(viewer))

    @app.patch("/account")
    async def patch_account(request: Request, viewer: str = Depends(caller)):
        body = await json_body(request)
        if "traits" in body:
            platform.update_traits(viewer, body["traits"] or {})
        if "default_boundary" in body:
            raw = body["default_boundary"]
            if raw is None:
                platform.registry.set_default_boundary(viewer, None)
            else:
                boundary = boundary_from_dict(raw)
                account = platform.registry.get(viewer)
                validate_boundary(boundary, account.profile, "post", None,
                                  platform.vocab).raise_first()
                platform.registry.set_default_boundary(viewer, boundary)
        if "default_persona" in body:
            platform.registry.set_default_persona(viewer, body["default_persona"])
        if "email" in body:
            platform.registry.change_email(viewer, body["email"])
        return account_payload(platform.registry.get(viewer))

    @app.post("/personas", status_code=201)
    async def claim_persona(request: Request, viewer: str = Depends(caller)):
        body = await json_body(request)
        persona = platform.claim_persona(viewer, body.get("name", ""))
        return {"name": persona.name}

    @app.get("/vocab")
    async def vocab():
        return platform.vocab.as_dict()

    # -- content -------------------------------------------------------------------

    @app.get("/feed")
    async def feed(viewer: str = Depends(caller)):
        platform.registry.require_active(viewer)
        return {"posts": [node_payload(n, viewer) for n in platform.get_feed(viewer)]}

    @app.get("/threads/{thread_id}")
    async def thread(thread_id: str, viewer: str = Depends(caller)):
        platform.registry.require_active(viewer)
        try:
            nodes = platform.get_thread(viewer, thread_id)
        except UnknownThread:
            return not_found()
        if not nodes:
            return not_found()
        return {"thread_id": thread_id,
                "nodes": [node_payload(n, viewer) for n in nodes]}

    @app.post("/posts", status_code=201)
    async def create_post(request: Request, viewer: str = Depends(caller)):
        body = await json_body(request)
        account = platform.registry.require_active(viewer)
        persona = body.get("persona") or account.default_persona
        node = platform.create_post(viewer, persona, body.get("body", ""),
                                    parse_boundary(body.get("boundary")))
        return node_payload(node, viewer)

    @app.post("/posts/{node_id}/comments", status_code=201)
    async def create_comment(node_id: str, request: Request,
                             viewer: str = Depends(caller)):
        body = await json_body(request)
        account = platform.registry.require_active(viewer)
        parent = platform.content.find_node(node_id)
        if parent is None or not platform.content.visible_to(viewer, node_id):
            return not_found()
        persona = body.get("persona") \
            or platform.registry.thread_persona(viewer, parent.thread_id) \
            or account.default_persona
        node = platform.create_comment(viewer, persona, node_id,
                                       body.get("body", ""),
                                       parse_boundary(body.get("boundary")))
        return node_payload(node, viewer)

    @app.patch("/nodes/{node_id}/boundary")
    async def restrict(node_id: str, request: Request, viewer: str = Depends(caller)):
        body = await json_body(request)
        gate_node_op(node_id, viewer)
        node = platform.restrict_node_boundary(
            viewer, node_id, boundary_from_dict(body.get("boundary") or {}))
        return node_payload(node, viewer)

    @app.patch("/nodes/{node_id}/boundary-visibility")
    async def toggle_visibility(node_id: str, request: Request,
                                viewer: str = Depends(caller)):
        body = await json_body(request)
        gate_node_op(node_id, viewer)
        node = platform.toggle_boundary_visibility(viewer, node_id,
                                                   bool(body.get("show")))
        return node_payload(node, viewer)

    @app.delete("/nodes/{node_id}", status_code=204)
    async def delete_node(node_id: str, viewer: str = Depends(caller)):
        gate_node_op(node_id, viewer)
        platform.delete_node(viewer, node_id)
        return Response(status_code=204)

    @app.get("/nodes/{node_id}/last-used-boundary")
    async def last_used(node_id: str, viewer: str = Depends(caller)):
        platform.registry.require_active(viewer)
        node = platform.content.find_node(node_id)
        if node is None or not platform.content.visible_to(viewer, node_id):
            return not_found()
        boundary = platform.last_used_boundary(viewer, node.thread_id)
        return {"boundary": boundary_to_dict(boundary)}

    # -- moderator ---------------------------------------------------------------

    @app.get("/mod/queue")
    async def mod_queue(viewer: str = Depends(caller)):
        return platform.moderation.queue(viewer)

    @app.post("/mod/signups/{account_id}")
    async def mod_signup(account_id: str, request: Request,
                         viewer: str = Depends(caller)):
        body = await json_body(request)
        decision = body.get("decision", "")
        if decision not in ("approve", "reject"):
            raise InvalidName("decision must be 'approve' or 'reject'")
        account = platform.approve_signup(viewer, account_id,
                                          decision == "approve")
        return {"account_id": account.account_id, "status": account.status.value}

    @app.post("/mod/nodes/{node_id}/resolve")
    async def mod_resolve(node_id: str, request: Request,
                          viewer: str = Depends(caller)):
        body = await json_body(request)
        platform.registry.require_moderator(viewer)
        node = platform.resolve_other_info(
            viewer, node_id, frozenset(body.get("recipients") or []))
        return node_payload(node, viewer)

    @app.delete("/mod/nodes/{node_id}", status_code=204)
    async def mod_remove(node_id: str, request: Request,
                         viewer: str = Depends(caller)):
        body = await json_body(request)
        platform.moderate_remove(viewer, node_id, body.get("reason", ""))
        return Response(status_code=204)

    return app
