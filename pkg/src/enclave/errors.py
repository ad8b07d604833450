"""Exception hierarchy shared by every layer of the platform.

Each error carries a stable machine-readable ``code`` so the HTTP layer and
the replay harness can assert on outcomes without parsing messages.
"""

from __future__ import annotations


class EnclaveError(Exception):
    """Base class for all platform errors."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# ---------------------------------------------------------------------------
# Boundary validation
# ---------------------------------------------------------------------------

class BoundaryValidationError(EnclaveError):
    """A consent boundary failed validation; see ``dimension``/``detail``."""

    code = "invalid_boundary"

    def __init__(self, message: str = "", dimension: str | None = None):
        super().__init__(message)
        self.dimension = dimension


class IdentityNotHeld(BoundaryValidationError):
    """Author restricted on an identity value they have not declared."""

    code = "identity_not_held"


class EmptyRestriction(BoundaryValidationError):
    """A restricted dimension carried an empty value set."""

    code = "empty_restriction"


class UnknownVocabularyId(BoundaryValidationError):
    code = "unknown_vocabulary_id"


class UsernameNotInThread(BoundaryValidationError):
    """A comment boundary named a persona that never appeared in the thread."""

    code = "username_not_in_thread"


class InvalidBoundaryDocument(BoundaryValidationError):
    """Serialized boundary document is structurally malformed."""

    code = "invalid_boundary_document"


class WideningViolation(EnclaveError):
    """A boundary edit attempted to widen the audience on some dimension."""

    code = "widening_violation"

    def __init__(self, dimension: str, message: str = ""):
        super().__init__(message or f"dimension {dimension!r} may only narrow")
        self.dimension = dimension


class MalformedChain(EnclaveError):
    """Parent links in a node chain are inconsistent."""

    code = "malformed_chain"


# ---------------------------------------------------------------------------
# Accounts, personas, sessions
# ---------------------------------------------------------------------------

class DomainNotAllowed(EnclaveError):
    code = "domain_not_allowed"


class DuplicateEmail(EnclaveError):
    code = "duplicate_email"


class PersonaTaken(EnclaveError):
    code = "persona_taken"


class InvalidName(EnclaveError):
    code = "invalid_name"


class UnknownAccount(EnclaveError):
    code = "unknown_account"


class AccountNotActive(EnclaveError):
    code = "account_not_active"


class NotPending(EnclaveError):
    code = "not_pending"


class NotModerator(EnclaveError):
    code = "not_moderator"


class PersonaMismatch(EnclaveError):
    """A different persona was submitted for an already-bound thread."""

    code = "persona_mismatch"


class InvalidPersona(EnclaveError):
    """Persona does not exist or is not owned by the acting account."""

    code = "invalid_persona"


# ---------------------------------------------------------------------------
# Content
# ---------------------------------------------------------------------------

class UnknownThread(EnclaveError):
    code = "unknown_thread"


class UnknownNode(EnclaveError):
    code = "unknown_node"


class ParentNotVisible(EnclaveError):
    """Commenter is outside the parent node's audience (or parent not live)."""

    code = "parent_not_visible"


class NotAuthor(EnclaveError):
    code = "not_author"


class NotAuthorized(EnclaveError):
    code = "not_authorized"


class NotHeld(EnclaveError):
    code = "not_held"
