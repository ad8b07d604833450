"""Account lifecycle, trait declaration with audit, and persona management.

Sign-up requires an allow-listed institutional email domain and an explicit
moderator approval. Persona names are globally unique forever (never
recycled, case-insensitive) and lock to one name per (account, thread) after
first use. Every trait change appends to an immutable audit trail that the
moderation queue surfaces.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Iterable

from .boundaries import ConsentBoundary, PopulationMember
from .errors import (
    AccountNotActive,
    DomainNotAllowed,
    DuplicateEmail,
    InvalidName,
    InvalidPersona,
    NotModerator,
    NotPending,
    PersonaMismatch,
    PersonaTaken,
    UnknownAccount,
)
from .traits import TraitProfile, apply_patch, validate_profile
from .vocab import Vocabulary

_PERSONA_RE = re.compile(r"[a-z0-9_]{3,32}")
_EMAIL_RE = re.compile(r"[^@\s]+@[^@\s]+\.[^@\s]+")

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class AccountStatus(str, Enum):
    PENDING = "pending"
    ACTIVE = "active"
    REJECTED = "rejected"
    DEACTIVATED = "deactivated"


@dataclass
class Persona:
    name: str
    owner_account_id: str
    created_at: datetime


@dataclass
class TraitAuditRecord:
    at: datetime
    account_id: str
    field: str
    old: object
    new: object

    def to_dict(self) -> dict:
        return {
            "at": self.at.isoformat(),
            "account_id": self.account_id,
            "field": self.field,
            "old": self.old,
            "new": self.new,
        }


@dataclass
class Account:
    account_id: str
    contact_email: str
    status: AccountStatus
    default_persona: str
    profile: TraitProfile
    created_at: datetime
    moderator: bool = False
    default_boundary: ConsentBoundary | None = None
    initial_profile: TraitProfile = TraitProfile()
    # Immutable evidence of the domain-verified sign-up address; the contact
    # email may later change to a personal one.
    verified_email: str = ""
    email_domain_verified: bool = False
    trait_audit: list[TraitAuditRecord] = field(default_factory=list)

    @property
    def is_active(self) -> bool:
        return self.status == AccountStatus.ACTIVE


class IdentityRegistry:
    """Serialized writes over accounts, personas, and thread bindings."""

    def __init__(self, vocab: Vocabulary, allowed_domains: Iterable[str],
                 clock: Clock = utc_now):
        self._vocab = vocab
        self._allowed_domains = {d.strip().lower() for d in allowed_domains if d.strip()}
        self._clock = clock
        self._lock = threading.RLock()
        self._accounts: dict[str, Account] = {}
        self._by_email: dict[str, str] = {}
        self._personas: dict[str, Persona] = {}
        self._personas_by_owner: dict[str, set[str]] = {}
        self._bindings: dict[tuple[str, str], str] = {}
        self._trait_feed: list[TraitAuditRecord] = []
        self._seq = 0
        # population() is hot; cache it against a mutation counter
        self._version = 0
        self._population_cache: tuple[int, list[PopulationMember]] | None = None

    # -- lookups ------------------------------------------------------------

    def get(self, account_id: str) -> Account:
        account = self._accounts.get(account_id)
        if account is None:
            raise UnknownAccount(f"no account {account_id!r}")
        return account

    def by_email(self, email: str) -> Account | None:
        account_id = self._by_email.get(email.strip().lower())
        return self._accounts.get(account_id) if account_id else None

    def accounts(self) -> list[Account]:
        return list(self._accounts.values())

    def persona_owner(self, name: str) -> str | None:
        persona = self._personas.get(name.strip().lower())
        return persona.owner_account_id if persona else None

    def personas_of(self, account_id: str) -> frozenset[str]:
        return frozenset(self._personas_by_owner.get(account_id, ()))

    def thread_persona(self, account_id: str, thread_id: str) -> str | None:
        return self._bindings.get((account_id, thread_id))

    def population(self) -> list[PopulationMember]:
        """Active accounts as audience-eligible members (cached until the
        next registry mutation)."""
        with self._lock:
            if self._population_cache and self._population_cache[0] == self._version:
                return self._population_cache[1]
            members = [
                PopulationMember(
                    account_id=a.account_id,
                    profile=a.profile,
                    personas=self.personas_of(a.account_id),
                    moderator=a.moderator,
                )
                for a in self._accounts.values()
                if a.status == AccountStatus.ACTIVE
            ]
            self._population_cache = (self._version, members)
            return members

    def trait_feed(self, limit: int = 100) -> list[TraitAuditRecord]:
        with self._lock:
            return self._trait_feed[-limit:]

    def pending_accounts(self) -> list[Account]:
        with self._lock:
            return [a for a in self._accounts.values()
                    if a.status == AccountStatus.PENDING]

    # -- lifecycle ----------------------------------------------------------

    def register(self, email: str, requested_traits: TraitProfile,
                 requested_persona: str, *, moderator: bool = False,
                 preapproved: bool = False, enforce_domain: bool = True) -> Account:
        """Create a pending account, verify the email domain, and atomically
        reserve the requested persona.

        ``enforce_domain=False`` is for configuration-designated accounts
        (the moderator bootstrap); the verification flag still records the
        actual check result.
        """
        email = email.strip().lower()
        if not _EMAIL_RE.fullmatch(email):
            raise InvalidName(f"malformed email {email!r}")
        domain = email.rsplit("@", 1)[1]
        domain_ok = domain in self._allowed_domains
        if enforce_domain and not domain_ok:
            raise DomainNotAllowed(f"domain {domain!r} is not an allowed institution")
        validate_profile(requested_traits, self._vocab)
        persona_name = _canonical_persona(requested_persona)

        with self._lock:
            if email in self._by_email:
                raise DuplicateEmail(f"an account already exists for {email!r}")
            if persona_name in self._personas:
                raise PersonaTaken(f"persona {persona_name!r} is already owned")
            self._seq += 1
            account = Account(
                account_id=f"acc_{self._seq:06d}",
                contact_email=email,
                status=AccountStatus.ACTIVE if preapproved else AccountStatus.PENDING,
                default_persona=persona_name,
                profile=requested_traits,
                initial_profile=requested_traits,
                created_at=self._clock(),
                moderator=moderator,
                verified_email=email,
                email_domain_verified=domain_ok,
            )
            self._accounts[account.account_id] = account
            self._by_email[email] = account.account_id
            self._personas[persona_name] = Persona(
                persona_name, account.account_id, self._clock())
            self._personas_by_owner.setdefault(account.account_id, set()).add(persona_name)
            self._version += 1
            return account

    def approve_signup(self, moderator_account_id: str, account_id: str,
                       approve: bool) -> Account:
        with self._lock:
            self.require_moderator(moderator_account_id)
            account = self.get(account_id)
            if account.status != AccountStatus.PENDING:
                raise NotPending(f"account {account_id!r} is {account.status.value}")
            account.status = AccountStatus.ACTIVE if approve else AccountStatus.REJECTED
            self._version += 1
            return account

    def deactivate(self, account_id: str) -> Account:
        """Content survives deactivation, but the account leaves every
        audience from this instant. The persona names stay reserved forever."""
        with self._lock:
            account = self.get(account_id)
            account.status = AccountStatus.DEACTIVATED
            self._version += 1
            return account

    def require_active(self, account_id: str) -> Account:
        account = self.get(account_id)
        if not account.is_active:
            raise AccountNotActive(f"account {account_id!r} is {account.status.value}")
        return account

    def require_moderator(self, account_id: str) -> Account:
        account = self.get(account_id)
        if not account.moderator:
            raise NotModerator(f"account {account_id!r} is not the moderator")
        return account

    # -- traits -------------------------------------------------------------

    def update_traits(self, account_id: str, patch: dict) -> TraitProfile:
        """Apply a trait patch, appending one audit record per changed field.

        Changes take effect prospectively: future audience computations use
        the new profile, already-delivered notifications are not recalled.
        """
        with self._lock:
            account = self.require_active(account_id)
            updated, changes = apply_patch(account.profile, patch)
            validate_profile(updated, self._vocab)
            account.profile = updated
            now = self._clock()
            for field_name, old, new in changes:
                record = TraitAuditRecord(now, account_id, field_name, old, new)
                account.trait_audit.append(record)
                self._trait_feed.append(record)
            if changes:
                self._version += 1
            return updated

    def set_default_boundary(self, account_id: str, boundary: ConsentBoundary | None) -> None:
        with self._lock:
            self.require_active(account_id).default_boundary = boundary

    def set_default_persona(self, account_id: str, persona: str) -> None:
        with self._lock:
            account = self.require_active(account_id)
            name = _canonical_persona(persona)
            if self.persona_owner(name) != account_id:
                raise InvalidPersona(f"persona {name!r} is not owned by the account")
            account.default_persona = name

    def change_email(self, account_id: str, email: str) -> None:
        """Allowed after approval (e.g. to a personal address); the verified
        sign-up evidence on the account is never rewritten."""
        email = email.strip().lower()
        if not _EMAIL_RE.fullmatch(email):
            raise InvalidName(f"malformed email {email!r}")
        with self._lock:
            account = self.require_active(account_id)
            existing = self._by_email.get(email)
            if existing and existing != account_id:
                raise DuplicateEmail(f"an account already exists for {email!r}")
            del self._by_email[account.contact_email]
            account.contact_email = email
            self._by_email[email] = account_id

    # -- personas -----------------------------------------------------------

    def claim_persona(self, account_id: str, name: str) -> Persona:
        canonical = _canonical_persona(name)
        with self._lock:
            self.require_active(account_id)
            if canonical in self._personas:
                raise PersonaTaken(f"persona {canonical!r} is already owned")
            persona = Persona(canonical, account_id, self._clock())
            self._personas[canonical] = persona
            self._personas_by_owner.setdefault(account_id, set()).add(canonical)
            self._version += 1
            return persona

    def require_owned_persona(self, account_id: str, name: str) -> str:
        canonical = name.strip().lower()
        if self.persona_owner(canonical) != account_id:
            raise InvalidPersona(f"persona {name!r} is not owned by the account")
        return canonical

    def bind_thread_persona(self, account_id: str, thread_id: str, persona: str) -> str:
        """First use locks the persona for this (account, thread) forever;
        repeating the same name is idempotent, any other name is rejected."""
        canonical = self.require_owned_persona(account_id, persona)
        with self._lock:
            bound = self._bindings.get((account_id, thread_id))
            if bound is None:
                self._bindings[(account_id, thread_id)] = canonical
                return canonical
            if bound != canonical:
                raise PersonaMismatch(
                    f"thread already bound to persona {bound!r}")
            return bound

    # -- export ------------------------------------------------------------

    def export_accounts(self) -> dict[str, dict]:
        with self._lock:
            return {
                a.account_id: {
                    "email": a.contact_email,
                    "status": a.status.value,
                    "moderator": a.moderator,
                    "personas": sorted(self.personas_of(a.account_id)),
                    "profile": a.profile.to_dict(),
                }
                for a in self._accounts.values()
            }


def _canonical_persona(name: str) -> str:
    canonical = name.strip().lower()
    if not _PERSONA_RE.fullmatch(canonical):
        raise InvalidName(
            "persona names are 3-32 characters of lowercase letters, digits, or underscore")
    return canonical
