"""Shared fixtures: deterministic clock, platform factory, account helpers."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from enclave.notifications import MemoryOutbox
from enclave.platform import Platform
from enclave.traits import TraitProfile
from enclave.vocab import default_vocabulary


class LogicalClock:
    """Monotonic fake clock: one second per tick, deterministic runs."""

    def __init__(self, start: str = "2025-01-01T00:00:00+00:00"):
        self._now = datetime.fromisoformat(start).astimezone(timezone.utc)

    def __call__(self) -> datetime:
        self._now += timedelta(seconds=1)
        return self._now


@pytest.fixture
def vocab():
    return default_vocabulary()


@pytest.fixture
def outbox():
    return MemoryOutbox()


@pytest.fixture
def platform(outbox):
    return Platform(transport=outbox, clock=LogicalClock())


def make_platform(**kwargs) -> Platform:
    kwargs.setdefault("transport", MemoryOutbox())
    kwargs.setdefault("clock", LogicalClock())
    return Platform(**kwargs)


def activate(platform: Platform, email: str, traits: TraitProfile,
             persona: str):
    """Register an account and immediately approve it."""
    account = platform.register(email, traits, persona)
    platform.approve_signup(platform.moderator.account_id, account.account_id, True)
    return account
