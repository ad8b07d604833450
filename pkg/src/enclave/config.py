"""Service configuration: one JSON file plus environment overrides.

Environment variables (prefix ``ENCLAVE_``) override file values, which
override defaults. The moderator account named here is created at startup.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .notifications import FileOutbox, MemoryOutbox, Transport
from .platform import Platform
from .vocab import load_vocabulary

_ENV_PREFIX = "ENCLAVE_"


@dataclass
class Config:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8470
    data_dir: str = ""
    domain_allowlist_path: str = ""
    programs_path: str = ""
    faculty_path: str = ""
    challenges_path: str = ""
    outbox_path: str = ""
    audit_export_path: str = ""
    moderator_email: str = "moderator@univ.edu"
    moderator_persona: str = "steward"
    site_name: str = "enclave"
    session_request_cap: int = 100_000
    allowed_domains: list[str] = field(default_factory=lambda: ["univ.edu"])


def load_config(path: str | Path | None = None, env: dict | None = None) -> Config:
    env = env if env is not None else dict(os.environ)
    config = Config()
    if path is None and env.get(_ENV_PREFIX + "CONFIG"):
        path = env[_ENV_PREFIX + "CONFIG"]
    if path:
        raw = json.loads(Path(path).read_text())
        for key, value in raw.items():
            if not hasattr(config, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(config, key, value)
    overrides = {
        "LISTEN_HOST": ("listen_host", str),
        "LISTEN_PORT": ("listen_port", int),
        "DATA_DIR": ("data_dir", str),
        "DOMAIN_ALLOWLIST": ("domain_allowlist_path", str),
        "OUTBOX": ("outbox_path", str),
        "AUDIT_EXPORT": ("audit_export_path", str),
        "MODERATOR_EMAIL": ("moderator_email", str),
        "MODERATOR_PERSONA": ("moderator_persona", str),
        "SITE_NAME": ("site_name", str),
        "SESSION_REQUEST_CAP": ("session_request_cap", int),
    }
    for suffix, (attr, cast) in overrides.items():
        value = env.get(_ENV_PREFIX + suffix)
        if value is not None:
            setattr(config, attr, cast(value))
    return config


def read_domain_allowlist(path: str | Path) -> list[str]:
    """One domain per line; blank lines and # comments ignored."""
    domains = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            domains.append(line.lower())
    return domains


def build_platform(config: Config, transport: Transport | None = None,
                   clock=None) -> Platform:
    data_dir = Path(config.data_dir) if config.data_dir else None
    if data_dir:
        data_dir.mkdir(parents=True, exist_ok=True)

    domains = list(config.allowed_domains)
    if config.domain_allowlist_path:
        domains = read_domain_allowlist(config.domain_allowlist_path)

    vocab = load_vocabulary(
        Path(config.programs_path) if config.programs_path else None,
        Path(config.faculty_path) if config.faculty_path else None,
        Path(config.challenges_path) if config.challenges_path else None,
    )

    if transport is None:
        outbox_path = config.outbox_path or (
            str(data_dir / "outbox.jsonl") if data_dir else "")
        transport = FileOutbox(outbox_path) if outbox_path else MemoryOutbox()

    audit_path = config.audit_export_path or (
        str(data_dir / "audit.jsonl") if data_dir else None)

    kwargs = dict(
        vocab=vocab,
        allowed_domains=domains,
        transport=transport,
        site_name=config.site_name,
        audit_export_path=audit_path,
        moderator_email=config.moderator_email,
        moderator_persona=config.moderator_persona,
    )
    if clock is not None:
        kwargs["clock"] = clock
    return Platform(**kwargs)
