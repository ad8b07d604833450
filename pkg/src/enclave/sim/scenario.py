"""Scenario files: one JSON object per line.

Line kinds:

* ``{"op": "meta", "seed": 7}`` — optional, first line; records the
  generator seed.
* ``{"op": "user", "email": ..., "traits": {...}, "personas": [...]}`` —
  initial population; the replayer registers and approves these before any
  action runs.
* action lines — ``{"op": <kind>, "actor": <email>, ..., "expect": <tag>}``.

Action kinds and their payload fields:

    post            actor, label, persona, body, boundary?
    comment         actor, label, parent (node label), persona, body, boundary?
    restrict        actor, node, boundary
    toggle_visibility  actor, node, show
    delete          actor, node
    update_traits   actor, patch
    claim_persona   actor, name
    register        email, traits, persona
    approve         account_email, decision ("approve" | "reject")
    resolve         node, recipients (list of emails)   [moderator action]
    mod_remove      node, reason                        [moderator action]

``expect`` defaults to "ok"; otherwise it names the error code the engine
must raise (e.g. "widening_violation"). Created nodes are referred to by
their ``label`` in later actions; the replayer maps labels to runtime ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import EnclaveError

ACTION_KINDS = (
    "post",
    "comment",
    "restrict",
    "toggle_visibility",
    "delete",
    "update_traits",
    "claim_persona",
    "register",
    "approve",
    "resolve",
    "mod_remove",
)


class ScenarioParseError(EnclaveError):
    code = "scenario_parse_error"


@dataclass(frozen=True)
class ScenarioUser:
    email: str
    traits: dict
    personas: tuple[str, ...]

    def to_line(self) -> dict:
        return {"op": "user", "email": self.email, "traits": self.traits,
                "personas": list(self.personas)}


@dataclass(frozen=True)
class Action:
    op: str
    payload: dict
    expect: str = "ok"

    def to_line(self) -> dict:
        line: dict[str, Any] = {"op": self.op, **self.payload}
        if self.expect != "ok":
            line["expect"] = self.expect
        return line


@dataclass
class Scenario:
    users: list[ScenarioUser] = field(default_factory=list)
    actions: list[Action] = field(default_factory=list)
    seed: int | None = None

    def to_jsonl(self) -> str:
        lines = []
        if self.seed is not None:
            lines.append({"op": "meta", "seed": self.seed})
        lines.extend(u.to_line() for u in self.users)
        lines.extend(a.to_line() for a in self.actions)
        return "\n".join(json.dumps(line, sort_keys=True) for line in lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")


def parse_scenario(text: str) -> Scenario:
    scenario = Scenario()
    seen_action = False
    for index, raw_line in enumerate(text.splitlines(), start=1):
        raw_line = raw_line.strip()
        if not raw_line or raw_line.startswith("#"):
            continue
        try:
            line = json.loads(raw_line)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(f"line {index}: not valid JSON ({exc})") from exc
        if not isinstance(line, dict) or "op" not in line:
            raise ScenarioParseError(f"line {index}: expected an object with an 'op' field")
        op = line.pop("op")
        if op == "meta":
            scenario.seed = line.get("seed")
        elif op == "user":
            if seen_action:
                raise ScenarioParseError(f"line {index}: users must precede actions")
            try:
                scenario.users.append(ScenarioUser(
                    email=line["email"],
                    traits=line.get("traits") or {},
                    personas=tuple(line.get("personas") or []),
                ))
            except KeyError as exc:
                raise ScenarioParseError(f"line {index}: user line missing {exc}") from exc
        elif op in ACTION_KINDS:
            seen_action = True
            expect = line.pop("expect", "ok")
            scenario.actions.append(Action(op=op, payload=line, expect=expect))
        else:
            raise ScenarioParseError(f"line {index}: unknown op {op!r}")
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))
