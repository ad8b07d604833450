// Tabbed consent-boundary builder.
//
// One tab per dimension group (identity, experiences, program and faculty,
// specific users, other) so the composer never shows every field at once.
// Identity options the user has not declared for themselves are disabled:
// you can only invite people to share something you hold. The builder emits
// the canonical boundary document (absent key = unrestricted, sorted
// arrays), bit-compatible with what the server stores and serves back.

import type { BoundaryDoc, TraitsDoc, Vocab } from "./types";

export type TabId = "identity" | "experiences" | "program" | "users" | "other";

export interface BuilderOption {
  value: string;
  label: string;
  selected: boolean;
  // present and false when the author does not hold the identity value
  enabled: boolean;
}

export interface BuilderState {
  activeTab: TabId;
  gender: BuilderOption[];
  races: BuilderOption[];
  international: { enabled: boolean; selected: boolean; heldValue: boolean | null };
  challenges: BuilderOption[];
  advisingChange: { selected: boolean };
  programs: BuilderOption[];
  advisedByAny: BuilderOption[];
  notAdvisedBy: BuilderOption[];
  usernames: BuilderOption[];
  otherInfo: string;
  showBoundary: boolean;
  showToParentAuthor: boolean;
  isComment: boolean;
}

export const TABS: Array<{ id: TabId; label: string }> = [
  { id: "identity", label: "Identity" },
  { id: "experiences", label: "Advising experiences" },
  { id: "program", label: "Program & faculty" },
  { id: "users", label: "Specific users" },
  { id: "other", label: "Other information" },
];

function options(values: Array<{ value: string; label: string }>,
                 selected: Set<string>, enabledWhen: (value: string) => boolean,
): BuilderOption[] {
  return values.map(({ value, label }) => ({
    value,
    label,
    selected: selected.has(value),
    enabled: enabledWhen(value),
  }));
}

/** Build the composer state for an author profile, optionally prefilled
 * from a previously used boundary (the server's last-used prefill). For
 * comments, the selectable usernames are the thread's participant personas. */
export function createBuilder(
  profile: TraitsDoc,
  vocab: Vocab,
  prefill: BoundaryDoc = {},
  threadPersonas: string[] = [],
  isComment = false,
): BuilderState {
  const pick = (values?: string[]) => new Set(values ?? []);
  const heldRaces = new Set(profile.races ?? []);
  const heldGender = profile.gender ?? null;
  const intl = profile.international ?? null;

  return {
    activeTab: "identity",
    gender: options(
      vocab.genders.map((g) => ({ value: g, label: g })),
      pick(prefill.gender_allowed),
      (g) => heldGender === g,
    ),
    races: options(
      vocab.races.map((r) => ({ value: r, label: r })),
      pick(prefill.races_allowed),
      (r) => heldRaces.has(r),
    ),
    international: {
      enabled: intl !== null,
      selected: prefill.require_international !== undefined,
      heldValue: intl,
    },
    challenges: options(
      vocab.challenges.map((c) => ({ value: c.id, label: c.label })),
      pick(prefill.challenges_any),
      () => true,
    ),
    advisingChange: { selected: prefill.require_advising_change === true },
    programs: options(
      vocab.programs.map((p) => ({ value: p.id, label: p.label })),
      pick(prefill.programs_allowed),
      () => true,
    ),
    advisedByAny: options(
      vocab.faculty.map((f) => ({ value: f.id, label: f.label })),
      pick(prefill.advised_by_any),
      () => true,
    ),
    notAdvisedBy: options(
      vocab.faculty.map((f) => ({ value: f.id, label: f.label })),
      pick(prefill.not_advised_by),
      () => true,
    ),
    usernames: options(
      threadPersonas.map((p) => ({ value: p, label: `@${p}` })),
      pick(prefill.usernames_allowed),
      () => true,
    ),
    otherInfo: prefill.other_info ?? "",
    showBoundary: prefill.show_boundary ?? false,
    showToParentAuthor: prefill.show_to_parent_author ?? true,
    isComment,
  };
}

/** Toggle one option; disabled identity options never change state. */
export function toggleOption(group: BuilderOption[], value: string): boolean {
  const option = group.find((o) => o.value === value);
  if (!option || !option.enabled) return false;
  option.selected = !option.selected;
  return true;
}

const selected = (group: BuilderOption[]) =>
  group.filter((o) => o.selected).map((o) => o.value).sort();

/** Emit the canonical boundary document: unrestricted dimensions and
 * default flags are absent, set values sorted. */
export function emitBoundary(state: BuilderState): BoundaryDoc {
  const doc: BoundaryDoc = {};
  const gender = selected(state.gender);
  if (gender.length) doc.gender_allowed = gender;
  const races = selected(state.races);
  if (races.length) doc.races_allowed = races;
  if (state.international.selected && state.international.heldValue !== null) {
    doc.require_international = state.international.heldValue;
  }
  const challenges = selected(state.challenges);
  if (challenges.length) doc.challenges_any = challenges;
  if (state.advisingChange.selected) doc.require_advising_change = true;
  const programs = selected(state.programs);
  if (programs.length) doc.programs_allowed = programs;
  const advisedBy = selected(state.advisedByAny);
  if (advisedBy.length) doc.advised_by_any = advisedBy;
  const excluded = selected(state.notAdvisedBy);
  if (excluded.length) doc.not_advised_by = excluded;
  const usernames = selected(state.usernames);
  if (usernames.length) doc.usernames_allowed = usernames;
  if (state.otherInfo.trim()) doc.other_info = state.otherInfo;
  if (state.showBoundary) doc.show_boundary = true;
  if (state.isComment && !state.showToParentAuthor) doc.show_to_parent_author = false;
  return doc;
}

export function isPublic(doc: BoundaryDoc): boolean {
  const audienceKeys: Array<keyof BoundaryDoc> = [
    "gender_allowed", "races_allowed", "require_international",
    "challenges_any", "require_advising_change", "programs_allowed",
    "advised_by_any", "not_advised_by", "usernames_allowed", "other_info",
  ];
  return audienceKeys.every((key) => doc[key] === undefined);
}

/** Two documents mean the same boundary regardless of key or array order. */
export function semanticallyEqual(a: BoundaryDoc, b: BoundaryDoc): boolean {
  return canonicalJson(a) === canonicalJson(b);
}

export function canonicalJson(doc: BoundaryDoc): string {
  const normalized: Record<string, unknown> = {};
  for (const key of Object.keys(doc).sort()) {
    const value = (doc as Record<string, unknown>)[key];
    if (value === undefined) continue;
    if (Array.isArray(value)) {
      if (value.length === 0) continue;
      normalized[key] = [...value].sort();
    } else if (key === "show_boundary" && value === false) {
      continue;
    } else if (key === "show_to_parent_author" && value === true) {
      continue;
    } else if (key === "other_info" && value === "") {
      continue;
    } else {
      normalized[key] = value;
    }
  }
  return JSON.stringify(normalized, Object.keys(normalized).sort());
}

/** Human-readable chip text, e.g.
 * "international · not advised by A. Stone · communication issues or lack of feedback". */
export function chipText(doc: BoundaryDoc, vocab: Vocab): string {
  if (isPublic(doc)) return "public";
  const fac = new Map(vocab.faculty.map((f) => [f.id, f.label]));
  const chal = new Map(vocab.challenges.map((c) => [c.id, c.label]));
  const prog = new Map(vocab.programs.map((p) => [p.id, p.label]));
  const parts: string[] = [];
  if (doc.gender_allowed) parts.push(doc.gender_allowed.join(" or "));
  if (doc.races_allowed) parts.push(doc.races_allowed.join(" or "));
  if (doc.require_international !== undefined) {
    parts.push(doc.require_international ? "international" : "domestic");
  }
  if (doc.challenges_any) {
    parts.push(doc.challenges_any
      .map((id) => (chal.get(id) ?? id).toLowerCase())
      .join(" or "));
  }
  if (doc.require_advising_change) parts.push("changed advising situation");
  if (doc.programs_allowed) {
    parts.push(doc.programs_allowed.map((id) => prog.get(id) ?? id).join(" or "));
  }
  if (doc.advised_by_any) {
    parts.push("advised by " + doc.advised_by_any
      .map((id) => fac.get(id) ?? id).join(" or "));
  }
  if (doc.not_advised_by) {
    parts.push("not advised by " + doc.not_advised_by
      .map((id) => fac.get(id) ?? id).join(" or "));
  }
  if (doc.usernames_allowed) {
    parts.push("only " + doc.usernames_allowed.map((u) => `@${u}`).join(", "));
  }
  if (doc.other_info) parts.push("pending moderator review");
  return parts.join(" · ");
}
