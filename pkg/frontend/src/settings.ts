// Account settings model: trait editor, default boundary, tutorial copy.

import type { TraitsDoc } from "./types";

// Shown above the trait editor; the declarations feed matching and nothing
// else, and they are never displayed to other users.
export const TRAIT_PRIVACY_NOTE =
  "Only the system sees these declarations. They are never shown to other " +
  "users; they decide which restricted posts and comments you can see, and " +
  "who can see yours.";

export const TUTORIAL = [
  "Your account page declares who you are: identity, program, advisors, and " +
    "advising experiences. Declaring is voluntary, field by field.",
  "When someone restricts a post or comment, only people whose declarations " +
    "match can see it. If you leave a field blank, you will not see content " +
    "restricted on that field - blank never matches.",
  "You can restrict your own posts and comments the same way, from the " +
    "composer. Each post or comment gets its own boundary; editing one never " +
    "changes the others.",
  "After publishing you can only narrow a boundary, never widen it. People " +
    "who no longer fit silently lose access, including to their own replies.",
  "Usernames are per-thread pseudonyms. You can use a different name in " +
    "every thread, but inside one thread your name stays fixed.",
] as const;

export const ABOUT_OPERATOR =
  "This site is run by a PhD student who has been through an advising " +
  "change themselves, not by faculty or administration. Sign-ups are " +
  "reviewed by that one moderator, who is also the only person with " +
  "backend access.";

export interface ClearWarning {
  field: keyof TraitsDoc;
  message: string;
}

/** Warn before clearing a declared trait: matching restricted content will
 * disappear from the feed the moment the field goes blank. */
export function clearTraitWarning(traits: TraitsDoc,
                                  field: keyof TraitsDoc): ClearWarning | null {
  const value = traits[field];
  const declared = Array.isArray(value) ? value.length > 0 : value !== undefined;
  if (!declared) return null;
  return {
    field,
    message:
      `Clearing this hides every post or comment restricted on it. ` +
      `Content requiring a declared "${String(field)}" will disappear from ` +
      `your feed immediately.`,
  };
}

/** Null clears a field server-side; absent keys stay untouched. */
export function traitPatch(changes: Partial<Record<keyof TraitsDoc, unknown>>):
    Record<string, unknown> {
  const patch: Record<string, unknown> = {};
  for (const [key, value] of Object.entries(changes)) {
    patch[key] = value === undefined ? null : value;
  }
  return patch;
}
