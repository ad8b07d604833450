// Shared vocabulary fixture for the test suite.

import type { Vocab } from "../src/types";

export const VOCAB: Vocab = {
  programs: [
    { id: "prog-cs", label: "Computer Science" },
    { id: "prog-infosci", label: "Information Science" },
  ],
  faculty: [
    { id: "fac-astone", label: "A. Stone" },
    { id: "fac-dkim", label: "D. Kim" },
    { id: "fac-jreyes", label: "J. Reyes" },
  ],
  challenges: [
    { id: "communication-issue", label: "Communication issues" },
    { id: "lack-of-feedback", label: "Lack of feedback" },
    { id: "micromanagement", label: "Micromanagement" },
  ],
  genders: ["woman", "man", "non-binary", "self-described"],
  races: ["asian", "white", "mixed"],
};
