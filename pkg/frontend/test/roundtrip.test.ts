// Acceptance: 50 random builder boundaries survive POST -> GET unchanged.
//
// For every generated boundary the builder's emitted document is posted,
// then read back through the author's prefill endpoint (and, when shown,
// through the thread view chip) and compared semantically.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import {
  BuilderState,
  createBuilder,
  emitBoundary,
  semanticallyEqual,
  toggleOption,
} from "../src/boundary";
import type { BoundaryDoc, TraitsDoc, Vocab } from "../src/types";
import { startServer, TestServer } from "./server";

// deterministic small PRNG so failures reproduce
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const AUTHOR_TRAITS: TraitsDoc = {
  gender: "woman",
  races: ["asian", "mixed"],
  international: true,
  phd_program: "prog-cs",
  current_advisors: ["fac-jreyes"],
  prior_advisors: ["fac-dkim"],
  challenges_experienced: ["communication-issue", "lack-of-feedback"],
  advising_status_changed: true,
};

function randomizeBuilder(builder: BuilderState, rand: () => number): void {
  const maybeToggle = (group: BuilderState["gender"], probability: number) => {
    for (const option of group) {
      if (option.enabled && rand() < probability) {
        toggleOption(group, option.value);
      }
    }
  };
  maybeToggle(builder.gender, 0.25);
  maybeToggle(builder.races, 0.25);
  if (builder.international.enabled && rand() < 0.3) {
    builder.international.selected = true;
  }
  maybeToggle(builder.challenges, 0.2);
  if (rand() < 0.25) builder.advisingChange.selected = true;
  maybeToggle(builder.programs, 0.2);
  maybeToggle(builder.advisedByAny, 0.15);
  maybeToggle(builder.notAdvisedBy, 0.2);
  if (rand() < 0.06) builder.otherInfo = "a group I can describe but not select";
  builder.showBoundary = rand() < 0.5;
}

describe("boundary round trip through the live API", () => {
  let server: TestServer;
  let author: ApiClient;
  let vocab: Vocab;

  beforeAll(async () => {
    server = await startServer();
    const moderator = new ApiClient(server.baseUrl);
    await moderator.login(server.moderatorEmail);

    author = new ApiClient(server.baseUrl);
    const { account_id } = await author.register(
      "author@univ.edu", "roundtrip1", AUTHOR_TRAITS);
    await moderator.modSignup(account_id, "approve");
    await author.login("author@univ.edu");
    vocab = await author.vocab();
  });

  afterAll(() => server?.stop());

  it("50 generated boundaries come back semantically identical", async () => {
    const rand = mulberry32(20260808);
    let shown = 0;
    for (let i = 0; i < 50; i++) {
      const builder = createBuilder(AUTHOR_TRAITS, vocab);
      randomizeBuilder(builder, rand);
      const sent: BoundaryDoc = emitBoundary(builder);

      const node = await author.createPost("roundtrip1", `round trip ${i}`, sent);
      const { boundary: prefill } = await author.lastUsedBoundary(node.node_id);
      expect(semanticallyEqual(prefill, sent),
             `prefill mismatch on ${i}: sent=${JSON.stringify(sent)} ` +
             `got=${JSON.stringify(prefill)}`).toBe(true);

      if (sent.show_boundary && !sent.other_info) {
        shown += 1;
        const thread = await author.thread(node.thread_id);
        const served = thread.nodes[0]?.boundary;
        expect(served).toBeDefined();
        expect(semanticallyEqual(served!, sent)).toBe(true);
      }
    }
    expect(shown).toBeGreaterThan(5);
  });

  it("the builder prefills from the served document losslessly", async () => {
    const sent: BoundaryDoc = {
      races_allowed: ["asian"],
      require_advising_change: true,
      not_advised_by: ["fac-astone"],
      show_boundary: true,
    };
    const node = await author.createPost("roundtrip1", "prefill check", sent);
    const { boundary } = await author.lastUsedBoundary(node.node_id);
    const builder = createBuilder(AUTHOR_TRAITS, vocab, boundary);
    expect(semanticallyEqual(emitBoundary(builder), sent)).toBe(true);
  });
});
