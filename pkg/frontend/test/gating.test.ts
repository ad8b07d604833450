// Acceptance: identity gating holds on both sides of the wire.
//
// A session whose profile lacks a trait cannot produce a boundary
// restricting on it: the builder control is disabled, and a forged
// submission that bypasses the builder is rejected by the server with 422.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, RequestFailed } from "../src/api";
import { createBuilder, emitBoundary, toggleOption } from "../src/boundary";
import type { Vocab } from "../src/types";
import { startServer, TestServer } from "./server";

describe("identity gating", () => {
  let server: TestServer;
  let bare: ApiClient;   // declared nothing identity-related
  let manSession: ApiClient;  // declared gender=man
  let vocab: Vocab;

  beforeAll(async () => {
    server = await startServer();
    const moderator = new ApiClient(server.baseUrl);
    await moderator.login(server.moderatorEmail);

    bare = new ApiClient(server.baseUrl);
    const a = await bare.register("bare@univ.edu", "undeclared1", {});
    await moderator.modSignup(a.account_id, "approve");
    await bare.login("bare@univ.edu");

    manSession = new ApiClient(server.baseUrl);
    const b = await manSession.register("declared@univ.edu", "declared1",
                                        { gender: "man" });
    await moderator.modSignup(b.account_id, "approve");
    await manSession.login("declared@univ.edu");

    vocab = await bare.vocab();
  });

  afterAll(() => server?.stop());

  it("controls for unheld identities are disabled and inert", () => {
    const builder = createBuilder({}, vocab);
    expect(builder.gender.every((o) => !o.enabled)).toBe(true);
    expect(builder.races.every((o) => !o.enabled)).toBe(true);
    expect(builder.international.enabled).toBe(false);
    expect(toggleOption(builder.gender, "woman")).toBe(false);
    expect(toggleOption(builder.races, "asian")).toBe(false);
    expect(emitBoundary(builder)).toEqual({});
  });

  it("a held identity enables exactly its own value", () => {
    const builder = createBuilder({ gender: "man" }, vocab);
    const enabled = builder.gender.filter((o) => o.enabled).map((o) => o.value);
    expect(enabled).toEqual(["man"]);
    expect(toggleOption(builder.gender, "woman")).toBe(false);
  });

  const expect422 = async (run: () => Promise<unknown>) => {
    try {
      await run();
    } catch (error) {
      expect(error).toBeInstanceOf(RequestFailed);
      const detail = (error as RequestFailed).detail;
      expect(detail.status).toBe(422);
      expect(detail.error).toBe("identity_not_held");
      return;
    }
    throw new Error("expected a 422 rejection");
  };

  it("forged submissions are rejected by the server with 422", async () => {
    await expect422(() => bare.createPost("undeclared1", "forged",
                                          { gender_allowed: ["woman"] }));
    await expect422(() => bare.createPost("undeclared1", "forged",
                                          { races_allowed: ["asian"] }));
    await expect422(() => bare.createPost("undeclared1", "forged",
                                          { require_international: true }));
    // holding one value does not unlock the others
    await expect422(() => manSession.createPost("declared1", "forged",
                                                { gender_allowed: ["woman"] }));
  });

  it("a forged default boundary is rejected the same way", async () => {
    await expect422(() => bare.patchAccount(
      { default_boundary: { gender_allowed: ["woman"] } }));
  });

  it("the honest path works end to end", async () => {
    const builder = createBuilder({ gender: "man" }, vocab);
    expect(toggleOption(builder.gender, "man")).toBe(true);
    const node = await manSession.createPost(
      "declared1", "for people who share this", emitBoundary(builder));
    expect(node.node_id).toMatch(/^node_/);
  });
});
