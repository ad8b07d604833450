// Moderator console model: review queue rows and actions.

import { ApiClient } from "./api";
import { chipText } from "./boundary";
import type { ModQueue, Vocab } from "./types";

export interface QueueView {
  signups: Array<{ accountId: string; email: string; persona: string; summary: string }>;
  held: Array<{
    nodeId: string;
    persona: string;
    body: string;
    otherInfo: string;
    structuredChip: string;
    candidates: string[];
  }>;
  traitAudits: Array<{ at: string; accountId: string; line: string }>;
}

export function queueView(queue: ModQueue, vocab: Vocab): QueueView {
  return {
    signups: queue.signups.map((s) => ({
      accountId: s.account_id,
      email: s.email,
      persona: s.requested_persona,
      summary: Object.entries(s.traits)
        .map(([k, v]) => `${k}=${JSON.stringify(v)}`)
        .join(", ") || "nothing declared",
    })),
    held: queue.held.map((h) => ({
      nodeId: h.node_id,
      persona: h.persona,
      body: h.body,
      otherInfo: h.other_info,
      structuredChip: chipText(h.boundary, vocab),
      candidates: h.structural_audience,
    })),
    traitAudits: queue.trait_audits.map((a) => ({
      at: a.at,
      accountId: a.account_id,
      line: `${a.field}: ${JSON.stringify(a.old)} -> ${JSON.stringify(a.new)}`,
    })),
  };
}

export async function approve(api: ApiClient, accountId: string) {
  return api.modSignup(accountId, "approve");
}

export async function reject(api: ApiClient, accountId: string) {
  return api.modSignup(accountId, "reject");
}

export async function resolveHeld(api: ApiClient, nodeId: string,
                                  recipients: string[]) {
  return api.modResolve(nodeId, recipients);
}

export async function removeNode(api: ApiClient, nodeId: string, reason: string) {
  return api.modRemove(nodeId, reason);
}
