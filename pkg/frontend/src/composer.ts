// Post/comment composer: builder prefill, submission, inline error surfacing.

import { ApiClient, RequestFailed } from "./api";
import { BuilderState, createBuilder, emitBoundary } from "./boundary";
import { composerPersona } from "./thread";
import type { NodePayload, TraitsDoc, Vocab } from "./types";

export interface ComposerModel {
  builder: BuilderState;
  persona: { locked: boolean; value: string };
  parentId: string | null;
  error: string | null;
}

/** A fresh post composer, prefilled from the account default boundary. */
export function postComposer(traits: TraitsDoc, vocab: Vocab,
                             defaultPersona: string,
                             defaultBoundary = {}): ComposerModel {
  return {
    builder: createBuilder(traits, vocab, defaultBoundary),
    persona: { locked: false, value: defaultPersona },
    parentId: null,
    error: null,
  };
}

/** A reply composer for a thread: boundary prefilled from the server's
 * last-used lookup, persona locked to the name already used here. */
export async function replyComposer(api: ApiClient, traits: TraitsDoc,
                                    vocab: Vocab, defaultPersona: string,
                                    parent: NodePayload,
                                    threadNodes: NodePayload[]): Promise<ComposerModel> {
  const { boundary } = await api.lastUsedBoundary(parent.node_id);
  const personas = [...new Set(threadNodes.map((n) => n.persona))];
  return {
    builder: createBuilder(traits, vocab, boundary, personas, true),
    persona: composerPersona(threadNodes, defaultPersona),
    parentId: parent.node_id,
    error: null,
  };
}

/** Submit; server-side validation errors (422 and friends) surface inline
 * on the model rather than throwing at the page. */
export async function submit(api: ApiClient, model: ComposerModel,
                             body: string): Promise<NodePayload | null> {
  const boundary = emitBoundary(model.builder);
  try {
    if (model.parentId === null) {
      return await api.createPost(model.persona.value, body, boundary);
    }
    return await api.createComment(
      model.parentId, model.persona.locked ? null : model.persona.value,
      body, boundary);
  } catch (error) {
    if (error instanceof RequestFailed) {
      model.error = `${error.detail.error}: ${error.detail.message}`;
      return null;
    }
    throw error;
  }
}
