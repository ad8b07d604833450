// Thread view model: per-viewer tree, boundary chips, persona locking.
//
// A node renders a chip only when the server actually supplied boundary
// metadata; a hidden-boundary node carries no marker of any kind, so it is
// indistinguishable from a public one. The composer's username field locks
// to the persona first used in the thread.

import { chipText } from "./boundary";
import type { NodePayload, Vocab } from "./types";

export interface ThreadNodeView {
  nodeId: string;
  parentId: string | null;
  depth: number;
  persona: string;
  body: string;
  own: boolean;
  state: string;
  // null = render nothing boundary-related at all
  chip: string | null;
}

export function threadTree(nodes: NodePayload[], vocab: Vocab): ThreadNodeView[] {
  const depth = new Map<string, number>();
  const views: ThreadNodeView[] = [];
  for (const node of nodes) {
    const d = node.parent_id ? (depth.get(node.parent_id) ?? 0) + 1 : 0;
    depth.set(node.node_id, d);
    views.push({
      nodeId: node.node_id,
      parentId: node.parent_id,
      depth: d,
      persona: node.persona,
      body: node.body,
      own: node.own,
      state: node.state ?? "published",
      chip: node.boundary ? chipText(node.boundary, vocab) : null,
    });
  }
  return views;
}

export interface ComposerPersona {
  // the input is disabled once the account has already spoken in the thread
  locked: boolean;
  value: string;
}

/** Persona field state for replying in a thread: locked to the first-used
 * name when any visible node in the thread is the viewer's own. */
export function composerPersona(nodes: NodePayload[],
                                defaultPersona: string): ComposerPersona {
  const mine = nodes.find((n) => n.own);
  if (mine) return { locked: true, value: mine.persona };
  return { locked: false, value: defaultPersona };
}

export function renderThreadHtml(views: ThreadNodeView[]): string {
  return views.map((view) => {
    const classes = ["node"];
    if (view.state !== "published") classes.push(`node-${view.state}`);
    const chip = view.chip === null
      ? ""
      : `<span class="chip">${escapeHtml(view.chip)}</span>`;
    return (
      `<article class="${classes.join(" ")}" style="margin-left:${view.depth}rem" ` +
      `data-node="${view.nodeId}">` +
      `<header>@${escapeHtml(view.persona)}${chip}</header>` +
      `<p>${escapeHtml(view.body)}</p>` +
      `</article>`
    );
  }).join("\n");
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
