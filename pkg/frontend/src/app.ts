// Browser bootstrap: a single-page shell over the models in this package.
// All state lives server-side; this file only wires DOM events to the API
// client and re-renders. Confidentiality is enforced by the server; the
// client never caches another session's data (state resets on login).

import { ApiClient, RequestFailed } from "./api";
import { BuilderState, TABS, chipText, emitBoundary, toggleOption } from "./boundary";
import { ComposerModel, postComposer, replyComposer, submit } from "./composer";
import { queueView } from "./mod";
import { ABOUT_OPERATOR, TRAIT_PRIVACY_NOTE, TUTORIAL } from "./settings";
import { escapeHtml, renderThreadHtml, threadTree } from "./thread";
import type { AccountView, NodePayload, Vocab } from "./types";

interface AppState {
  api: ApiClient;
  vocab: Vocab | null;
  account: AccountView | null;
  thread: NodePayload[] | null;
  composer: ComposerModel | null;
}

const state: AppState = {
  api: new ApiClient(""),
  vocab: null,
  account: null,
  thread: null,
  composer: null,
};

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function login(email: string): Promise<void> {
  await state.api.login(email);
  state.vocab = await state.api.vocab();
  state.account = await state.api.account();
  state.thread = null;
  state.composer = null;
  await renderFeed();
  el("session").textContent = `@${state.account.default_persona}`;
  el("tutorial").innerHTML =
    `<p>${escapeHtml(TRAIT_PRIVACY_NOTE)}</p>` +
    TUTORIAL.map((t) => `<p>${escapeHtml(t)}</p>`).join("") +
    `<p class="about">${escapeHtml(ABOUT_OPERATOR)}</p>`;
  if (state.account.moderator) void renderQueue();
}

async function renderFeed(): Promise<void> {
  const { posts } = await state.api.feed();
  el("feed").innerHTML = posts.map((post) => {
    const chip = post.boundary && state.vocab
      ? `<span class="chip">${escapeHtml(chipText(post.boundary, state.vocab))}</span>`
      : "";
    return `<article data-thread="${post.thread_id}">` +
      `<header>@${escapeHtml(post.persona)}${chip}</header>` +
      `<p>${escapeHtml(post.body)}</p></article>`;
  }).join("");
  for (const article of Array.from(el("feed").querySelectorAll("article"))) {
    article.addEventListener("click", () =>
      void openThread(article.getAttribute("data-thread")!));
  }
}

async function openThread(threadId: string): Promise<void> {
  const { nodes } = await state.api.thread(threadId);
  state.thread = nodes;
  if (!state.vocab || !state.account) return;
  el("thread").innerHTML = renderThreadHtml(threadTree(nodes, state.vocab));
  const last = nodes[nodes.length - 1];
  if (last) {
    state.composer = await replyComposer(
      state.api, state.account.traits, state.vocab,
      state.account.default_persona, last, nodes);
    renderComposer();
  }
}

function renderComposer(): void {
  const composer = state.composer;
  if (!composer) return;
  const persona = el("composer-persona") as HTMLInputElement;
  persona.value = composer.persona.value;
  persona.disabled = composer.persona.locked;
  renderBuilder(composer.builder);
  el("composer-error").textContent = composer.error ?? "";
}

type OptionGroup = [label: string, options: BuilderState["gender"]];

function groupsForTab(builder: BuilderState): OptionGroup[] {
  switch (builder.activeTab) {
    case "identity":
      return [["gender", builder.gender], ["race", builder.races]];
    case "experiences":
      return [["challenges", builder.challenges]];
    case "program":
      return [["programs", builder.programs],
              ["advised by", builder.advisedByAny],
              ["not advised by", builder.notAdvisedBy]];
    case "users":
      return [["usernames", builder.usernames]];
    case "other":
      return [];
  }
}

function renderBuilder(builder: BuilderState): void {
  el("builder-tabs").innerHTML = TABS.map((tab) =>
    `<button data-tab="${tab.id}" class="${tab.id === builder.activeTab ? "active" : ""}">` +
    `${escapeHtml(tab.label)}</button>`).join("");
  for (const button of Array.from(el("builder-tabs").querySelectorAll("button"))) {
    button.addEventListener("click", () => {
      builder.activeTab = button.getAttribute("data-tab") as BuilderState["activeTab"];
      renderBuilder(builder);
    });
  }
  const groups = groupsForTab(builder);
  el("builder-body").innerHTML = groups.map(([label, group]) =>
    `<fieldset><legend>${escapeHtml(label)}</legend>` +
    group.map((option) =>
      `<label class="${option.enabled ? "" : "disabled"}">` +
      `<input type="checkbox" data-group="${escapeHtml(label)}" ` +
      `value="${escapeHtml(option.value)}" ${option.selected ? "checked" : ""} ` +
      `${option.enabled ? "" : "disabled"}>` +
      `${escapeHtml(option.label)}</label>`).join("") +
    `</fieldset>`).join("");
  for (const input of Array.from(el("builder-body").querySelectorAll("input[type=checkbox]"))) {
    input.addEventListener("change", () => {
      const groupLabel = input.getAttribute("data-group");
      const group = groups.find(([label]) => label === groupLabel)?.[1];
      if (group) toggleOption(group, (input as HTMLInputElement).value);
    });
  }
}

async function renderQueue(): Promise<void> {
  if (!state.vocab) return;
  const queue = queueView(await state.api.modQueue(), state.vocab);
  el("mod-queue").innerHTML =
    queue.signups.map((s) =>
      `<div class="signup" data-account="${s.accountId}">` +
      `${escapeHtml(s.email)} as @${escapeHtml(s.persona)} (${escapeHtml(s.summary)})</div>`,
    ).join("") +
    queue.held.map((h) =>
      `<div class="held" data-node="${h.nodeId}">@${escapeHtml(h.persona)}: ` +
      `${escapeHtml(h.otherInfo)} [${escapeHtml(h.structuredChip)}]</div>`,
    ).join("");
}

export function boot(): void {
  el("login-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const email = (el("login-email") as HTMLInputElement).value;
    void login(email).catch((error) => {
      el("login-error").textContent = error instanceof RequestFailed
        ? error.detail.message : String(error);
    });
  });
  el("composer-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const composer = state.composer;
    if (!composer) return;
    const body = (el("composer-body") as HTMLTextAreaElement).value;
    void submit(state.api, composer, body).then((node) => {
      if (node) void openThread(node.thread_id);
      else renderComposer();  // surfaces the inline 422 message
    });
  });
  el("compose-post").addEventListener("click", () => {
    if (!state.account || !state.vocab) return;
    state.composer = postComposer(
      state.account.traits, state.vocab, state.account.default_persona,
      state.account.default_boundary ?? {});
    renderComposer();
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
