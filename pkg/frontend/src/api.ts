// Thin fetch client. Every confidentiality rule is enforced server-side;
// this layer only ferries canonical documents back and forth, unchanged.

import type {
  AccountView,
  ApiError,
  BoundaryDoc,
  ModQueue,
  NodePayload,
  TraitsDoc,
  Vocab,
} from "./types";

export class RequestFailed extends Error {
  constructor(public detail: ApiError) {
    super(`${detail.status}: ${detail.error}: ${detail.message}`);
  }
}

type Fetch = typeof fetch;

export class ApiClient {
  private token: string | null = null;

  constructor(private baseUrl: string, private fetchImpl: Fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new RequestFailed({
        status: response.status,
        error: payload.error ?? "error",
        message: payload.message ?? "",
      });
    }
    return payload as T;
  }

  // -- sessions and account --

  async register(email: string, persona: string, traits: TraitsDoc) {
    return this.request<{ account_id: string; status: string }>(
      "POST", "/register", { email, persona, traits });
  }

  async login(email: string): Promise<string> {
    const data = await this.request<{ token: string; account_id: string }>(
      "POST", "/session", { email });
    this.token = data.token;
    return data.account_id;
  }

  account() {
    return this.request<AccountView>("GET", "/account");
  }

  patchAccount(patch: {
    traits?: Partial<TraitsDoc> & Record<string, unknown>;
    default_boundary?: BoundaryDoc | null;
    default_persona?: string;
    email?: string;
  }) {
    return this.request<AccountView>("PATCH", "/account", patch);
  }

  claimPersona(name: string) {
    return this.request<{ name: string }>("POST", "/personas", { name });
  }

  vocab() {
    return this.request<Vocab>("GET", "/vocab");
  }

  // -- content --

  feed() {
    return this.request<{ posts: NodePayload[] }>("GET", "/feed");
  }

  thread(threadId: string) {
    return this.request<{ thread_id: string; nodes: NodePayload[] }>(
      "GET", `/threads/${threadId}`);
  }

  createPost(persona: string, body: string, boundary: BoundaryDoc) {
    return this.request<NodePayload>("POST", "/posts", { persona, body, boundary });
  }

  createComment(parentId: string, persona: string | null, body: string,
                boundary: BoundaryDoc) {
    return this.request<NodePayload>(
      "POST", `/posts/${parentId}/comments`,
      persona ? { persona, body, boundary } : { body, boundary });
  }

  restrict(nodeId: string, boundary: BoundaryDoc) {
    return this.request<NodePayload>(
      "PATCH", `/nodes/${nodeId}/boundary`, { boundary });
  }

  toggleBoundaryVisibility(nodeId: string, show: boolean) {
    return this.request<NodePayload>(
      "PATCH", `/nodes/${nodeId}/boundary-visibility`, { show });
  }

  deleteNode(nodeId: string) {
    return this.request<void>("DELETE", `/nodes/${nodeId}`);
  }

  lastUsedBoundary(nodeId: string) {
    return this.request<{ boundary: BoundaryDoc }>(
      "GET", `/nodes/${nodeId}/last-used-boundary`);
  }

  // -- moderator --

  modQueue() {
    return this.request<ModQueue>("GET", "/mod/queue");
  }

  modSignup(accountId: string, decision: "approve" | "reject") {
    return this.request<{ account_id: string; status: string }>(
      "POST", `/mod/signups/${accountId}`, { decision });
  }

  modResolve(nodeId: string, recipients: string[]) {
    return this.request<NodePayload>(
      "POST", `/mod/nodes/${nodeId}/resolve`, { recipients });
  }

  modRemove(nodeId: string, reason: string) {
    return this.request<void>("DELETE", `/mod/nodes/${nodeId}`, { reason });
  }
}
