import type { ProblemInfo, SessionState } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/**
 * Thin typed client for the negotiation service.  The fetch implementation
 * is injected so tests can drive a real server from Node.
 */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload?.error ?? response.statusText);
    }
    return payload as T;
  }

  problem(): Promise<ProblemInfo> {
    return this.request("GET", "/api/problem");
  }

  createSession(view: string, policy: string): Promise<{ session_id: string; status: string }> {
    return this.request("POST", "/api/sessions", { view, policy });
  }

  session(id: string): Promise<SessionState> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  run(id: string): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${id}/run`);
  }

  relax(id: string, index: number): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${id}/relax`, { index });
  }

  restore(id: string, code: string): Promise<SessionState> {
    return this.request("POST", `/api/sessions/${id}/restore`, { code });
  }
}
