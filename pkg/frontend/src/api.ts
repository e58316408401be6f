// Thin fetch wrapper for the session protocol.

import type {
  FeatureModelPayload,
  InputEvent,
  InputResponse,
  SessionCreated,
  ValidatePayload,
  ViewModel,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`HTTP ${status}`);
  }
}

export type FetchLike = typeof fetch;

export class ApiClient {
  constructor(private fetchImpl: FetchLike = fetch.bind(globalThis)) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(path, {
      method,
      headers: body !== undefined ? { 'Content-Type': 'application/json' } : {},
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await resp.json().catch(() => null);
    if (!resp.ok) throw new ApiError(resp.status, payload);
    return payload as T;
  }

  featureModel(): Promise<FeatureModelPayload> {
    return this.request('GET', '/api/featuremodel');
  }

  validate(select: string[]): Promise<ValidatePayload> {
    return this.request('POST', '/api/validate', { select });
  }

  createSession(select: string[]): Promise<SessionCreated> {
    return this.request('POST', '/api/sessions', { select });
  }

  sendInput(sessionId: string, event: InputEvent): Promise<InputResponse> {
    return this.request('POST', `/api/sessions/${sessionId}/input`, { event });
  }

  view(sessionId: string): Promise<{ view: ViewModel }> {
    return this.request('GET', `/api/sessions/${sessionId}/view`);
  }

  closeSession(sessionId: string): Promise<unknown> {
    return this.request('DELETE', `/api/sessions/${sessionId}`);
  }
}
