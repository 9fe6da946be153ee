import type {
  CleanRequest,
  CleanResultDoc,
  SessionMeta,
  UploadResponse,
  WindowPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin client over the cleaning service; fetch is injectable for tests. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const body = await resp.json();
        if (body && body.message) detail = `${body.message} (${body.code})`;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new Error(detail);
    }
    return (await resp.json()) as T;
  }

  upload(file: File | Blob, name = "data.csv"): Promise<UploadResponse> {
    const form = new FormData();
    form.append("file", file, name);
    return this.request<UploadResponse>("/sessions", {
      method: "POST",
      body: form,
    });
  }

  status(sessionId: string): Promise<SessionMeta> {
    return this.request<SessionMeta>(`/sessions/${sessionId}`);
  }

  startClean(sessionId: string, req: CleanRequest): Promise<{ status: string }> {
    return this.request(`/sessions/${sessionId}/clean`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  async reportText(sessionId: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/report`);
    if (!resp.ok) throw new Error(`report failed: ${resp.status}`);
    return resp.text();
  }

  result(sessionId: string): Promise<CleanResultDoc> {
    return this.request<CleanResultDoc>(
      `/sessions/${sessionId}/report?format=json`,
    );
  }

  windows(sessionId: string, interval: string): Promise<{ windows: WindowPayload[] }> {
    return this.request(
      `/sessions/${sessionId}/windows?interval=${encodeURIComponent(interval)}`,
    );
  }

  revert(sessionId: string, changeIds: number[]): Promise<CleanResultDoc> {
    return this.request(`/sessions/${sessionId}/revert`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ change_ids: changeIds }),
    });
  }

  exportUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${sessionId}/export`;
  }

  /**
   * Poll session status until it leaves the `cleaning` state.
   * Resolves with the final metadata; rejects if the clean failed.
   */
  pollUntilDone(
    sessionId: string,
    intervalMs = 500,
    shouldStop?: () => boolean,
  ): Promise<SessionMeta> {
    return new Promise((resolve, reject) => {
      const tick = async () => {
        if (shouldStop && shouldStop()) {
          reject(new Error("cancelled"));
          return;
        }
        try {
          const meta = await this.status(sessionId);
          if (meta.status === "done") {
            resolve(meta);
          } else if (meta.status === "failed") {
            reject(new Error(meta.error?.message ?? "cleaning failed"));
          } else {
            setTimeout(tick, intervalMs);
          }
        } catch (err) {
          reject(err instanceof Error ? err : new Error(String(err)));
        }
      };
      tick();
    });
  }
}
