import type {
  NextStep,
  RatingSubmission,
  SessionKind,
  SessionMeta,
} from "./types.js";

/** A non-2xx response from the evaluation service. `code` is the
 *  service's error name, e.g. "DuplicateRating" or "UnknownSession". */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    detail: string,
    readonly status: number,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export function isDuplicateRating(err: unknown): boolean {
  return err instanceof ApiError && err.code === "DuplicateRating";
}

/** The slice of the service the client needs; tests substitute fakes. */
export interface ApiClient {
  session(id: string): Promise<SessionMeta>;
  next(sessionId: string, listenerId: string): Promise<NextStep>;
  submitRating(rating: RatingSubmission): Promise<void>;
}

interface SessionRecord {
  id: string;
  kind: SessionKind;
  stimuli: unknown[];
  listenerCount: number;
}

interface NextRecord {
  done: boolean;
  stimulusId?: string;
  audioUrl?: string;
  optionLabels?: string[];
}

export class EvalApi implements ApiClient {
  private readonly base: string;
  private readonly fetchImpl: typeof fetch;

  constructor(baseUrl: string, fetchImpl: typeof fetch = fetch) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl;
  }

  audioUrl(path: string): string {
    return /^https?:\/\//.test(path) ? path : this.base + path;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(this.base + path, init);
    const body: unknown = await response.json().catch(() => null);
    if (!response.ok) {
      const record = (body ?? {}) as { error?: string; detail?: string };
      throw new ApiError(
        record.error ?? "Unknown",
        record.detail ?? response.statusText,
        response.status,
      );
    }
    return body;
  }

  async session(id: string): Promise<SessionMeta> {
    const record = (await this.request(
      `/sessions/${encodeURIComponent(id)}`,
    )) as SessionRecord;
    // Only the count survives: stimulus roles must not leave this layer.
    return {
      id: record.id,
      kind: record.kind,
      stimulusCount: record.stimuli.length,
      listenerCount: record.listenerCount,
    };
  }

  async next(sessionId: string, listenerId: string): Promise<NextStep> {
    const record = (await this.request(
      `/sessions/${encodeURIComponent(sessionId)}/next` +
        `?listener=${encodeURIComponent(listenerId)}`,
    )) as NextRecord;
    if (record.done) {
      return { done: true };
    }
    const step: NextStep = {
      done: false,
      stimulusId: record.stimulusId ?? "",
      audioUrl: this.audioUrl(record.audioUrl ?? ""),
    };
    if (record.optionLabels && record.optionLabels.length === 2) {
      step.optionLabels = [record.optionLabels[0]!, record.optionLabels[1]!];
    }
    return step;
  }

  async submitRating(rating: RatingSubmission): Promise<void> {
    await this.request("/ratings", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(rating),
    });
  }
}
