import { ApiError, isDuplicateRating, type ApiClient } from "./api.js";
import type { AudioPort } from "./audio.js";
import type {
  ClientSessionState,
  PresentedStimulus,
  SessionKind,
} from "./types.js";

export const SCALE_VALUES: readonly number[] = [1, 2, 3, 4, 5];

export const SCALE_ENDPOINTS: Record<
  Exclude<SessionKind, "NativityPreference">,
  { low: string; high: string }
> = {
  DMOS: { low: "1 = very unnatural", high: "5 = human-like quality" },
  SpeakerSimilarity: { low: "1 = different speaker", high: "5 = same speaker" },
};

export const PROMPTS: Record<SessionKind, string> = {
  DMOS: "How natural does this recording sound?",
  SpeakerSimilarity: "How similar is this voice to the reference speaker?",
  NativityPreference: "Which language does this speaker sound native in?",
};

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.message;
  }
  if (err instanceof Error) {
    return `network error: ${err.message}`;
  }
  return String(err);
}

/** Drives one listener through one session: fetch next, gate rating on
 *  playback, submit with confirmation, advance. Holds no state beyond
 *  the in-progress rating, so a reload resumes from the server. */
export class SessionController {
  private state: ClientSessionState;
  private readonly subscribers = new Set<(s: ClientSessionState) => void>();

  constructor(
    private readonly api: ApiClient,
    private readonly audio: AudioPort,
    sessionId: string,
    listenerId: string,
  ) {
    this.state = {
      sessionId,
      listenerId,
      kind: null,
      phase: "idle",
      current: null,
      playbackStarted: false,
      pendingValue: null,
      progress: { completed: 0, total: 0 },
      lastError: null,
    };
    this.audio.onStarted(() => {
      if (this.state.phase === "rating" && !this.state.playbackStarted) {
        this.update({ playbackStarted: true });
      }
    });
  }

  getState(): ClientSessionState {
    return this.state;
  }

  subscribe(listener: (s: ClientSessionState) => void): () => void {
    this.subscribers.add(listener);
    listener(this.state);
    return () => this.subscribers.delete(listener);
  }

  private update(patch: Partial<ClientSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.subscribers) {
      listener(this.state);
    }
  }

  async start(): Promise<void> {
    this.update({ phase: "loading", lastError: null });
    try {
      const meta = await this.api.session(this.state.sessionId);
      this.update({
        kind: meta.kind,
        progress: { completed: 0, total: meta.stimulusCount },
      });
      await this.advance();
    } catch (err) {
      this.update({ phase: "failed", lastError: describe(err) });
    }
  }

  private async advance(): Promise<void> {
    const step = await this.api.next(
      this.state.sessionId,
      this.state.listenerId,
    );
    if (step.done) {
      this.update({
        phase: "done",
        current: null,
        playbackStarted: false,
        pendingValue: null,
      });
      return;
    }
    const current: PresentedStimulus = step;
    this.audio.load(current.audioUrl);
    this.update({
      phase: "rating",
      current,
      playbackStarted: false,
      pendingValue: null,
    });
  }

  async play(): Promise<void> {
    if (!this.state.current) {
      return;
    }
    await this.audio.play();
  }

  canRate(): boolean {
    return this.state.phase === "rating" && this.state.playbackStarted;
  }

  /** The only values the widget offers: 1..5 for scale kinds, the two
   *  option labels for preference. */
  allowedValues(): ReadonlyArray<number | string> {
    if (this.state.kind === "NativityPreference") {
      return this.state.current?.optionLabels ?? [];
    }
    return SCALE_VALUES;
  }

  async rate(value: number | string): Promise<void> {
    if (!this.canRate()) {
      throw new Error("rating is locked until playback has started");
    }
    if (!this.allowedValues().includes(value)) {
      throw new Error(`value ${String(value)} is not offered by this test`);
    }
    this.update({ pendingValue: value });
    await this.submitPending();
  }

  async retry(): Promise<void> {
    if (this.state.phase !== "retry" || this.state.pendingValue === null) {
      return;
    }
    await this.submitPending();
  }

  private async submitPending(): Promise<void> {
    const { current, pendingValue } = this.state;
    if (!current || pendingValue === null) {
      return;
    }
    this.update({ phase: "submitting", lastError: null });
    try {
      await this.api.submitRating({
        sessionId: this.state.sessionId,
        listenerId: this.state.listenerId,
        stimulusId: current.stimulusId,
        value: pendingValue,
      });
    } catch (err) {
      if (!isDuplicateRating(err)) {
        // Keep the pending value so the listener can retry as-is.
        this.update({ phase: "retry", lastError: describe(err) });
        return;
      }
      // The server already holds a rating for this stimulus: treat the
      // step as completed and move on.
    }
    this.update({
      progress: {
        completed: this.state.progress.completed + 1,
        total: this.state.progress.total,
      },
      pendingValue: null,
    });
    try {
      await this.advance();
    } catch (err) {
      this.update({ phase: "failed", lastError: describe(err) });
    }
  }
}
