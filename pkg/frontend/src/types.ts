export type SessionKind = "DMOS" | "SpeakerSimilarity" | "NativityPreference";

/** What the client keeps from session metadata. Stimulus roles stay in
 *  the API layer and never reach the state or the DOM. */
export interface SessionMeta {
  id: string;
  kind: SessionKind;
  stimulusCount: number;
  listenerCount: number;
}

export interface PresentedStimulus {
  stimulusId: string;
  audioUrl: string;
  /** Present only for preference sessions: the two forced choices. */
  optionLabels?: [string, string];
}

export type NextStep = { done: true } | ({ done: false } & PresentedStimulus);

export interface RatingSubmission {
  sessionId: string;
  listenerId: string;
  stimulusId: string;
  value: number | string;
}

export interface Progress {
  completed: number;
  total: number;
}

export type Phase =
  | "idle"
  | "loading"
  | "rating"
  | "submitting"
  | "retry"
  | "done"
  | "failed";

export interface ClientSessionState {
  sessionId: string;
  listenerId: string;
  kind: SessionKind | null;
  phase: Phase;
  current: PresentedStimulus | null;
  /** True once the current stimulus has been played at least once. */
  playbackStarted: boolean;
  /** A rating that was chosen but not yet confirmed by the server. */
  pendingValue: number | string | null;
  progress: Progress;
  lastError: string | null;
}
