import {
  PROMPTS,
  SCALE_ENDPOINTS,
  SCALE_VALUES,
  type SessionController,
} from "./controller.js";
import type { ClientSessionState } from "./types.js";

const TITLES = {
  DMOS: "Audio quality",
  SpeakerSimilarity: "Voice similarity",
  NativityPreference: "Voice nativity",
} as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  testId: string | null,
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (testId !== null) {
    node.dataset.testid = testId;
  }
  if (text !== "") {
    node.textContent = text;
  }
  return node;
}

function swallow(promise: Promise<void>): void {
  // Failures land in controller state; the view only re-renders.
  void promise.catch(() => undefined);
}

function renderRatingControls(
  root: HTMLElement,
  controller: SessionController,
  state: ClientSessionState,
): void {
  const enabled = controller.canRate();
  const controls = el("div", "rating-controls");

  if (state.kind === "NativityPreference") {
    const labels = state.current?.optionLabels ?? [];
    labels.forEach((label, index) => {
      const button = el("button", `choice-${index}`, String(label));
      button.disabled = !enabled;
      button.addEventListener("click", () => swallow(controller.rate(label)));
      controls.appendChild(button);
    });
  } else {
    for (const value of SCALE_VALUES) {
      const button = el("button", `rate-${value}`, String(value));
      button.disabled = !enabled;
      button.addEventListener("click", () => swallow(controller.rate(value)));
      controls.appendChild(button);
    }
    if (state.kind !== null) {
      const endpoints = SCALE_ENDPOINTS[state.kind];
      controls.appendChild(
        el("p", "scale-endpoints", `${endpoints.low} ... ${endpoints.high}`),
      );
    }
  }
  if (!enabled) {
    controls.appendChild(
      el("p", "locked-hint", "Play the recording to unlock rating."),
    );
  }
  root.appendChild(controls);
}

function render(
  root: HTMLElement,
  controller: SessionController,
  state: ClientSessionState,
): void {
  root.textContent = "";

  if (state.phase === "idle" || state.phase === "loading") {
    root.appendChild(el("p", "status", "Loading session..."));
    return;
  }
  if (state.phase === "failed") {
    root.appendChild(el("p", "status", "Something went wrong."));
    root.appendChild(el("p", "error", state.lastError ?? ""));
    return;
  }
  if (state.phase === "done") {
    root.appendChild(
      el("p", "status", "All recordings rated. Thank you for listening!"),
    );
    return;
  }

  if (state.kind !== null) {
    root.appendChild(el("h1", "title", TITLES[state.kind]));
    root.appendChild(el("p", "prompt", PROMPTS[state.kind]));
  }
  root.appendChild(
    el(
      "p",
      "progress",
      `${state.progress.completed} of ${state.progress.total} rated`,
    ),
  );

  const play = el(
    "button",
    "play",
    state.playbackStarted ? "Play again" : "Play",
  );
  play.disabled = state.phase !== "rating";
  play.addEventListener("click", () => swallow(controller.play()));
  root.appendChild(play);

  if (state.phase === "retry") {
    const banner = el("div", "retry-banner");
    banner.appendChild(
      el("p", null, "Could not submit your rating. It has not been lost."),
    );
    const retry = el("button", "retry", "Retry");
    retry.addEventListener("click", () => swallow(controller.retry()));
    banner.appendChild(retry);
    root.appendChild(banner);
    return;
  }

  renderRatingControls(root, controller, state);
  if (state.phase === "submitting") {
    root.appendChild(el("p", "submitting-hint", "Submitting..."));
  }
}

/** Mounts the session UI under `root`; returns an unmount function. */
export function mountSessionView(
  root: HTMLElement,
  controller: SessionController,
): () => void {
  const unsubscribe = controller.subscribe((state) =>
    render(root, controller, state),
  );
  return () => {
    unsubscribe();
    root.textContent = "";
  };
}
