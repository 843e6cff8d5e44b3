import { EvalApi } from "./api.js";
import { HtmlAudioPlayer } from "./audio.js";
import { SessionController } from "./controller.js";
import { mountSessionView } from "./view.js";

/** Wires the page from ?session=, ?listener= and optional ?api=. */
export function bootstrap(root: HTMLElement): SessionController | null {
  const params = new URL(window.location.href).searchParams;
  const sessionId = params.get("session");
  const listenerId = params.get("listener");
  if (!sessionId || !listenerId) {
    root.textContent =
      "Missing query parameters: ?session=<id>&listener=<your id>";
    return null;
  }
  const base = params.get("api") ?? window.location.origin;
  const controller = new SessionController(
    new EvalApi(base),
    new HtmlAudioPlayer(),
    sessionId,
    listenerId,
  );
  mountSessionView(root, controller);
  void controller.start();
  return controller;
}

const root = document.getElementById("app");
if (root !== null) {
  bootstrap(root);
}
