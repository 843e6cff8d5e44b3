import { spawn, type ChildProcess } from "node:child_process";

export interface RunningServer {
  baseUrl: string;
  stop(): void;
}

/** Boots the evaluation service CLI on its own store and waits until
 *  it answers HTTP. */
export async function startServer(
  storeRoot: string,
  port: number,
): Promise<RunningServer> {
  const child: ChildProcess = spawn(
    "indicvox",
    ["serve", "--root", storeRoot, "--port", String(port)],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  let stderr = "";
  child.stderr?.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });

  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 20_000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early: ${stderr}`);
    }
    try {
      const response = await fetch(`${baseUrl}/sessions/warmup-probe`);
      if (response.status === 404) {
        break;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill("SIGKILL");
      throw new Error(`service did not come up: ${stderr}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }

  return {
    baseUrl,
    stop(): void {
      child.kill("SIGTERM");
    },
  };
}
