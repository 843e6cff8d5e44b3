import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the session-flow suite boots a real evaluation server
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
