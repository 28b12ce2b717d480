import { defineConfig } from "vitest/config";

export default defineConfig({
  resolve: {
    // TS sources import siblings by their emitted .js names; map those
    // specifiers back onto the .ts files for the test runner.
    alias: [{ find: /^(\.{1,2}\/.*)\.js$/, replacement: "$1" }],
  },
  test: {
    environment: "happy-dom",
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
