import { defineConfig } from "vitest/config";

// The live suite drives real fetches; giving the DOM the deployment's origin
// keeps them same-origin (the portal is served by the gateway in production).
const origin = process.env.FNUCIS_BASE_URL || "http://localhost";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: { url: origin },
    },
    include: ["test/**/*.test.ts"],
  },
});
