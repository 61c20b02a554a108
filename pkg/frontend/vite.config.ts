import { defineConfig } from "vite";

// The python service owns /session and /health; run it with
// `arbisim serve --port 8000` next to `npm run dev`.
export default defineConfig({
  server: {
    proxy: {
      "/session": { target: "ws://127.0.0.1:8000", ws: true },
      "/health": { target: "http://127.0.0.1:8000" },
    },
  },
});
