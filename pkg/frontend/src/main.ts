/** DOM glue: mounts the app, delegates clicks, re-renders on state change. */

import { ArenaApp } from "./app.js";
import { HttpArenaApi } from "./api.js";

const root = document.getElementById("app");
if (!(root instanceof HTMLElement)) {
  throw new Error("missing #app container");
}
const app = new ArenaApp(new HttpArenaApi(""));

function paint(): void {
  root!.innerHTML = app.render();
}

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest("[data-action]");
  if (!(target instanceof HTMLElement)) return;
  const action = target.dataset.action;
  void (async () => {
    switch (action) {
      case "submit-prompt": {
        const box = document.getElementById("prompt-text") as HTMLTextAreaElement | null;
        const text = box?.value.trim() ?? "";
        if (!text) return;
        paint(); // busy state
        await app.submitPrompt(text);
        break;
      }
      case "vote":
        await app.vote(target.dataset.outcome as never);
        break;
      case "next":
        app.advance();
        break;
      case "leaderboard":
        await app.showLeaderboard();
        break;
      case "new-prompt":
        app.reset();
        break;
      default:
        return;
    }
    paint();
  })();
});

paint();
