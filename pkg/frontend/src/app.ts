import { AdjudicationView } from "./adjudicate.js";
import { ApiClient } from "./api.js";
import { DashboardView } from "./dashboard.js";
import { QueueView } from "./queue.js";

type Tab = "queue" | "decisions" | "dashboard";

/**
 * Wires the three views into the page shell. The principal is chosen
 * once at session start and sent on every mutating request; switching
 * tabs always refetches, so a hard refresh and a tab switch produce
 * the same view of the store.
 */
export function startApp(root: HTMLElement): void {
  root.innerHTML = `
    <form class="session">
      <label>server <input name="base" value="http://127.0.0.1:8321" /></label>
      <label>principal <input name="principal" value="ada;contributor"
        placeholder="id;role,role" /></label>
      <button type="submit">start session</button>
    </form>
    <div class="workspace" hidden>
      <nav class="tabs">
        <button data-tab="queue" class="active">queue</button>
        <button data-tab="decisions">decisions</button>
        <button data-tab="dashboard">dashboard</button>
      </nav>
      <main class="view"></main>
    </div>`;

  const form = root.querySelector<HTMLFormElement>(".session")!;
  const workspace = root.querySelector<HTMLElement>(".workspace")!;
  const main = root.querySelector<HTMLElement>(".view")!;

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const client = new ApiClient(
      String(data.get("base")),
      String(data.get("principal")),
    );
    form.hidden = true;
    workspace.hidden = false;

    const views: Record<Tab, { refresh(): Promise<void> }> = {
      queue: new QueueView(main, client),
      decisions: new AdjudicationView(main, client),
      dashboard: new DashboardView(main, client),
    };
    const show = (tab: Tab) => {
      for (const button of root.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
        button.classList.toggle("active", button.dataset["tab"] === tab);
      }
      void views[tab].refresh();
    };
    for (const button of root.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
      button.addEventListener("click", () => show(button.dataset["tab"] as Tab));
    }
    show("queue");
  });
}

// Auto-start when loaded in a real page (not under test).
const mount = document.getElementById("app");
if (mount) startApp(mount);
