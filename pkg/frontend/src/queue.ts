import { ApiClient, ApiError } from "./api.js";
import { esc } from "./format.js";
import type { CheckReport, ModelSummary, WorkflowState } from "./types.js";

// Column order and labels for the validation queue.
const COLUMNS: { state: WorkflowState; label: string }[] = [
  { state: "draft", label: "ready to do" },
  { state: "in-review", label: "ready to review" },
  { state: "ready-to-publish", label: "ready to publish" },
  { state: "published", label: "published" },
];

const TARGETS: WorkflowState[] = [
  "draft",
  "in-review",
  "ready-to-publish",
  "published",
];

/**
 * Kanban board over the model registry. Columns always mirror the
 * server: every action refetches the list before re-rendering, and a
 * rejected action leaves the card exactly where the server says it is.
 */
export class QueueView {
  private readonly root: HTMLElement;
  private readonly client: ApiClient;
  // Transient per-card notices (server rejections rendered verbatim).
  private notices = new Map<string, string>();

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
  }

  async refresh(): Promise<void> {
    const models = await this.client.listModels();
    this.render(models);
  }

  private render(models: ModelSummary[]): void {
    const byState = new Map<WorkflowState, ModelSummary[]>();
    for (const column of COLUMNS) byState.set(column.state, []);
    for (const model of models) byState.get(model.state)?.push(model);

    this.root.innerHTML = `
      <div class="queue">
        ${COLUMNS.map(
          (column) => `
          <section class="column" data-state="${column.state}">
            <h2>${esc(column.label)} <span class="count">${
              byState.get(column.state)!.length
            }</span></h2>
            ${byState
              .get(column.state)!
              .map((model) => this.card(model))
              .join("")}
          </section>`,
        ).join("")}
      </div>`;

    for (const card of this.root.querySelectorAll<HTMLElement>(".card")) {
      const id = card.dataset["id"]!;
      card
        .querySelector<HTMLButtonElement>(".move")!
        .addEventListener("click", () => void this.move(card, id));
    }
  }

  private card(model: ModelSummary): string {
    const notice = this.notices.get(model.id) ?? "";
    const options = TARGETS.filter((t) => t !== model.state)
      .map((t) => `<option value="${t}">${t}</option>`)
      .join("");
    return `
      <article class="card" data-id="${esc(model.id)}">
        <header>
          <strong>${esc(model.name)}</strong>
          <span class="model-id">${esc(model.id)}</span>
        </header>
        <dl>
          <dt>version</dt><dd class="version">${model.version}</dd>
          <dt>contributor</dt><dd class="contributor">${esc(
            model.created_by,
          )}</dd>
          <dt>last rationale</dt><dd class="rationale">${
            model.last_rationale === null ? "<em>none</em>" : esc(model.last_rationale)
          }</dd>
        </dl>
        <div class="actions">
          <select class="target">${options}</select>
          <input class="move-rationale" placeholder="rationale" />
          <button class="move">move</button>
        </div>
        <div class="notice">${notice}</div>
      </article>`;
  }

  private async move(card: HTMLElement, id: string): Promise<void> {
    const target = card.querySelector<HTMLSelectElement>(".target")!
      .value as WorkflowState;
    const rationale =
      card.querySelector<HTMLInputElement>(".move-rationale")!.value;
    this.notices.delete(id);
    try {
      await this.client.transition(id, target, rationale);
    } catch (error) {
      if (error instanceof ApiError) {
        this.notices.set(id, await this.describeRejection(error, id, target));
      } else {
        throw error;
      }
    }
    // Success or failure, the server decides where the card sits.
    await this.refresh();
  }

  private async describeRejection(
    error: ApiError,
    id: string,
    target: WorkflowState,
  ): Promise<string> {
    const headline = `<p class="problem" data-code="${esc(
      error.problem.code,
    )}">${esc(error.problem.message)}</p>`;
    if (error.problem.code !== "consistency-blocked") return headline;
    // The block is explained by the consistency report; show it as a
    // checklist straight from the server.
    let report: CheckReport;
    try {
      report = await this.client.check(id, target);
    } catch {
      return headline;
    }
    const items = report.items
      .map(
        (item) => `
        <li class="check-item ${item.severity}">
          <code>${esc(item.locator)}</code> ${esc(item.kind)}: ${esc(
            item.detail,
          )}
        </li>`,
      )
      .join("");
    return `${headline}<ul class="checklist">${items}</ul>`;
  }
}
