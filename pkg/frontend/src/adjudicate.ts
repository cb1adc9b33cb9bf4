import { ApiClient, ApiError } from "./api.js";
import { renderArgument } from "./argument.js";
import { esc } from "./format.js";
import type { JustificationRecord } from "./types.js";

/**
 * Pending-decision triage: the list of proposed records on the left,
 * the selected record's full Toulmin argument plus verdict controls on
 * the right. Verdicts go to the server; the list is refetched after
 * every attempt so the panel never disagrees with the store.
 */
export class AdjudicationView {
  private readonly root: HTMLElement;
  private readonly client: ApiClient;
  private selectedId: string | null = null;
  private notice = "";

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
  }

  async refresh(): Promise<void> {
    const pending = await this.client.listJustifications("proposed");
    let selected: JustificationRecord | null = null;
    if (this.selectedId !== null) {
      try {
        selected = await this.client.getJustification(this.selectedId);
      } catch {
        this.selectedId = null;
      }
    }
    this.render(pending, selected);
  }

  private render(
    pending: JustificationRecord[],
    selected: JustificationRecord | null,
  ): void {
    const rows = pending
      .map(
        (record) => `
        <li>
          <button class="pick" data-id="${esc(record.id)}">
            ${esc(record.intent)}
            <span class="badge risk-${record.risk}">${record.risk}</span>
          </button>
        </li>`,
      )
      .join("");

    this.root.innerHTML = `
      <div class="adjudicate">
        <nav class="pending">
          <h2>pending decisions <span class="count">${pending.length}</span></h2>
          <ul>${rows || '<li class="empty">nothing pending</li>'}</ul>
        </nav>
        <div class="detail">
          ${this.notice ? `<div class="notice">${this.notice}</div>` : ""}
          ${selected ? this.detail(selected) : '<p class="empty">select a record</p>'}
        </div>
      </div>`;

    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".pick")) {
      button.addEventListener("click", () => {
        this.selectedId = button.dataset["id"]!;
        this.notice = "";
        void this.refresh();
      });
    }
    const approve = this.root.querySelector<HTMLButtonElement>(".approve");
    const reject = this.root.querySelector<HTMLButtonElement>(".reject");
    approve?.addEventListener("click", () => void this.decide("approve"));
    reject?.addEventListener("click", () => void this.decide("reject"));
    const prov = this.root.querySelector<HTMLButtonElement>(".show-prov");
    prov?.addEventListener("click", () => void this.showProvenance());
  }

  private detail(record: JustificationRecord): string {
    const argument = renderArgument(record);
    if (record.status !== "proposed") {
      return `${argument}
        <div class="verdict-done">
          <button class="show-prov">provenance</button>
          <pre class="prov-output"></pre>
        </div>`;
    }
    const accepts = record.rebuttals
      .map(
        (rebuttal, index) => `
        <label class="accept-rebuttal">
          <input type="checkbox" class="accept" value="${index}" />
          accept #${index}: ${esc(rebuttal.text)}
        </label>`,
      )
      .join("");
    return `${argument}
      <div class="verdict-controls">
        <input class="verdict-rationale" placeholder="verdict rationale" />
        ${accepts}
        <button class="approve">approve</button>
        <button class="reject">reject</button>
      </div>`;
  }

  private async decide(decision: "approve" | "reject"): Promise<void> {
    if (this.selectedId === null) return;
    const rationale =
      this.root.querySelector<HTMLInputElement>(".verdict-rationale")!.value;
    const accepted = Array.from(
      this.root.querySelectorAll<HTMLInputElement>(".accept:checked"),
      (box) => Number(box.value),
    );
    this.notice = "";
    try {
      const result = await this.client.verdict(
        this.selectedId,
        decision,
        rationale,
        accepted,
      );
      this.notice = `<p class="verdict-result" data-outcome="${esc(
        result.outcome,
      )}">verdict: ${esc(result.outcome)}, enactment ${
        result.enactment_permitted ? "permitted" : "not permitted"
      }</p>`;
    } catch (error) {
      if (error instanceof ApiError) {
        this.notice = `<p class="problem" data-code="${esc(
          error.problem.code,
        )}">${esc(error.problem.message)}</p>`;
      } else {
        throw error;
      }
    }
    await this.refresh();
  }

  private async showProvenance(): Promise<void> {
    if (this.selectedId === null) return;
    const data = await this.client.provenance(this.selectedId);
    const output = this.root.querySelector<HTMLPreElement>(".prov-output");
    if (output) output.textContent = JSON.stringify(data, null, 2);
  }
}
