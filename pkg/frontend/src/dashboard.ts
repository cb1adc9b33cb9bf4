import { ApiClient } from "./api.js";
import { esc, mean1, pValue } from "./format.js";
import type { ReportJson, TableJson } from "./types.js";

const METRIC_TITLES: Record<string, string> = {
  accuracy: "Average accuracy rating per test",
  coherence: "Average coherence rating per test",
};

function barChart(table: TableJson): string {
  const groups = table.tests
    .map((test) => {
      const bars = table.models
        .map((series) => {
          const point = series.points.find(([t]) => t === test);
          if (!point) return "";
          const value = point[1];
          // data-value carries the API number verbatim; only the label
          // is display-formatted.
          return `
            <div class="bar" data-metric="${esc(table.metric)}"
                 data-test="${test}" data-model="${esc(series.model)}"
                 data-value="${value}"
                 style="height:${(value / 5) * 100}%">
              <span class="bar-label">${mean1(value)}</span>
            </div>`;
        })
        .join("");
      return `<div class="bar-group" data-test="${test}">
        ${bars}<span class="test-label">T${test}</span></div>`;
    })
    .join("");
  return `<div class="chart" data-metric="${esc(table.metric)}">${groups}</div>`;
}

function meansTable(table: TableJson): string {
  const header = table.tests.map((t) => `<th>Test ${t}</th>`).join("");
  const rows = table.models
    .map((series) => {
      const cells = table.tests
        .map((test) => {
          const point = series.points.find(([t]) => t === test);
          return `<td data-value="${point ? point[1] : ""}">${
            point ? mean1(point[1]) : ""
          }</td>`;
        })
        .join("");
      return `<tr data-model="${esc(series.model)}">
        <th scope="row">${esc(series.model)}</th>${cells}
        <td class="change" data-value="${series.change}">${
          series.change >= 0 ? "+" : ""
        }${mean1(series.change)}</td>
        <td class="overall" data-value="${series.overall}">${series.overall}</td>
      </tr>`;
    })
    .join("");
  return `
    <table class="means" data-metric="${esc(table.metric)}">
      <thead><tr><th>Model</th>${header}<th>Change</th><th>Overall</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

function analysesPanel(report: ReportJson): string {
  const rows = report.analyses
    .map((a) =>
      (["accuracy", "coherence"] as const)
        .map((metric) => {
          const r = a[metric];
          return `<tr data-analysis="${a.analysis}" data-metric="${metric}">
            <td>${a.analysis}</td>
            <td>${a.from_test} vs ${a.to_test}</td>
            <td>${metric}</td>
            <td>${r.improvements}/${r.n_effective}</td>
            <td data-p="${r.p_two_sided}">${pValue(r.p_two_sided)}</td>
            <td>[${r.ci[0].toFixed(3)}, ${r.ci[1].toFixed(3)}]</td>
          </tr>`;
        })
        .join(""),
    )
    .join("");
  return `
    <table class="analyses">
      <thead><tr><th>Analysis</th><th>Tests</th><th>Metric</th>
        <th>Improvements</th><th>p (two-sided)</th><th>95% CI</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

/** Renders the full evaluation report: charts, tables, sign tests. */
export function renderReport(report: ReportJson): string {
  const sections = report.tables
    .map(
      (table) => `
      <section class="metric-section" data-metric="${esc(table.metric)}">
        <h2>${esc(METRIC_TITLES[table.metric] ?? table.metric)}</h2>
        ${barChart(table)}
        ${meansTable(table)}
      </section>`,
    )
    .join("");
  return `
    <div class="dashboard" data-records="${report.records}">
      <p class="summary">${report.records} ratings, models: ${report.models
        .map((m) => esc(m))
        .join(", ")}</p>
      ${sections}
      <section class="sign-tests">
        <h2>Paired sign tests</h2>
        ${analysesPanel(report)}
      </section>
    </div>`;
}

/** Fetches the embedded report and renders it, or a placeholder. */
export class DashboardView {
  private readonly root: HTMLElement;
  private readonly client: ApiClient;

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
  }

  async refresh(): Promise<void> {
    try {
      const { report } = await this.client.evaluate();
      this.root.innerHTML = renderReport(report);
    } catch {
      this.root.innerHTML =
        '<p class="empty placeholder">no evaluation report available</p>';
    }
  }
}
