import { confidenceBucket, esc } from "./format.js";
import type { JustificationRecord } from "./types.js";

/**
 * Renders one justification record as a layered Toulmin layout:
 * grounds flow through the warrant into the claim, with backing under
 * the warrant and rebuttals/qualifiers as side annotations. Every
 * field of the record is shown; nothing is synthesized client-side.
 */
export function renderArgument(record: JustificationRecord): string {
  const grounds = record.grounds
    .map((groundId) => {
      const item = record.evidence.find((e) => e.id === groundId);
      if (!item) {
        return `<div class="node ground" data-ground="${esc(groundId)}">
          <code>${esc(groundId)}</code></div>`;
      }
      return `
        <div class="node ground" data-ground="${esc(groundId)}">
          <code>${esc(item.id)}</code> ${esc(item.statement)}
          <span class="badge confidence-${confidenceBucket(item.confidence)}"
                title="source ${esc(item.source.kind)}:${esc(item.source.ref)}">
            ${item.confidence}
          </span>
        </div>`;
    })
    .join("");

  const rebuttals = record.rebuttals
    .map(
      (rebuttal, index) => `
      <li class="rebuttal" data-attacks="${esc(rebuttal.attacks)}">
        <span class="attack-tag">attacks ${esc(rebuttal.attacks)}</span>
        ${esc(rebuttal.text)}
        ${
          record.accepted_rebuttals.includes(index)
            ? '<span class="badge accepted">accepted</span>'
            : ""
        }
      </li>`,
    )
    .join("");

  const qualifiers = record.qualifiers
    .map(
      (qualifier) => `
      <li class="qualifier" data-answers="${qualifier.answers.join(",")}">
        ${esc(qualifier.text)}
        <span class="answers">answers rebuttal ${qualifier.answers
          .map((n) => `#${n}`)
          .join(", ")}</span>
      </li>`,
    )
    .join("");

  const transcript = record.transcript
    .map(
      (exchange) => `
      <details class="exchange" data-part="${esc(exchange.part)}">
        <summary>${esc(exchange.part)}</summary>
        <pre class="prompt">${esc(exchange.prompt)}</pre>
        <pre class="response">${esc(exchange.response)}</pre>
      </details>`,
    )
    .join("");

  return `
    <article class="argument" data-record="${esc(record.id)}">
      <header>
        <h2>${esc(record.intent)}</h2>
        <span class="badge risk-${record.risk}">${record.risk} risk</span>
        <span class="badge status-${record.status}">${record.status}</span>
        <span class="record-id">${esc(record.id)}</span>
      </header>

      <div class="toulmin">
        <div class="layer grounds">
          <h3>grounds</h3>
          ${grounds}
        </div>
        <div class="layer warrant">
          <h3>warrant</h3>
          <div class="node warrant-edge">${esc(record.warrant)}</div>
          <div class="backing">
            <h4>backing</h4>
            <ul>${record.backing
              .map((b) => `<li class="backing-item">${esc(b)}</li>`)
              .join("")}</ul>
          </div>
        </div>
        <div class="layer claim">
          <h3>claim</h3>
          <div class="node claim-node">${esc(record.claim)}</div>
        </div>
      </div>

      <aside class="annotations">
        <section>
          <h3>rebuttals</h3>
          <ul>${rebuttals}</ul>
        </section>
        <section>
          <h3>qualifiers</h3>
          <ul>${qualifiers}</ul>
        </section>
      </aside>

      <dl class="record-meta">
        <dt>proposed steps</dt>
        <dd class="steps"><ol>${record.proposed_steps
          .map((s) => `<li>${esc(s)}</li>`)
          .join("")}</ol></dd>
        <dt>created by</dt><dd class="created-by">${esc(record.created_by)}</dd>
        <dt>created at</dt><dd class="created-at">${esc(record.created_at)}</dd>
        <dt>decided by</dt><dd class="decided-by">${
          record.decided_by === null ? "<em>undecided</em>" : esc(record.decided_by)
        }</dd>
        <dt>decision rationale</dt><dd class="decision-rationale">${
          record.decision_rationale === null
            ? "<em>none</em>"
            : esc(record.decision_rationale)
        }</dd>
      </dl>

      <section class="transcript">
        <h3>derivation transcript</h3>
        ${transcript}
      </section>
    </article>`;
}
