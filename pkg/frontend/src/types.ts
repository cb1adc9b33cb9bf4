// Wire types for the ontoloop HTTP API. These mirror the server JSON
// exactly; nothing here is derived or synthesized client-side.

export type WorkflowState =
  | "draft"
  | "in-review"
  | "ready-to-publish"
  | "published";

export interface ModelSummary {
  id: string;
  name: string;
  version: number;
  state: WorkflowState;
  content_hash: string;
  classes: number;
  relationships: number;
  created_by: string;
  last_rationale: string | null;
}

export interface AuditEvent {
  sequence: number;
  at: string;
  actor: string;
  action: string;
  subject: string;
  rationale: string;
}

export interface ModelDetail {
  id: string;
  version: number;
  state: WorkflowState;
  content_hash: string;
  content: unknown;
}

export interface TransitionResponse {
  event: AuditEvent;
  model: ModelDetail;
}

export interface CheckItem {
  kind: string;
  severity: "error" | "warning";
  locator: string;
  detail: string;
}

export interface CheckReport {
  ok: boolean;
  items: CheckItem[];
}

export interface ProblemDetail {
  code: string;
  message: string;
  path: string;
}

export interface SourceRef {
  kind: string;
  ref: string;
}

export interface EvidenceItem {
  id: string;
  statement: string;
  source: SourceRef;
  confidence: number;
}

export interface Rebuttal {
  text: string;
  attacks: string;
}

export interface Qualifier {
  text: string;
  answers: number[];
}

export interface PromptExchange {
  part: string;
  prompt: string;
  response: string;
}

export type JustificationStatus =
  | "proposed"
  | "approved"
  | "rejected"
  | "recorded";

export interface JustificationRecord {
  id: string;
  intent: string;
  claim: string;
  proposed_steps: string[];
  grounds: string[];
  evidence: EvidenceItem[];
  warrant: string;
  backing: string[];
  rebuttals: Rebuttal[];
  qualifiers: Qualifier[];
  risk: "low" | "high";
  created_by: string;
  created_at: string;
  status: JustificationStatus;
  transcript: PromptExchange[];
  decided_by: string | null;
  decision_rationale: string | null;
  accepted_rebuttals: number[];
}

export interface VerdictResponse {
  outcome: string;
  enactment_permitted: boolean;
  record: JustificationRecord;
}

export interface SignTestJson {
  improvements: number;
  declines: number;
  ties: number;
  n_effective: number;
  p_two_sided: number;
  ci: [number, number];
  degenerate: boolean;
}

export interface AnalysisJson {
  analysis: number;
  from_test: number;
  to_test: number;
  accuracy: SignTestJson;
  coherence: SignTestJson;
}

export interface ModelSeriesJson {
  model: string;
  points: [number, number][];
  change: number;
  overall: number;
}

export interface TableJson {
  metric: string;
  tests: number[];
  pooled: number[];
  change: number;
  models: ModelSeriesJson[];
}

export interface ReportJson {
  records: number;
  models: string[];
  tables: TableJson[];
  analyses: AnalysisJson[];
}

export interface EvaluateResponse {
  text: string;
  report: ReportJson;
}
