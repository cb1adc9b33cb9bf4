import type {
  CheckReport,
  EvaluateResponse,
  JustificationRecord,
  JustificationStatus,
  ModelDetail,
  ModelSummary,
  ProblemDetail,
  TransitionResponse,
  VerdictResponse,
  WorkflowState,
} from "./types.js";

/** A server rejection, carrying the problem detail verbatim. */
export class ApiError extends Error {
  readonly status: number;
  readonly problem: ProblemDetail;

  constructor(status: number, problem: ProblemDetail) {
    super(problem.message);
    this.name = "ApiError";
    this.status = status;
    this.problem = problem;
  }
}

/**
 * Typed client for the ontoloop service. The server is the only source
 * of domain state; this class holds nothing but the base URL and the
 * principal asserted on mutating requests.
 */
export class ApiClient {
  readonly baseUrl: string;
  principal: string;

  constructor(baseUrl: string, principal: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.principal = principal;
  }

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (method !== "GET") headers["X-Principal"] = this.principal;
    const res = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      throw new ApiError(res.status, (await res.json()) as ProblemDetail);
    }
    return (await res.json()) as T;
  }

  async listModels(): Promise<ModelSummary[]> {
    const data = await this.request<{ models: ModelSummary[] }>(
      "GET",
      "/models",
    );
    return data.models;
  }

  getModel(id: string): Promise<ModelDetail> {
    return this.request("GET", `/models/${encodeURIComponent(id)}`);
  }

  transition(
    id: string,
    target: WorkflowState,
    rationale: string,
  ): Promise<TransitionResponse> {
    return this.request("POST", `/models/${encodeURIComponent(id)}/transition`, {
      target,
      rationale,
    });
  }

  check(id: string, target?: WorkflowState): Promise<CheckReport> {
    const query = target ? `?target=${encodeURIComponent(target)}` : "";
    return this.request("GET", `/models/${encodeURIComponent(id)}/check${query}`);
  }

  async listJustifications(
    status?: JustificationStatus,
  ): Promise<JustificationRecord[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    const data = await this.request<{ justifications: JustificationRecord[] }>(
      "GET",
      `/justifications${query}`,
    );
    return data.justifications;
  }

  getJustification(id: string): Promise<JustificationRecord> {
    return this.request("GET", `/justifications/${encodeURIComponent(id)}`);
  }

  verdict(
    id: string,
    decision: "approve" | "reject" | "record",
    rationale: string,
    acceptedRebuttals: number[] = [],
  ): Promise<VerdictResponse> {
    return this.request(
      "POST",
      `/justifications/${encodeURIComponent(id)}/verdict`,
      { decision, rationale, accepted_rebuttals: acceptedRebuttals },
    );
  }

  provenance(id: string): Promise<unknown> {
    return this.request(
      "GET",
      `/justifications/${encodeURIComponent(id)}/prov`,
    );
  }

  evaluate(): Promise<EvaluateResponse> {
    return this.request("POST", "/evaluate", {});
  }
}
