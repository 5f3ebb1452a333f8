// Typed client for the teachplan HTTP API. One method per endpoint; errors
// surface as ApiError with the server's machine-readable code.

export interface WorldConfigJson {
  positions: string[];
  objects: string[];
  initial_placement: Record<string, string>;
  static_facts: string[];
  static_predicates?: string[];
}

export interface SessionJson {
  id: string;
  phase: string;
  mode: string;
  config: WorldConfigJson;
  state: string[];
  goal: string[] | null;
  operators: string[];
  plan: PlanStepJson[] | null;
}

export interface PlanStepJson {
  action: string;
  args: string[];
}

export interface OperatorJson {
  name: string;
  parameters: { name: string; type: string }[];
  preconditions: string[];
  effects: string[];
  pddl: string;
}

export interface DemonstrationResponse {
  demonstration: { action: string; args: string[]; before: string[]; after: string[] };
  operator: OperatorJson;
  phase: string;
}

export interface RefinementJson {
  kind: string;
  literal?: string;
  constant?: string;
  variable?: string;
}

export interface OutcomeJson {
  status: "ok" | "model_failure" | "world_failure";
  literals?: string[];
  constraint?: string;
}

export interface TraceStepJson {
  action: string;
  args: string[];
  outcome: OutcomeJson;
  state: string[];
}

export interface TraceJson {
  succeeded: boolean;
  steps: TraceStepJson[];
  phase: string;
}

export interface PlanResponseJson {
  status: "plan" | "no_plan";
  steps?: PlanStepJson[];
  cost?: number;
  reason?: string;
  unsatisfied?: string[];
  phase: string;
}

export interface DiagnosisJson {
  failing_step: PlanStepJson;
  cause: "model_failure" | "world_failure";
  operator: string;
  suggestions: RefinementJson[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class TeachplanApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.headers.get("content-type")?.startsWith("text/plain")) {
      const text = await response.text();
      if (!response.ok) {
        throw new ApiError(response.status, "error", text);
      }
      return text as unknown as T;
    }
    const data = await response.json();
    if (!response.ok) {
      const error = (data as { error?: { code?: string; message?: string } }).error;
      throw new ApiError(
        response.status,
        error?.code ?? "error",
        error?.message ?? response.statusText,
      );
    }
    return data as T;
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("GET", "/sessions");
  }

  createSession(config: WorldConfigJson, mode = "minimal", id?: string): Promise<SessionJson> {
    return this.request("POST", "/sessions", { config, mode, id });
  }

  getState(sessionId: string): Promise<SessionJson> {
    return this.request("GET", `/sessions/${sessionId}/state`);
  }

  configureWorld(sessionId: string, config: WorldConfigJson): Promise<SessionJson> {
    return this.request("POST", `/sessions/${sessionId}/world`, config);
  }

  demonstrate(
    sessionId: string,
    action: string,
    args: string[],
    moves: string[][],
  ): Promise<DemonstrationResponse> {
    return this.request("POST", `/sessions/${sessionId}/demonstrations`, {
      action,
      args,
      moves,
    });
  }

  getOperator(sessionId: string, name: string): Promise<OperatorJson> {
    return this.request("GET", `/sessions/${sessionId}/operators/${name}`);
  }

  refineOperator(
    sessionId: string,
    name: string,
    refinement: RefinementJson,
  ): Promise<OperatorJson> {
    return this.request("PATCH", `/sessions/${sessionId}/operators/${name}`, refinement);
  }

  setGoal(sessionId: string, literals: string[]): Promise<{ goal: string[]; phase: string }> {
    return this.request("POST", `/sessions/${sessionId}/goal`, { literals });
  }

  requestPlan(sessionId: string, optimal = false): Promise<PlanResponseJson> {
    return this.request("POST", `/sessions/${sessionId}/plan`, { optimal });
  }

  proposePlan(sessionId: string, steps: PlanStepJson[]): Promise<PlanResponseJson> {
    return this.request("POST", `/sessions/${sessionId}/plan`, { steps });
  }

  execute(sessionId: string): Promise<TraceJson> {
    return this.request("POST", `/sessions/${sessionId}/execute`);
  }

  getDiagnosis(sessionId: string): Promise<DiagnosisJson> {
    return this.request("GET", `/sessions/${sessionId}/diagnosis`);
  }

  getVocabulary(sessionId?: string, operator?: string): Promise<{ templates: string[] }> {
    const params = new URLSearchParams();
    if (sessionId) params.set("session_id", sessionId);
    if (operator) params.set("operator", operator);
    const query = params.size ? `?${params.toString()}` : "";
    return this.request("GET", `/vocabulary${query}`);
  }

  exportPddl(sessionId: string): Promise<string> {
    return this.request("GET", `/sessions/${sessionId}/export.pddl`);
  }
}
