// The console's view model. It owns no domain logic: every piece of rendered
// state is a service response (or a trivial projection of one), and every
// user gesture maps to exactly one API call.

import {
  ApiError,
  DiagnosisJson,
  OperatorJson,
  PlanResponseJson,
  RefinementJson,
  SessionJson,
  TeachplanApi,
  TraceJson,
  WorldConfigJson,
} from "./api.js";
import { constantsOf } from "./literals.js";

export type ChipTarget = "precondition" | "effect";

export interface Notice {
  kind: "info" | "error";
  text: string;
}

export interface ConsoleState {
  session: SessionJson | null;
  operator: OperatorJson | null;
  vocabulary: string[];
  goalDraft: string[];
  planResponse: PlanResponseJson | null;
  trace: TraceJson | null;
  /** -1 = nothing played yet; otherwise index of the last shown trace step. */
  playbackIndex: number;
  diagnosis: DiagnosisJson | null;
  notice: Notice | null;
}

export class ConsoleModel {
  state: ConsoleState = {
    session: null,
    operator: null,
    vocabulary: [],
    goalDraft: [],
    planResponse: null,
    trace: null,
    playbackIndex: -1,
    diagnosis: null,
    notice: null,
  };

  private listeners: (() => void)[] = [];

  constructor(private readonly api: TeachplanApi) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  private notify(notice: Notice | null): void {
    this.state.notice = notice;
    this.emit();
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | null> {
    try {
      const result = await work();
      this.state.notice = null;
      this.emit();
      return result;
    } catch (error) {
      if (error instanceof ApiError) {
        this.notify({ kind: "error", text: `${error.code}: ${error.message}` });
        return null;
      }
      throw error;
    }
  }

  get sessionId(): string {
    const session = this.state.session;
    if (!session) throw new Error("no active session");
    return session.id;
  }

  /** The world state to draw: mid-playback it is the selected trace step's. */
  visibleAtoms(): string[] {
    const { trace, playbackIndex, session } = this.state;
    if (trace && playbackIndex >= 0 && playbackIndex < trace.steps.length) {
      return trace.steps[playbackIndex].state;
    }
    return session?.state ?? [];
  }

  async createSession(config: WorldConfigJson, mode = "minimal", id?: string): Promise<void> {
    await this.guarded(async () => {
      this.state.session = await this.api.createSession(config, mode, id);
      this.state.operator = null;
      this.state.trace = null;
      this.state.diagnosis = null;
      this.state.planResponse = null;
      this.state.goalDraft = [];
      this.state.playbackIndex = -1;
      await this.refreshVocabulary();
    });
  }

  async loadSession(id: string): Promise<void> {
    await this.guarded(async () => {
      this.state.session = await this.api.getState(id);
      const name = this.state.session.operators[0];
      this.state.operator = name ? await this.api.getOperator(id, name) : null;
      this.state.trace = null;
      this.state.diagnosis = null;
      this.state.planResponse = null;
      this.state.playbackIndex = -1;
      await this.refreshVocabulary();
    });
  }

  async configureWorld(config: WorldConfigJson): Promise<void> {
    await this.guarded(async () => {
      this.state.session = await this.api.configureWorld(this.sessionId, config);
      this.state.trace = null;
      this.state.diagnosis = null;
      this.state.planResponse = null;
      this.state.goalDraft = [];
      this.state.playbackIndex = -1;
      await this.refreshVocabulary();
    });
  }

  /** Drag a block from one position to another: one demonstration. A drag
   * back to its origin is a no-op demo; the server reports it as EmptyDelta. */
  async demonstrateByDrag(object: string, from: string, to: string): Promise<boolean> {
    const result = await this.guarded(async () => {
      const response = await this.api.demonstrate(
        this.sessionId,
        "moveObject",
        [object, from, to],
        from === to ? [] : [[object, from, to]],
      );
      this.state.operator = response.operator;
      this.state.session = await this.api.getState(this.sessionId);
      this.state.trace = null;
      this.state.playbackIndex = -1;
      await this.refreshVocabulary();
      return true;
    });
    return result === true;
  }

  /** Chip removal: constants generalize, pure-variable chips are removed. */
  async removeChip(target: ChipTarget, literal: string): Promise<void> {
    const constants = constantsOf(literal);
    const refinement: RefinementJson = constants.length
      ? { kind: "generalize_constant", constant: constants[0] }
      : {
          kind: target === "precondition" ? "remove_precondition" : "remove_effect",
          literal,
        };
    await this.applyRefinement(refinement);
  }

  /** Palette chip: add a vocabulary literal as precondition or effect. */
  async addChip(target: ChipTarget, literal: string): Promise<void> {
    await this.applyRefinement({
      kind: target === "precondition" ? "add_precondition" : "add_effect",
      literal,
    });
  }

  async applyRefinement(refinement: RefinementJson): Promise<void> {
    const operator = this.state.operator;
    if (!operator) {
      this.notify({ kind: "error", text: "no operator to edit yet — demonstrate first" });
      return;
    }
    await this.guarded(async () => {
      this.state.operator = await this.api.refineOperator(
        this.sessionId,
        operator.name,
        refinement,
      );
      this.state.session = await this.api.getState(this.sessionId);
      this.state.diagnosis = null;
      this.state.trace = null;
      this.state.playbackIndex = -1;
      await this.refreshVocabulary();
    });
  }

  toggleGoalChip(literal: string): void {
    const draft = this.state.goalDraft;
    const index = draft.indexOf(literal);
    if (index >= 0) draft.splice(index, 1);
    else draft.push(literal);
    this.emit();
  }

  /** Send the drafted goal and ask the planner for a plan. */
  async runGoal(optimal = false): Promise<PlanResponseJson | null> {
    return await this.guarded(async () => {
      await this.api.setGoal(this.sessionId, [...this.state.goalDraft]);
      const response = await this.api.requestPlan(this.sessionId, optimal);
      this.state.planResponse = response;
      this.state.session = await this.api.getState(this.sessionId);
      this.state.trace = null;
      this.state.playbackIndex = -1;
      return response;
    });
  }

  /** Ask the robot to apply specific steps without planning (failure drills). */
  async proposeAttempt(steps: { action: string; args: string[] }[]): Promise<void> {
    await this.guarded(async () => {
      this.state.planResponse = await this.api.proposePlan(this.sessionId, steps);
      this.state.session = await this.api.getState(this.sessionId);
      this.state.trace = null;
      this.state.playbackIndex = -1;
    });
  }

  /** Execute the pending plan; playback then steps through the returned trace. */
  async executePlan(): Promise<TraceJson | null> {
    return await this.guarded(async () => {
      const trace = await this.api.execute(this.sessionId);
      this.state.trace = trace;
      this.state.playbackIndex = -1;
      this.state.session = await this.api.getState(this.sessionId);
      if (!trace.succeeded) {
        this.state.diagnosis = await this.api.getDiagnosis(this.sessionId);
      } else {
        this.state.diagnosis = null;
      }
      return trace;
    });
  }

  /** Advance the plan playback by one already-executed step. */
  stepPlayback(): boolean {
    const trace = this.state.trace;
    if (!trace || this.state.playbackIndex >= trace.steps.length - 1) {
      return false;
    }
    this.state.playbackIndex += 1;
    this.emit();
    return true;
  }

  async applySuggestion(suggestion: RefinementJson): Promise<void> {
    await this.applyRefinement(suggestion);
  }

  async refreshVocabulary(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    const operator = this.state.operator?.name;
    const response = await this.api.getVocabulary(session.id, operator);
    this.state.vocabulary = response.templates;
  }

  /** Ground goal chip candidates from the declared world symbols. */
  goalCandidates(): string[] {
    const session = this.state.session;
    if (!session) return [];
    const out: string[] = [];
    for (const object of session.config.objects) {
      for (const position of session.config.positions) {
        out.push(`at(${object},${position})`);
      }
    }
    for (const position of session.config.positions) {
      out.push(`empty(${position})`);
    }
    return out;
  }
}
