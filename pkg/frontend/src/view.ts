// DOM rendering and event wiring. The view is a dumb projection of
// ConsoleModel.state; it never talks to the API directly.

import { ConsoleModel } from "./model.js";
import { SCENARIO_PRESETS } from "./presets.js";
import { colors, occupants } from "./literals.js";

const BLOCK_COLORS: Record<string, string> = {
  red: "#d9534f",
  blue: "#4a78c6",
  green: "#4f9d69",
  yellow: "#d8b44a",
  white: "#e8e8e8",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class ConsoleView {
  private dragged: { object: string; from: string } | null = null;

  constructor(
    private readonly model: ConsoleModel,
    private readonly root: HTMLElement,
  ) {
    model.onChange(() => this.render());
  }

  render(): void {
    this.root.innerHTML = "";
    this.root.append(
      this.renderHeader(),
      this.renderNotice(),
      this.renderTabletop(),
      this.renderOperatorPanel(),
      this.renderPalette(),
      this.renderGoalBuilder(),
      this.renderTimeline(),
      this.renderFailureBanner(),
    );
  }

  private renderHeader(): HTMLElement {
    const header = el("header", "console-header");
    const session = this.model.state.session;
    header.append(
      el("h1", undefined, "teachplan console"),
      el("span", "phase-badge", session ? `${session.id} · ${session.phase}` : "no session"),
    );
    const picker = el("select", "world-picker") as HTMLSelectElement;
    picker.append(new Option("load scenario world…", "", true, true));
    for (const preset of SCENARIO_PRESETS) {
      picker.append(new Option(preset.title, String(preset.id)));
    }
    picker.addEventListener("change", () => {
      const preset = SCENARIO_PRESETS.find((p) => String(p.id) === picker.value);
      if (!preset) return;
      if (this.model.state.session) void this.model.configureWorld(preset.world);
      else void this.model.createSession(preset.world, "minimal");
    });
    header.append(picker);
    return header;
  }

  private renderNotice(): HTMLElement {
    const notice = this.model.state.notice;
    const box = el("div", "notice" + (notice ? ` notice-${notice.kind}` : " hidden"));
    if (notice) box.textContent = notice.text;
    return box;
  }

  private renderTabletop(): HTMLElement {
    const section = el("section", "tabletop");
    section.append(el("h2", undefined, "tabletop"));
    const row = el("div", "position-row");
    const session = this.model.state.session;
    if (!session) {
      row.append(el("p", "hint", "pick a scenario world to begin"));
      section.append(row);
      return section;
    }
    const atoms = this.model.visibleAtoms();
    const occupantByPos = occupants(atoms);
    const colorByObj = colors(session.state);
    for (const position of session.config.positions) {
      const cell = el("div", "position-cell");
      cell.dataset.position = position;
      cell.append(el("div", "position-label", position));
      const occupant = occupantByPos.get(position);
      if (occupant) {
        const block = el("div", "block", occupant);
        block.draggable = true;
        block.style.background = BLOCK_COLORS[colorByObj.get(occupant) ?? ""] ?? "#888";
        block.addEventListener("dragstart", () => {
          this.dragged = { object: occupant, from: position };
        });
        cell.append(block);
      }
      cell.addEventListener("dragover", (event) => event.preventDefault());
      cell.addEventListener("drop", (event) => {
        event.preventDefault();
        if (!this.dragged) return;
        const { object, from } = this.dragged;
        this.dragged = null;
        void this.model.demonstrateByDrag(object, from, position);
      });
      row.append(cell);
    }
    section.append(row, el("p", "hint", "drag a block to demonstrate moveObject"));
    return section;
  }

  private renderOperatorPanel(): HTMLElement {
    const section = el("section", "operator-panel");
    section.append(el("h2", undefined, "operator"));
    const operator = this.model.state.operator;
    if (!operator) {
      section.append(el("p", "hint", "no operator yet — demonstrate an action"));
      return section;
    }
    const params = operator.parameters.map((p) => `${p.name} - ${p.type}`).join(" ");
    section.append(el("div", "operator-signature", `${operator.name} (${params})`));
    section.append(this.chipRow("preconditions", operator.preconditions, "precondition"));
    section.append(this.chipRow("effects", operator.effects, "effect"));
    return section;
  }

  private chipRow(
    label: string,
    literals: string[],
    target: "precondition" | "effect",
  ): HTMLElement {
    const wrap = el("div", "chip-row");
    wrap.append(el("span", "chip-row-label", label));
    for (const literal of literals) {
      const chip = el("span", "chip" + (literal.startsWith("not ") ? " chip-negative" : ""));
      chip.append(el("span", "chip-text", literal));
      const remove = el("button", "chip-remove", "×") as HTMLButtonElement;
      remove.title = "remove (constants generalize)";
      remove.addEventListener("click", () => void this.model.removeChip(target, literal));
      chip.append(remove);
      wrap.append(chip);
    }
    return wrap;
  }

  private renderPalette(): HTMLElement {
    const section = el("section", "palette");
    section.append(el("h2", undefined, "condition palette"));
    const { vocabulary, operator } = this.model.state;
    if (!operator || vocabulary.length === 0) {
      section.append(el("p", "hint", "the vocabulary appears once an operator exists"));
      return section;
    }
    const list = el("div", "palette-list");
    for (const literal of vocabulary) {
      const item = el("span", "chip chip-palette");
      item.append(el("span", "chip-text", literal));
      const addPre = el("button", "chip-add", "+pre") as HTMLButtonElement;
      addPre.addEventListener("click", () => void this.model.addChip("precondition", literal));
      const addEff = el("button", "chip-add", "+eff") as HTMLButtonElement;
      addEff.addEventListener("click", () => void this.model.addChip("effect", literal));
      item.append(addPre, addEff);
      list.append(item);
    }
    section.append(list);
    return section;
  }

  private renderGoalBuilder(): HTMLElement {
    const section = el("section", "goal-builder");
    section.append(el("h2", undefined, "goal"));
    if (!this.model.state.session) return section;
    const list = el("div", "palette-list");
    for (const candidate of this.model.goalCandidates()) {
      const selected = this.model.state.goalDraft.includes(candidate);
      const chip = el("button", "chip chip-goal" + (selected ? " chip-selected" : ""));
      chip.textContent = candidate;
      chip.addEventListener("click", () => this.model.toggleGoalChip(candidate));
      list.append(chip);
    }
    const run = el("button", "action-button", "plan") as HTMLButtonElement;
    run.addEventListener("click", () => void this.model.runGoal());
    section.append(list, run);

    const response = this.model.state.planResponse;
    if (response?.status === "no_plan") {
      section.append(
        el("p", "no-plan", `no plan: ${response.unsatisfied?.join(", ") ?? response.reason ?? ""}`),
      );
    } else if (response?.status === "plan" && response.steps?.length === 0) {
      section.append(el("p", "hint", "already achieved — empty plan"));
    }
    return section;
  }

  private renderTimeline(): HTMLElement {
    const section = el("section", "timeline");
    section.append(el("h2", undefined, "plan playback"));
    const session = this.model.state.session;
    const plan = session?.plan;
    if (!plan || plan.length === 0) {
      section.append(el("p", "hint", "no pending plan"));
      return section;
    }
    const list = el("ol", "timeline-steps");
    const trace = this.model.state.trace;
    plan.forEach((step, index) => {
      const item = el("li", "timeline-step", `${step.action}(${step.args.join(",")})`);
      if (trace) {
        const executed = trace.steps[index];
        if (executed && index <= this.model.state.playbackIndex) {
          item.classList.add(
            executed.outcome.status === "ok" ? "step-ok" : "step-failed",
          );
        }
      }
      list.append(item);
    });
    section.append(list);
    if (!trace) {
      const run = el("button", "action-button", "execute") as HTMLButtonElement;
      run.addEventListener("click", () => void this.model.executePlan());
      section.append(run);
    } else if (this.model.state.playbackIndex < trace.steps.length - 1) {
      const step = el("button", "action-button", "step ▸") as HTMLButtonElement;
      step.addEventListener("click", () => this.model.stepPlayback());
      const autoplay = el("button", "action-button", "autoplay ▸▸") as HTMLButtonElement;
      autoplay.addEventListener("click", () => {
        const timer = window.setInterval(() => {
          if (!this.model.stepPlayback()) window.clearInterval(timer);
        }, 600);
      });
      section.append(step, autoplay);
    } else {
      section.append(
        el("p", "hint", trace.succeeded ? "plan finished — goal reached" : "stopped at failure"),
      );
    }
    return section;
  }

  private renderFailureBanner(): HTMLElement {
    const diagnosis = this.model.state.diagnosis;
    const banner = el("section", "failure-banner" + (diagnosis ? "" : " hidden"));
    if (!diagnosis) return banner;
    const step = `${diagnosis.failing_step.action}(${diagnosis.failing_step.args.join(",")})`;
    banner.append(
      el("h2", undefined, "execution failed"),
      el(
        "p",
        undefined,
        `${step} — ${diagnosis.cause === "model_failure" ? "the model blocked it" : "the world rejected it"}`,
      ),
    );
    const row = el("div", "suggestion-row");
    for (const suggestion of diagnosis.suggestions) {
      const label =
        suggestion.kind === "generalize_constant"
          ? `generalize ${suggestion.constant}`
          : `${suggestion.kind.replace("_", " ")} ${suggestion.literal}`;
      const button = el("button", "suggestion-button", label) as HTMLButtonElement;
      button.addEventListener("click", () => void this.model.applySuggestion(suggestion));
      row.append(button);
    }
    banner.append(row);
    return banner;
  }
}
