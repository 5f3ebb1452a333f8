// The four teaching-protocol worlds, matching the server's scenario fixtures
// field for field so replayed logs line up with the headless runner.

import { WorldConfigJson } from "./api.js";

export interface ScenarioPreset {
  id: number;
  title: string;
  world: WorldConfigJson;
  attempt?: { action: string; args: string[] }[];
  goal?: string[];
}

export const SCENARIO_PRESETS: ScenarioPreset[] = [
  {
    id: 1,
    title: "1 — teach: red block D to A",
    world: {
      positions: ["A", "D"],
      objects: ["redObj"],
      initial_placement: { redObj: "D" },
      static_facts: ["color(redObj,red)"],
      static_predicates: ["color"],
    },
  },
  {
    id: 2,
    title: "2 — failure: blue block",
    world: {
      positions: ["A", "D"],
      objects: ["blueObj"],
      initial_placement: { blueObj: "D" },
      static_facts: ["color(blueObj,blue)"],
      static_predicates: ["color"],
    },
    attempt: [{ action: "moveObject", args: ["blueObj", "D", "A"] }],
  },
  {
    id: 3,
    title: "3 — failure: occupied arrival",
    world: {
      positions: ["A", "D"],
      objects: ["blueObj", "redObj"],
      initial_placement: { blueObj: "A", redObj: "D" },
      static_facts: ["color(blueObj,blue)", "color(redObj,red)"],
      static_predicates: ["color"],
    },
    attempt: [{ action: "moveObject", args: ["redObj", "D", "A"] }],
  },
  {
    id: 4,
    title: "4 — goal: swap blocks via M",
    world: {
      positions: ["A", "D", "M"],
      objects: ["blueObj", "redObj"],
      initial_placement: { blueObj: "A", redObj: "D" },
      static_facts: ["color(blueObj,blue)", "color(redObj,red)"],
      static_predicates: ["color"],
    },
    goal: ["at(blueObj,D)", "at(redObj,A)"],
  },
];
