import { describe, expect, it } from "vitest";

import { LAYERS } from "../src/state.js";
import { canAdvance, clampTarget, layerIndex, nextLayer, unlockedLayers } from "../src/story.js";

describe("layer order", () => {
  it("matches the storyline: select, biological, emerging, emotions+body, map, compare", () => {
    expect([...LAYERS]).toEqual([
      "intro",
      "bio",
      "psycho_bubbles",
      "psycho_body",
      "social_map",
      "social_compare",
    ]);
  });

  it("walking nextLayer visits every layer in order", () => {
    const visited = ["intro" as (typeof LAYERS)[number]];
    for (;;) {
      const next = nextLayer(visited[visited.length - 1]!);
      if (next === null) break;
      visited.push(next);
    }
    expect(visited).toEqual([...LAYERS]);
  });
});

describe("scroll gating", () => {
  it("allows one step forward at a time", () => {
    expect(canAdvance("intro", "bio")).toBe(true);
    expect(canAdvance("bio", "psycho_bubbles")).toBe(true);
    expect(canAdvance("psycho_body", "social_map")).toBe(true);
  });

  it("never allows skipping ahead", () => {
    expect(canAdvance("intro", "psycho_bubbles")).toBe(false);
    expect(canAdvance("intro", "social_map")).toBe(false);
    expect(canAdvance("bio", "social_compare")).toBe(false);
    expect(clampTarget("intro", "social_map")).toBe("bio");
  });

  it("always allows scrolling back", () => {
    expect(canAdvance("social_compare", "intro")).toBe(true);
    expect(canAdvance("social_map", "bio")).toBe(true);
  });

  it("unlocks exactly the layers reached so far", () => {
    expect(unlockedLayers("intro")).toEqual(["intro"]);
    expect(unlockedLayers("psycho_bubbles")).toEqual(["intro", "bio", "psycho_bubbles"]);
    expect(unlockedLayers("social_compare")).toEqual([...LAYERS]);
  });

  it("indices are strictly increasing along the story", () => {
    for (let i = 1; i < LAYERS.length; i += 1) {
      expect(layerIndex(LAYERS[i]!)).toBe(layerIndex(LAYERS[i - 1]!) + 1);
    }
  });
});
