/** Scroll gating for the layered Martini Glass: layers advance strictly in
 * order (one step forward at a time), scrolling back is always allowed, and
 * only a decoded permalink may start deeper in the story. */

import { LAYERS, type Layer } from "./state.js";

export function layerIndex(layer: Layer): number {
  return LAYERS.indexOf(layer);
}

export function nextLayer(layer: Layer): Layer | null {
  const index = layerIndex(layer);
  return index + 1 < LAYERS.length ? LAYERS[index + 1]! : null;
}

export function previousLayer(layer: Layer): Layer | null {
  const index = layerIndex(layer);
  return index > 0 ? LAYERS[index - 1]! : null;
}

/** May the reader move from `current` to `target` by scrolling? */
export function canAdvance(current: Layer, target: Layer): boolean {
  return layerIndex(target) <= layerIndex(current) + 1;
}

/** The layer actually reached when `target` scrolls into view. */
export function clampTarget(current: Layer, target: Layer): Layer {
  if (canAdvance(current, target)) return target;
  return nextLayer(current) ?? current;
}

/** Layers visible (unlocked) for a reader whose furthest progress is
 * `reached`; sections beyond stay blurred until scrolled to in order. */
export function unlockedLayers(reached: Layer): Layer[] {
  return LAYERS.slice(0, layerIndex(reached) + 1);
}
