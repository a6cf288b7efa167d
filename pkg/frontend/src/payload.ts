/** Lift display values out of raw API responses.
 *
 * The UI never recomputes a score: every number it shows is the exact
 * literal the API serialized, extracted from the response text next to the
 * parsed value it belongs to. Payloads are canonical JSON (sorted keys,
 * compact), which makes the slices below well-defined.
 */

import type { BubbleDatum } from "./charts/bubbles.js";
import type { BodyZoneDatum } from "./charts/body.js";
import type { RegionDisplay } from "./charts/choropleth.js";
import { literalsFor } from "./format.js";
import type {
  BodymapResponse,
  ComparePayload,
  EmotionsResponse,
  PrevalenceTable,
  ProfileEntry,
} from "./types.js";

/** Concept entries serialize as {"concept_id":...,...,"weight":w}; the
 * weight literal is read from that entry's own object slice. */
export function bubbleData(
  entries: ProfileEntry[],
  raw: string,
  label: "expected" | "emerging",
): BubbleDatum[] {
  return entries.map((entry) => {
    const slice = raw.slice(raw.indexOf(`"concept_id":"${entry.concept_id}"`));
    const texts = literalsFor(slice.slice(0, slice.indexOf("}")), "weight", [entry.weight]);
    return {
      conceptId: entry.concept_id,
      name: entry.name,
      weight: entry.weight,
      weightText: texts[0]!,
      count: entry.count,
      df: entry.df,
      conditions: entry.conditions,
      label,
    };
  });
}

/** Per-category emotion score literals from the "scores":{...} object of an
 * emotions response. */
export function emotionScoreTexts(payload: EmotionsResponse, raw: string): Map<string, string> {
  const slice = raw.slice(raw.indexOf('"scores":{'));
  const object = slice.slice(0, slice.indexOf("}"));
  const texts = new Map<string, string>();
  for (const category of Object.keys(payload.emotions.scores)) {
    texts.set(
      category,
      literalsFor(object, category, [payload.emotions.scores[category]!])[0]!,
    );
  }
  return texts;
}

/** Body zone weights from a bodymap response ("zones" is its last key). */
export function bodyZoneData(payload: BodymapResponse, raw: string): BodyZoneDatum[] {
  const slice = raw.slice(raw.indexOf('"zones"'));
  const texts = literalsFor(slice, "weight", payload.zones.map((zone) => zone.weight));
  return payload.zones.map((zone, i) => ({
    zoneId: zone.zone_id,
    weight: zone.weight,
    weightText: texts[i]!,
  }));
}

/** England-mean literal of a prevalence table. */
export function meanText(prevalence: PrevalenceTable, raw: string): string {
  return literalsFor(raw, "mean", [prevalence.mean])[0]!;
}

/** Choropleth display rows keyed by region code, carrying rate/delta/z
 * literals in the document order of the regions array. */
export function prevalenceDisplays(
  prevalence: PrevalenceTable,
  raw: string,
  names: Record<string, string>,
  selected: readonly string[],
): Map<string, RegionDisplay> {
  const rates = literalsFor(raw, "rate", prevalence.regions.map((r) => r.rate));
  const deltas = literalsFor(raw, "delta_from_mean", prevalence.regions.map((r) => r.delta_from_mean));
  const zs = literalsFor(raw, "z", prevalence.regions.map((r) => r.z));
  const out = new Map<string, RegionDisplay>();
  prevalence.regions.forEach((region, i) => {
    out.set(region.code, {
      name: names[region.code] ?? region.code,
      rateText: rates[i]!,
      deltaText: deltas[i]!,
      zText: zs[i]!,
      zDisplay: region.z_display,
      selected: selected.includes(region.code),
    });
  });
  return out;
}

/** Raw z literals per (region, axis) of a compare payload; region objects
 * serialize as {"axes":{...},"code":...} so the n-th "axes" segment belongs
 * to the n-th region. */
export function compareZTexts(payload: ComparePayload, raw: string): Map<string, Map<string, string>> {
  const segments = raw.split('{"axes":').slice(1);
  const out = new Map<string, Map<string, string>>();
  payload.regions.forEach((region, i) => {
    const per = new Map<string, string>();
    const segment = segments[i] ?? "";
    for (const axis of payload.axis_order) {
      const match = segment.match(new RegExp(`"${axis}":\\{[^}]*"z":(-?[0-9.eE+-]+)`));
      if (match) per.set(axis, match[1]!);
    }
    out.set(region.code, per);
  });
  return out;
}
