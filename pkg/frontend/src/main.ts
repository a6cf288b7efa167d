/** Bootstrap: wire the scrollytelling layers to the API.
 *
 * All chart markup comes from the pure renderers and every displayed number
 * is lifted from the payload bytes (see payload.ts); this module fetches,
 * tracks view state (mirrored into the URL as the permalink), and handles
 * scroll and click interactions.
 */

import { getAsset, getRaw } from "./api.js";
import { renderBodyMap } from "./charts/body.js";
import { renderBubbleChart } from "./charts/bubbles.js";
import { renderChoropleth, renderLegend } from "./charts/choropleth.js";
import { renderEmotionRanking } from "./charts/emotions.js";
import { renderRadar } from "./charts/radar.js";
import { escapeHtml } from "./format.js";
import {
  bubbleData,
  bodyZoneData,
  compareZTexts,
  emotionScoreTexts,
  meanText,
  prevalenceDisplays,
} from "./payload.js";
import { toggleRegion } from "./regions.js";
import {
  LAYERS,
  MAX_REGIONS,
  decodeState,
  encodeState,
  isValidState,
  type Layer,
  type ViewState,
} from "./state.js";
import { clampTarget, layerIndex, unlockedLayers } from "./story.js";
import type {
  BodymapResponse,
  ComparePayload,
  ConditionSummary,
  EmotionsResponse,
  GeoCollection,
  PrevalenceTable,
  Profile,
} from "./types.js";

interface LoadedCondition {
  profile: Profile;
  profileRaw: string;
  emotions: EmotionsResponse;
  emotionsRaw: string;
  bodymap: BodymapResponse;
  bodymapRaw: string;
  prevalence: PrevalenceTable;
  prevalenceRaw: string;
}

const state: ViewState = { condition: null, layer: "intro", regions: [] };
let reached: Layer = "intro";
let conditions: ConditionSummary[] = [];
let conditionNames: Record<string, string> = {};
let regionNames: Record<string, string> = {};
let geo: GeoCollection | null = null;
let loaded: LoadedCondition | null = null;

function section(layer: Layer): HTMLElement {
  return document.getElementById(`layer-${layer}`) as HTMLElement;
}

function syncUrl(): void {
  const query = encodeState(state);
  history.replaceState(null, "", query || window.location.pathname);
}

function shareLink(): string {
  return `${window.location.origin}${window.location.pathname}${encodeState(state)}`;
}

function updateLocks(): void {
  const unlocked = new Set(unlockedLayers(reached));
  for (const layer of LAYERS) {
    section(layer).classList.toggle("locked", !unlocked.has(layer));
  }
  document.body.dataset.layer = state.layer;
}

function renderIntro(): void {
  const picker = document.getElementById("condition-picker") as HTMLSelectElement;
  picker.innerHTML =
    `<option value="">choose a condition…</option>` +
    conditions
      .map(
        (c) =>
          `<option value="${escapeHtml(c.condition_id)}"${
            c.condition_id === state.condition ? " selected" : ""
          }>${escapeHtml(c.name)}</option>`,
      )
      .join("");
}

function renderBio(): void {
  if (!loaded) return;
  const { profile, profileRaw } = loaded;
  const symptoms = [
    ...bubbleData(profile.symptoms.expected, profileRaw, "expected"),
    ...bubbleData(profile.symptoms.emerging, profileRaw, "emerging"),
  ];
  const drugs = [
    ...bubbleData(profile.drugs.expected, profileRaw, "expected"),
    ...bubbleData(profile.drugs.emerging, profileRaw, "emerging"),
  ];
  (document.getElementById("bubble-charts") as HTMLElement).innerHTML =
    renderBubbleChart("symptoms", symptoms, conditionNames) +
    renderBubbleChart("drugs", drugs, conditionNames);
  (document.getElementById("bio-heading") as HTMLElement).innerHTML =
    `The textbook view of <em>${escapeHtml(profile.name)}</em>`;
}

function renderPsycho(): void {
  if (!loaded) return;
  const { emotions, emotionsRaw, bodymap, bodymapRaw } = loaded;
  (document.getElementById("emotion-ranking") as HTMLElement).innerHTML =
    renderEmotionRanking(emotions.emotions.rank, emotionScoreTexts(emotions, emotionsRaw));
  (document.getElementById("body-map") as HTMLElement).innerHTML = renderBodyMap(
    bodyZoneData(bodymap, bodymapRaw),
  );
}

function renderSocial(): void {
  if (!loaded || !geo) return;
  const { profile, prevalence, prevalenceRaw } = loaded;
  const names = (codes: string[]) => codes.map((c) => regionNames[c] ?? c).join(" and ");
  (document.getElementById("social-narrative") as HTMLElement).innerHTML =
    `<p>Prescribing tells a social story. For <strong>${escapeHtml(profile.name)}</strong>, ` +
    `the highest rates appear in <strong>${escapeHtml(names(prevalence.top.slice(0, 2)))}</strong>; ` +
    `the lowest in <strong>${escapeHtml(names(prevalence.bottom.slice(0, 2)))}</strong>. ` +
    `Click up to ${MAX_REGIONS} regions to compare their social indicators.</p>`;
  const displays = prevalenceDisplays(prevalence, prevalenceRaw, regionNames, state.regions);
  (document.getElementById("map-host") as HTMLElement).innerHTML =
    renderChoropleth(geo, displays) + renderLegend(meanText(prevalence, prevalenceRaw));
  wireRegionClicks();
  void renderCompare();
}

async function renderCompare(): Promise<void> {
  const host = document.getElementById("radar-host") as HTMLElement;
  if (!state.condition || state.regions.length === 0) {
    host.innerHTML = `<p class="empty-note">select regions on the map to compare them</p>`;
    return;
  }
  const { data, raw } = await getRaw<ComparePayload>(
    `/compare?condition=${encodeURIComponent(state.condition)}&regions=${state.regions.join(",")}`,
  );
  host.innerHTML = renderRadar(data, regionNames, compareZTexts(data, raw));
}

function wireRegionClicks(): void {
  document.querySelectorAll<SVGGElement>(".region").forEach((node) => {
    node.addEventListener("click", () => {
      const code = node.dataset.code;
      if (!code) return;
      state.regions = toggleRegion(state.regions, code);
      syncUrl();
      renderSocial();
    });
  });
}

async function loadCondition(conditionId: string): Promise<void> {
  const [profile, emotions, bodymap, prevalence] = await Promise.all([
    getRaw<Profile>(`/conditions/${conditionId}/profile`),
    getRaw<EmotionsResponse>(`/conditions/${conditionId}/emotions`),
    getRaw<BodymapResponse>(`/conditions/${conditionId}/bodymap`),
    getRaw<PrevalenceTable>(`/conditions/${conditionId}/prevalence`),
  ]);
  loaded = {
    profile: profile.data,
    profileRaw: profile.raw,
    emotions: emotions.data,
    emotionsRaw: emotions.raw,
    bodymap: bodymap.data,
    bodymapRaw: bodymap.raw,
    prevalence: prevalence.data,
    prevalenceRaw: prevalence.raw,
  };
  renderBio();
  renderPsycho();
  renderSocial();
}

function activateLayer(target: Layer): void {
  const clamped = clampTarget(state.layer, target);
  state.layer = clamped;
  if (layerIndex(clamped) > layerIndex(reached)) reached = clamped;
  syncUrl();
  updateLocks();
}

function observeSections(): void {
  const observer = new IntersectionObserver(
    (entries) => {
      for (const entry of entries) {
        if (!entry.isIntersecting) continue;
        const layer = (entry.target as HTMLElement).dataset.layerId as Layer;
        if (state.condition === null && layer !== "intro") continue;
        activateLayer(layer);
      }
    },
    { threshold: 0.4 },
  );
  for (const layer of LAYERS) observer.observe(section(layer));
}

async function start(): Promise<void> {
  const fromUrl = decodeState(window.location.search);
  if (isValidState(fromUrl)) {
    state.condition = fromUrl.condition;
    state.layer = fromUrl.layer;
    state.regions = fromUrl.regions;
    reached = fromUrl.layer; // a valid permalink may start mid-story
  }
  const [summary, geoAsset, names] = await Promise.all([
    getRaw<{ conditions: ConditionSummary[] }>("/conditions"),
    getAsset<GeoCollection>("assets/england_regions.geo.json"),
    getAsset<Record<string, string>>("assets/region_names.json").catch(
      () => ({}) as Record<string, string>,
    ),
  ]);
  conditions = summary.data.conditions;
  conditionNames = Object.fromEntries(conditions.map((c) => [c.condition_id, c.name]));
  geo = geoAsset;
  regionNames = {
    ...Object.fromEntries(geo.features.map((f) => [f.properties.code, f.properties.name])),
    ...names,
  };
  renderIntro();
  updateLocks();
  observeSections();

  (document.getElementById("condition-picker") as HTMLSelectElement).addEventListener(
    "change",
    async (event) => {
      const value = (event.target as HTMLSelectElement).value;
      state.condition = value || null;
      if (!state.condition) return;
      syncUrl();
      await loadCondition(state.condition);
      section("bio").scrollIntoView({ behavior: "smooth" });
    },
  );
  (document.getElementById("share-button") as HTMLButtonElement).addEventListener("click", () => {
    const link = shareLink();
    const output = document.getElementById("share-output") as HTMLElement;
    output.textContent = link;
    output.classList.add("visible");
    void navigator.clipboard?.writeText(link).catch(() => undefined);
  });

  if (state.condition) {
    await loadCondition(state.condition);
    section(state.layer).scrollIntoView();
  }
}

void start();
