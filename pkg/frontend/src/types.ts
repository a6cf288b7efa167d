/** Payload shapes served by the condition-profile API (`/api/v1`). */

export interface ConditionSummary {
  condition_id: string;
  name: string;
  subreddit: string;
}

export interface ProfileEntry {
  concept_id: string;
  name: string;
  weight: number;
  count: number;
  df: number;
  conditions: string[];
}

export interface ProfileGroups {
  expected: ProfileEntry[];
  emerging: ProfileEntry[];
}

export interface EmotionPayload {
  scores: Record<string, number>;
  rank: string[];
}

export interface BodyZone {
  zone_id: string;
  weight: number;
}

export interface Profile {
  condition_id: string;
  name: string;
  subreddit: string;
  symptoms: ProfileGroups;
  drugs: ProfileGroups;
  emotions: EmotionPayload;
  body: BodyZone[];
}

export interface EmotionsResponse {
  condition_id: string;
  emotions: EmotionPayload;
}

export interface BodymapResponse {
  condition_id: string;
  zones: BodyZone[];
}

export interface PrevalenceRegion {
  code: string;
  apportioned_items: number;
  patients: number;
  rate: number;
  delta_from_mean: number;
  z: number;
  z_display: number;
}

export interface PrevalenceTable {
  condition_id: string;
  months: number;
  mean: number;
  sd: number;
  regions: PrevalenceRegion[];
  unallocated_items: number;
  top: string[];
  bottom: string[];
}

export interface RegionIndicators {
  code: string;
  population: number;
  density: number;
  deprivation: number;
  z: Record<string, number>;
  z_display: Record<string, number>;
}

export interface CompareAxis {
  value: number;
  z: number;
  z_display: number;
}

export interface CompareRegion {
  code: string;
  axes: Record<string, CompareAxis>;
}

export interface ComparePayload {
  condition_id: string;
  axis_order: string[];
  regions: CompareRegion[];
}

export interface GeoFeature {
  type: "Feature";
  properties: { code: string; name: string };
  geometry: { type: "Polygon"; coordinates: number[][][] };
}

export interface GeoCollection {
  type: "FeatureCollection";
  features: GeoFeature[];
}
