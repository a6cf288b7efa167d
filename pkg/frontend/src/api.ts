/** Read-only API client. Responses are kept both parsed and raw so the UI
 * can lift display numbers straight out of the payload bytes. */

export interface RawResponse<T> {
  data: T;
  raw: string;
}

export function apiBase(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return override ?? "/api/v1";
}

export async function getRaw<T>(path: string): Promise<RawResponse<T>> {
  const response = await fetch(`${apiBase()}${path}`);
  if (!response.ok) {
    throw new Error(`${path} -> ${response.status}`);
  }
  const raw = await response.text();
  return { data: JSON.parse(raw) as T, raw };
}

export async function getAsset<T>(path: string): Promise<T> {
  const response = await fetch(path);
  if (!response.ok) {
    throw new Error(`${path} -> ${response.status}`);
  }
  return (await response.json()) as T;
}
