/** Display text for payload numbers.
 *
 * Rendered values must byte-match the API payload: nothing is recomputed or
 * rounded client-side. Numbers the UI shows are lifted from the raw response
 * text as literals (`floatLiterals`), so even values whose JS string form
 * would differ from the wire form (e.g. `0.0`) render exactly as served.
 */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const NUMBER = "-?(?:0|[1-9][0-9]*)(?:\\.[0-9]+)?(?:[eE][+-]?[0-9]+)?";

/** All literals of `"key":<number>` in document order. The API serves
 * compact canonical JSON, so key-value pairs never contain whitespace. */
export function floatLiterals(rawJson: string, key: string): string[] {
  const pattern = new RegExp(`"${key}":(${NUMBER})`, "g");
  const out: string[] = [];
  for (const match of rawJson.matchAll(pattern)) {
    out.push(match[1]!);
  }
  return out;
}

/** Literal texts zipped against the parsed values they came from; throws if
 * the scan disagrees with the parse (a malformed payload, not a UI state). */
export function literalsFor(rawJson: string, key: string, values: number[]): string[] {
  const literals = floatLiterals(rawJson, key);
  if (literals.length !== values.length) {
    throw new Error(`literal scan for "${key}" found ${literals.length}, expected ${values.length}`);
  }
  literals.forEach((literal, i) => {
    if (Number(literal) !== values[i]) {
      throw new Error(`literal ${literal} does not parse to ${values[i]}`);
    }
  });
  return literals;
}
