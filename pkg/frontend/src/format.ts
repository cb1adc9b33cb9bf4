/** Escapes a string for safe interpolation into HTML. */
export function esc(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Display form of a mean rating, one decimal as in the report tables. */
export function mean1(value: number): string {
  return value.toFixed(1);
}

/** Display form of a p-value: scientific below 1e-3, else three decimals. */
export function pValue(p: number): string {
  return p < 1e-3 ? p.toExponential(2) : p.toFixed(3);
}

/** Confidence badge bucket for an evidence item. */
export function confidenceBucket(c: number): "high" | "mid" | "low" {
  if (c >= 0.8) return "high";
  if (c >= 0.5) return "mid";
  return "low";
}
