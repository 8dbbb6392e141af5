/** Tiny deterministic SVG string builder (no DOM, no timestamps). */

export type Attrs = Record<string, string | number>;

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${String(v)}"`)
    .join("");
  if (children.length === 0) {
    return `<${tag}${attrText}/>`;
  }
  return `<${tag}${attrText}>${children.join("")}</${tag}>`;
}

export function text(tag: string, attrs: Attrs, content: string): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${String(v)}"`)
    .join("");
  return `<${tag}${attrText}>${escapeXml(content)}</${tag}>`;
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function polylinePoints(pts: Array<[number, number]>): string {
  return pts.map(([x, y]) => `${round(x)},${round(y)}`).join(" ");
}

export function polygonPoints(upper: Array<[number, number]>, lower: Array<[number, number]>): string {
  return polylinePoints([...upper, ...[...lower].reverse()]);
}

function round(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
