/** `render --kind <sweep|analytic|bestloss> --in <csv> --out <img>` */

import { readFileSync, renameSync, unlinkSync, writeFileSync, existsSync } from "node:fs";

import { CsvError } from "./csv.js";
import { FigureKind, render } from "./render.js";

const KINDS: FigureKind[] = ["sweep", "analytic", "bestloss"];

export interface RenderRequest {
  kind: FigureKind;
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): RenderRequest {
  if (argv[0] !== "render") {
    throw new Error(`unknown command ${argv[0] ?? "(none)"}; expected "render"`);
  }
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    if (flag === "--kind") kind = value;
    else if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!kind || !input || !output) {
    throw new Error("usage: render --kind <sweep|analytic|bestloss> --in <csv> --out <img>");
  }
  if (!KINDS.includes(kind as FigureKind)) {
    throw new Error(`unknown kind ${kind}; expected one of ${KINDS.join(", ")}`);
  }
  return { kind: kind as FigureKind, input, output };
}

/** Run a render request; returns a process exit code and never leaves a
 *  partial output file behind. The input is only ever opened for reading. */
export function main(argv: string[]): number {
  let req: RenderRequest;
  try {
    req = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
  const tmp = req.output + ".part";
  try {
    const csvText = readFileSync(req.input, "utf8");
    const svg = render(req.kind, csvText);
    writeFileSync(tmp, svg, "utf8");
    renameSync(tmp, req.output);
    return 0;
  } catch (err) {
    if (existsSync(tmp)) unlinkSync(tmp);
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return err instanceof CsvError ? 2 : 3;
  }
}
