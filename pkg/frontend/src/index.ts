export { parseCsv, requireColumns, CsvError } from "./csv.js";
export { LogScale, extent, formatPow10 } from "./scale.js";
export { render, renderSweep, renderAnalytic, renderBestloss } from "./render.js";
export { main, parseArgs } from "./cli.js";
