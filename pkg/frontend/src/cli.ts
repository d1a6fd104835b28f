import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { CsvError } from "./csv.js";
import { renderFig1 } from "./fig1.js";
import { renderGrowth } from "./growth.js";

const USAGE = `usage: cli.js <render-fig1|render-growth> <csv-path> [--out <file.svg>]

render-fig1     two-panel Re/Im amplitude figure with error bars
render-growth   log-scale landscape growth probe with bound overlay

--out defaults to the CSV path with an .svg extension; only vector (.svg)
output is supported.`;

export function main(argv: string[]): number {
  const positional: string[] = [];
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--out") {
      out = argv[++i];
      if (out === undefined) {
        console.error("--out needs a value");
        return 1;
      }
    } else if (argv[i] === "--help" || argv[i] === "-h") {
      console.log(USAGE);
      return 0;
    } else {
      positional.push(argv[i]);
    }
  }
  if (positional.length !== 2) {
    console.error(USAGE);
    return 1;
  }
  const [command, csvPath] = positional;
  const render =
    command === "render-fig1" ? renderFig1 : command === "render-growth" ? renderGrowth : undefined;
  if (render === undefined) {
    console.error(`unknown command: ${command}\n${USAGE}`);
    return 1;
  }
  out = out ?? csvPath.replace(/\.csv$/i, "") + ".svg";
  if (!out.endsWith(".svg")) {
    console.error(`only .svg output is supported, got: ${out}`);
    return 1;
  }
  let text: string;
  try {
    text = readFileSync(csvPath, "utf8");
  } catch (err) {
    console.error(`cannot read ${csvPath}: ${(err as Error).message}`);
    return 1;
  }
  try {
    writeFileSync(out, render(text), "utf8");
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`${csvPath}: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
