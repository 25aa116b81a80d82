import { parseArgs } from "node:util";
import { readFileSync, writeFileSync } from "node:fs";
import { parseRecords } from "./csv.js";
import { scalingFigure, curvesFigure } from "./render.js";

const USAGE =
  "usage: render --input <estimates.csv> --figure scaling|curves " +
  "[--quantity <name>] [--output <figure.svg>]";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        input: { type: "string" },
        figure: { type: "string" },
        quantity: { type: "string", default: "vacant_width_q50" },
        output: { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${USAGE}\n`);
    return 2;
  }
  const { input, figure, quantity, output } = args.values;
  if (!input || !figure) {
    process.stderr.write(`${USAGE}\n`);
    return 2;
  }
  let svg: string;
  try {
    const rows = parseRecords(readFileSync(input, "utf8"));
    if (figure === "scaling") {
      svg = scalingFigure(rows, quantity!);
    } else if (figure === "curves") {
      svg = curvesFigure(rows);
    } else {
      process.stderr.write(`unknown figure "${figure}"\n${USAGE}\n`);
      return 2;
    }
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 1;
  }
  if (output) {
    writeFileSync(output, svg);
  } else {
    process.stdout.write(svg);
  }
  return 0;
}

if (process.argv[1] && /cli\.(ts|js)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
