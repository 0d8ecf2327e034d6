#!/usr/bin/env node
/**
 * kdvlab-plots render <recipe.json> <outdir>
 *
 * Renders every figure in the recipe to <outdir>/<figure.out>.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import path from "node:path";

import { CsvFormatError } from "./csv.js";
import { render } from "./figures.js";
import { loadRecipe, RecipeError } from "./recipe.js";

export function main(argv: string[]): number {
  if (argv.length !== 3 || argv[0] !== "render") {
    process.stderr.write("usage: kdvlab-plots render <recipe.json> <outdir>\n");
    return 2;
  }
  const [, recipePath, outDir] = argv;
  try {
    const recipe = loadRecipe(recipePath);
    mkdirSync(outDir, { recursive: true });
    for (const fig of recipe.figures) {
      const svg = render(fig);
      const target = path.join(outDir, fig.out);
      writeFileSync(target, svg);
      process.stdout.write(`rendered ${fig.id} -> ${target}\n`);
    }
    return 0;
  } catch (e) {
    if (e instanceof RecipeError || e instanceof CsvFormatError) {
      process.stderr.write(`error: ${e.message}\n`);
      return 1;
    }
    throw e;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
