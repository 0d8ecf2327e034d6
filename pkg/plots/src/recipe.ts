/** Figure recipes: what to read, how to scale the axes, which guides to draw. */

import { readFileSync, existsSync } from "node:fs";
import path from "node:path";

export type FigureKind =
  | "history"
  | "errors"
  | "growth-scaling"
  | "endpoint-convergence"
  | "region-contour"
  | "spectrum"
  | "prediction";

export interface RecipeInput {
  path: string;
  /** Timestep the file was produced at; required for growth-scaling inputs. */
  dt?: number;
}

export interface GuideSpec {
  /** Reference power-law exponent, e.g. 2 for an eps^2 guide or -1 for dt^-1. */
  exponent: number;
  label?: string;
}

export interface FigureSpec {
  id: string;
  kind: FigureKind;
  inputs: RecipeInput[];
  xScale?: "linear" | "log";
  yScale?: "linear" | "log";
  guides?: GuideSpec[];
  out: string;
}

export interface Recipe {
  figures: FigureSpec[];
}

export class RecipeError extends Error {}

const KINDS: FigureKind[] = [
  "history",
  "errors",
  "growth-scaling",
  "endpoint-convergence",
  "region-contour",
  "spectrum",
  "prediction",
];

/** Schema each figure kind expects for its (first) input file. */
export const KIND_SCHEMA: Record<FigureKind, string> = {
  history: "trace",
  errors: "errors",
  "growth-scaling": "eigenreport",
  "endpoint-convergence": "comparison",
  "region-contour": "raster",
  spectrum: "eigenreport",
  prediction: "prediction",
};

export function loadRecipe(recipePath: string): Recipe {
  if (!existsSync(recipePath)) {
    throw new RecipeError(`recipe file not found: ${recipePath}`);
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(recipePath, "utf-8"));
  } catch (e) {
    throw new RecipeError(`recipe is not valid JSON: ${(e as Error).message}`);
  }
  const figures = Array.isArray(parsed)
    ? (parsed as FigureSpec[])
    : (parsed as Recipe).figures;
  if (!Array.isArray(figures) || figures.length === 0) {
    throw new RecipeError("recipe holds no figures");
  }
  const base = path.dirname(recipePath);
  for (const fig of figures) {
    if (!fig.id) throw new RecipeError("figure without id");
    if (!KINDS.includes(fig.kind)) {
      throw new RecipeError(`figure ${fig.id}: unknown kind ${fig.kind}`);
    }
    if (!Array.isArray(fig.inputs) || fig.inputs.length === 0) {
      throw new RecipeError(`figure ${fig.id}: no inputs`);
    }
    if (!fig.out) throw new RecipeError(`figure ${fig.id}: no output name`);
    for (const inp of fig.inputs) {
      inp.path = path.resolve(base, inp.path);
      if (!existsSync(inp.path)) {
        throw new RecipeError(`figure ${fig.id}: input not found: ${inp.path}`);
      }
      if (fig.kind === "growth-scaling" && typeof inp.dt !== "number") {
        throw new RecipeError(
          `figure ${fig.id}: growth-scaling inputs need a dt`
        );
      }
    }
  }
  return { figures };
}
