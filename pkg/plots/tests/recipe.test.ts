import { writeFileSync } from "node:fs";
import path from "node:path";

import { describe, expect, it } from "vitest";

import { loadRecipe, RecipeError } from "../src/recipe.js";
import { makeDir, TRACE, writeFixture } from "./fixtures.js";

function writeRecipe(dir: string, figures: unknown): string {
  const p = path.join(dir, "recipe.json");
  writeFileSync(p, JSON.stringify({ figures }));
  return p;
}

describe("loadRecipe", () => {
  it("loads a valid recipe and resolves paths against the recipe dir", () => {
    const dir = makeDir();
    writeFixture(dir, "trace.csv", TRACE);
    const p = writeRecipe(dir, [
      { id: "hist", kind: "history", inputs: [{ path: "trace.csv" }], out: "hist.svg" },
    ]);
    const recipe = loadRecipe(p);
    expect(recipe.figures).toHaveLength(1);
    expect(recipe.figures[0].inputs[0].path).toBe(path.join(dir, "trace.csv"));
  });

  it("rejects a missing recipe file", () => {
    expect(() => loadRecipe("/nonexistent/recipe.json")).toThrow(/not found/);
  });

  it("rejects invalid JSON", () => {
    const dir = makeDir();
    const p = writeFixture(dir, "recipe.json", "{nope");
    expect(() => loadRecipe(p)).toThrow(/not valid JSON/);
  });

  it("rejects an empty recipe", () => {
    const dir = makeDir();
    expect(() => loadRecipe(writeRecipe(dir, []))).toThrow(/no figures/);
  });

  it("rejects an unknown figure kind", () => {
    const dir = makeDir();
    writeFixture(dir, "trace.csv", TRACE);
    const p = writeRecipe(dir, [
      { id: "x", kind: "pie-chart", inputs: [{ path: "trace.csv" }], out: "x.svg" },
    ]);
    expect(() => loadRecipe(p)).toThrow(RecipeError);
    expect(() => loadRecipe(p)).toThrow(/unknown kind/);
  });

  it("rejects a missing input file", () => {
    const dir = makeDir();
    const p = writeRecipe(dir, [
      { id: "x", kind: "history", inputs: [{ path: "gone.csv" }], out: "x.svg" },
    ]);
    expect(() => loadRecipe(p)).toThrow(/input not found/);
  });

  it("requires dt on growth-scaling inputs", () => {
    const dir = makeDir();
    writeFixture(dir, "eig.csv", TRACE); // existence is all that is checked here
    const p = writeRecipe(dir, [
      { id: "g", kind: "growth-scaling", inputs: [{ path: "eig.csv" }], out: "g.svg" },
    ]);
    expect(() => loadRecipe(p)).toThrow(/need a dt/);
  });

  it("rejects figures without id or out", () => {
    const dir = makeDir();
    writeFixture(dir, "trace.csv", TRACE);
    const noId = writeRecipe(dir, [
      { kind: "history", inputs: [{ path: "trace.csv" }], out: "x.svg" },
    ]);
    expect(() => loadRecipe(noId)).toThrow(/without id/);
    const noOut = writeRecipe(dir, [
      { id: "x", kind: "history", inputs: [{ path: "trace.csv" }] },
    ]);
    expect(() => loadRecipe(noOut)).toThrow(/no output name/);
  });
});
