/** Literal CSV fixtures for renderer tests, written into a temp dir. */

import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";

export const HASH = "0123456789ab";

export function stamp(schema: string): string {
  return `# kdvlab csv v1 schema=${schema} config=${HASH}`;
}

export function makeDir(): string {
  return mkdtempSync(path.join(tmpdir(), "kdvlab-plots-"));
}

export function writeFixture(dir: string, name: string, text: string): string {
  const p = path.join(dir, name);
  writeFileSync(p, text);
  return p;
}

export const TRACE = [
  stamp("trace"),
  "# termination=blew_up t=17.3",
  "t,l2_norm,amplitude,peak_position",
  "0,2.5,1.5,0",
  "1,2.6,1.55,0.5",
  "2,2.9,1.7,1.0",
  "3,4.0,2.4,1.5",
  "",
].join("\n");

export const ERRORS = [
  stamp("errors"),
  "t,l2_error,phase_offset,amplitude_ratio",
  "0,0,0,1",
  "1,1e-6,0.001,1.0001",
  "2,1e-5,0.002,1.001",
  "3,1e-3,0.004,1.01",
  "",
].join("\n");

export function eigenreport(lambdaMax: string): string {
  return [
    stamp("eigenreport"),
    `# lambda_max=${lambdaMax}`,
    "re_sigma,im_sigma,re_lambda,im_lambda,drift_ratio,resolved",
    "1.001,0.02,0.3,6.1,1e-9,1",
    "0.999,-0.02,-0.3,-6.1,1e-9,1",
    "0.5,0.5,-200,300,2.5,0",
    "",
  ].join("\n");
}

export const RASTER = (() => {
  const lines = [stamp("raster"), "im_zim,im_zex,max_sigma"];
  for (let i = 0; i < 4; i += 1) {
    for (let j = 0; j < 4; j += 1) {
      // unstable in the upper-right corner, stable elsewhere
      const v = i + j >= 5 ? 1.2 : 0.9;
      lines.push(`${i * 0.5},${j * 0.5},${v}`);
    }
  }
  lines.push("");
  return lines.join("\n");
})();

export const PREDICTION = [
  stamp("prediction"),
  "# endpoint=blowup t=17.7",
  "# epsilon=0.1 m=3 mode=finite",
  "t,c,predicted_l2",
  "0,0.5,2.5",
  "5,0.55,2.6",
  "10,0.65,2.9",
  "15,0.9,3.6",
  "",
].join("\n");

export const COMPARISON = [
  stamp("comparison"),
  "# slope scheme=sbdf2 value=2",
  "epsilon,alpha,dt,scheme,t_measured,t_predicted,rel_error",
  "0.1,0.00697,0.012,sbdf2,1000,1040,0.04",
  "0.05,0.00697,0.006,sbdf2,4000,4040,0.01",
  "0.025,0.00697,0.003,sbdf2,16000,16040,0.0025",
  "0.1,0.00697,0.012,sbdf1,150,160,0.0667",
  "0.05,0.00697,0.006,sbdf1,310,320,0.0323",
  "",
].join("\n");
