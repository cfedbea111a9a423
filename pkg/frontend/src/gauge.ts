// MWL gauge logic, kept DOM-free so it is testable headlessly.
// The lamp shows the class of the last workload update; artifact
// samples arrive carrying the held class, so they never flip it.

import type { ViewModel, WorkloadPoint } from "./state.js";

export const STALE_AFTER_MS = 3000;

export type LampState = "off" | "stale" | "nominal" | "overload";

export function lampState(vm: ViewModel, nowMs: number): LampState {
  const history = vm.workloadHistory;
  if (history.length === 0) {
    return "off";
  }
  const last = history[history.length - 1];
  if (nowMs - last.receivedAtMs > STALE_AFTER_MS) {
    return "stale";
  }
  return last.sample.class;
}

export interface SparkPoint {
  x: number;
  y: number;
  hollow: boolean; // artifact samples render hollow
}

const SPARK_WINDOW_S = 60;
const REL_CEILING = 3.0; // relative index mapped onto [0, ceiling]

export function sparklinePoints(
  history: WorkloadPoint[],
  widthPx: number,
  heightPx: number,
): SparkPoint[] {
  const withRel = history.filter((p) => p.sample.relative_index !== null);
  if (withRel.length === 0) {
    return [];
  }
  const latest = withRel[withRel.length - 1].sample.end_time_s;
  const start = latest - SPARK_WINDOW_S;
  return withRel
    .filter((p) => p.sample.end_time_s >= start)
    .map((p) => {
      const rel = Math.min(p.sample.relative_index as number, REL_CEILING);
      return {
        x: ((p.sample.end_time_s - start) / SPARK_WINDOW_S) * widthPx,
        y: heightPx - (rel / REL_CEILING) * heightPx,
        hollow: p.sample.artifact,
      };
    });
}
