import { describe, expect, it } from "vitest";

import { STALE_AFTER_MS, lampState, sparklinePoints } from "../src/gauge.js";
import type { WorkloadUpdate } from "../src/protocol.js";
import { applyMessage, initialViewModel, type ViewModel } from "../src/state.js";

function update(
  t: number,
  cls: "nominal" | "overload",
  artifact = false,
  rel: number | null = 1.0,
): WorkloadUpdate {
  return {
    type: "workload_update",
    clock_s: t,
    sample: {
      end_time_s: t,
      frontal_theta_power: 1,
      parietal_alpha_power: 1,
      index: 1,
      relative_index: rel,
      class: cls,
      artifact,
    },
  };
}

describe("mwl lamp", () => {
  it("is off before any update", () => {
    expect(lampState(initialViewModel(), 0)).toBe("off");
  });

  it("shows the class of the last update", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, update(2.0, "nominal"), 1000);
    expect(lampState(vm, 1100)).toBe("nominal");
    vm = applyMessage(vm, update(2.5, "overload"), 1500);
    expect(lampState(vm, 1600)).toBe("overload");
  });

  it("keeps the lamp on an artifact sample (held class)", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, update(2.0, "overload"), 1000);
    vm = applyMessage(vm, update(2.5, "overload", true), 1500);
    expect(lampState(vm, 1600)).toBe("overload");
  });

  it("greys out after 3 s of silence", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, update(2.0, "nominal"), 1000);
    expect(lampState(vm, 1000 + STALE_AFTER_MS)).toBe("nominal");
    expect(lampState(vm, 1001 + STALE_AFTER_MS)).toBe("stale");
  });

  it("matches the last update across a 360-message replay", () => {
    // One simulated 180 s session at 0.5 s cadence: the lamp must equal
    // the final message's class at every prefix of the stream.
    let vm: ViewModel = initialViewModel();
    const classes: Array<"nominal" | "overload"> = [];
    for (let i = 0; i < 360; i++) {
      const t = 2.0 + i * 0.5;
      const cls = t >= 62.0 ? "overload" : "nominal";
      const artifact = i % 47 === 0;
      classes.push(cls);
      vm = applyMessage(vm, update(t, cls, artifact), i);
      expect(lampState(vm, i)).toBe(classes[classes.length - 1]);
    }
    expect(vm.workloadHistory.length).toBe(120);
    expect(lampState(vm, 360)).toBe("overload");
  });
});

describe("sparkline", () => {
  it("covers the last 60 s and marks artifacts hollow", () => {
    let vm = initialViewModel();
    for (let i = 0; i < 200; i++) {
      const t = 2.0 + i * 0.5;
      vm = applyMessage(vm, update(t, "nominal", i === 199, 1.0 + (i % 5) * 0.2), i);
    }
    const points = sparklinePoints(vm.workloadHistory, 360, 80);
    expect(points.length).toBeGreaterThan(0);
    // All points inside the canvas.
    for (const p of points) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(360);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(80);
    }
    expect(points[points.length - 1].hollow).toBe(true);
    // 60 s window at 0.5 s cadence -> at most 121 points.
    expect(points.length).toBeLessThanOrEqual(121);
  });

  it("skips samples from the calibration window (null relative)", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, update(2.0, "nominal", false, null), 0);
    expect(sparklinePoints(vm.workloadHistory, 100, 50)).toEqual([]);
  });
});
