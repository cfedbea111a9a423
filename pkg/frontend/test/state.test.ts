import { describe, expect, it } from "vitest";

import type { PhaseChanged, ServerMessage, WorkloadUpdate } from "../src/protocol.js";
import { WORKLOAD_RING_SIZE, applyMessage, initialViewModel } from "../src/state.js";

function phaseMsg(phase: PhaseChanged["phase"], index: number | null): PhaseChanged {
  return { type: "phase_changed", clock_s: 1.0, phase, order_index: index };
}

function workloadMsg(t: number, cls: "nominal" | "overload" = "nominal"): WorkloadUpdate {
  return {
    type: "workload_update",
    clock_s: t,
    sample: {
      end_time_s: t,
      frontal_theta_power: 1,
      parietal_alpha_power: 1,
      index: 1,
      relative_index: 1,
      class: cls,
      artifact: false,
    },
  };
}

describe("view model reducer", () => {
  it("mirrors only the last phase_changed (server authority)", () => {
    let vm = initialViewModel();
    const script: ServerMessage[] = [
      phaseMsg("judging", 0),
      workloadMsg(2.0),
      phaseMsg("selecting_drink", 0),
      { type: "countdown_tick", clock_s: 3, remaining_s: 177 },
      phaseMsg("selecting_ingredients", 0),
    ];
    for (const msg of script) {
      vm = applyMessage(vm, msg, 0);
      if (msg.type === "phase_changed") {
        expect(vm.phase).toBe(msg.phase);
      }
    }
    expect(vm.phase).toBe("selecting_ingredients");
    expect(vm.countdownS).toBe(177);
  });

  it("caps the workload history ring at 120 samples", () => {
    let vm = initialViewModel();
    for (let i = 0; i < 300; i++) {
      vm = applyMessage(vm, workloadMsg(i * 0.5), i);
    }
    expect(vm.workloadHistory.length).toBe(WORKLOAD_RING_SIZE);
    const first = vm.workloadHistory[0];
    expect(first.sample.end_time_s).toBeCloseTo((300 - WORKLOAD_RING_SIZE) * 0.5);
  });

  it("echoes the acknowledged config and digest", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, {
      type: "config_ack",
      clock_s: 0,
      sequence_digest: "abc123",
      config: {
        n_level: 2, ingredient_count: 4, drink_vocab: ["cola", "water"],
        ingredient_vocab: ["ham"], target_rate: 0.3, trial_count: 30,
        session_duration_s: 180, seed: 7,
      },
    }, 0);
    expect(vm.config?.ingredient_count).toBe(4);
    expect(vm.sequenceDigest).toBe("abc123");
  });

  it("records errors without touching game state", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, phaseMsg("judging", 0), 0);
    const before = vm.phase;
    vm = applyMessage(vm, {
      type: "error", clock_s: 1, code: "illegal_transition", detail: "nope",
    }, 42);
    expect(vm.lastError?.code).toBe("illegal_transition");
    expect(vm.phase).toBe(before);
  });

  it("marks the session over on session_end", () => {
    let vm = initialViewModel();
    vm = applyMessage(vm, {
      type: "session_end", clock_s: 180,
      score: {
        orders_completed: 10, orders_correct: 8, judgment_hits: 3,
        judgment_false_alarms: 1, mean_response_time_ms: 4100,
      },
    }, 0);
    expect(vm.sessionEnded).toBe(true);
    expect(vm.score?.orders_correct).toBe(8);
  });
});
