// The mirrored session state. applyMessage is the only way it changes,
// and it applies exactly what the server pushed: no client-side game
// rules, no predicted transitions.

import type {
  GameConfigWire,
  GamePhaseName,
  OrderPresented,
  ScoreWire,
  ServerMessage,
  TrialFeedback,
  WorkloadSampleWire,
} from "./protocol.js";

export const WORKLOAD_RING_SIZE = 120;

export type ConnectionState = "connecting" | "open" | "closed";

export interface WorkloadPoint {
  sample: WorkloadSampleWire;
  receivedAtMs: number;
}

export interface ViewModel {
  connection: ConnectionState;
  config: GameConfigWire | null;
  sequenceDigest: string | null;
  phase: GamePhaseName | null;
  phaseOrderIndex: number | null;
  currentOrder: OrderPresented | null;
  countdownS: number | null;
  score: ScoreWire | null;
  lastFeedback: TrialFeedback | null;
  lastError: { code: string; detail: string; atMs: number } | null;
  sessionEnded: boolean;
  workloadHistory: WorkloadPoint[]; // ring of the last WORKLOAD_RING_SIZE
}

export function initialViewModel(): ViewModel {
  return {
    connection: "connecting",
    config: null,
    sequenceDigest: null,
    phase: null,
    phaseOrderIndex: null,
    currentOrder: null,
    countdownS: null,
    score: null,
    lastFeedback: null,
    lastError: null,
    sessionEnded: false,
    workloadHistory: [],
  };
}

export function applyMessage(vm: ViewModel, message: ServerMessage, nowMs: number): ViewModel {
  switch (message.type) {
    case "config_ack":
      return { ...vm, config: message.config, sequenceDigest: message.sequence_digest };
    case "order_presented":
      return { ...vm, currentOrder: message };
    case "phase_changed":
      return { ...vm, phase: message.phase, phaseOrderIndex: message.order_index };
    case "trial_feedback":
      return { ...vm, lastFeedback: message };
    case "workload_update": {
      const history = [...vm.workloadHistory, { sample: message.sample, receivedAtMs: nowMs }];
      if (history.length > WORKLOAD_RING_SIZE) {
        history.splice(0, history.length - WORKLOAD_RING_SIZE);
      }
      return { ...vm, workloadHistory: history };
    }
    case "countdown_tick":
      return { ...vm, countdownS: message.remaining_s };
    case "score_update":
      return { ...vm, score: message.score };
    case "session_end":
      return { ...vm, score: message.score, sessionEnded: true, phase: "finished" };
    case "error":
      return { ...vm, lastError: { code: message.code, detail: message.detail, atMs: nowMs } };
    default:
      return vm;
  }
}

export function setConnection(vm: ViewModel, connection: ConnectionState): ViewModel {
  return { ...vm, connection };
}
