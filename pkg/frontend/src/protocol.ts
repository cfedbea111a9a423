// Wire protocol types mirroring docs/wire-protocol.schema.json.
// The server is authoritative; the client only renders what it is told.

export type Role = "player" | "spectator";

export interface GameConfigWire {
  n_level: number;
  ingredient_count: number;
  drink_vocab: string[];
  ingredient_vocab: string[];
  target_rate: number;
  trial_count: number;
  session_duration_s: number;
  seed: number;
}

export interface ScoreWire {
  orders_completed: number;
  orders_correct: number;
  judgment_hits: number;
  judgment_false_alarms: number;
  mean_response_time_ms: number;
}

export interface WorkloadSampleWire {
  end_time_s: number;
  frontal_theta_power: number;
  parietal_alpha_power: number;
  index: number;
  relative_index: number | null;
  class: "nominal" | "overload";
  artifact: boolean;
  degenerate_alpha?: boolean;
}

export type GamePhaseName =
  | "idle"
  | "presenting"
  | "judging"
  | "selecting_drink"
  | "selecting_ingredients"
  | "feedback"
  | "finished";

export interface ConfigAck {
  type: "config_ack";
  clock_s: number;
  config: GameConfigWire;
  sequence_digest: string;
}

export interface OrderPresented {
  type: "order_presented";
  clock_s: number;
  order_index: number;
  customer_id: string;
  ingredients: string[];
  drink_cue: string;
  total_orders: number;
}

export interface PhaseChanged {
  type: "phase_changed";
  clock_s: number;
  phase: GamePhaseName;
  order_index: number | null;
}

export interface TrialFeedback {
  type: "trial_feedback";
  clock_s: number;
  order_index: number;
  feedback: "positive" | "negative";
  judgment_correct: boolean;
  drink_correct: boolean;
  ingredients_correct: boolean;
  overall_correct: boolean;
}

export interface WorkloadUpdate {
  type: "workload_update";
  clock_s: number;
  sample: WorkloadSampleWire;
}

export interface CountdownTick {
  type: "countdown_tick";
  clock_s: number;
  remaining_s: number;
}

export interface ScoreUpdate {
  type: "score_update";
  clock_s: number;
  score: ScoreWire;
}

export interface SessionEnd {
  type: "session_end";
  clock_s: number;
  score: ScoreWire;
}

export interface ErrorMessage {
  type: "error";
  clock_s: number;
  code: string;
  detail: string;
}

export type ServerMessage =
  | ConfigAck
  | OrderPresented
  | PhaseChanged
  | TrialFeedback
  | WorkloadUpdate
  | CountdownTick
  | ScoreUpdate
  | SessionEnd
  | ErrorMessage;

export interface ClientMessage {
  type: string;
  session_id: string;
  [key: string]: unknown;
}

export function setConfig(sessionId: string, config: Partial<GameConfigWire>): ClientMessage {
  return { type: "set_config", session_id: sessionId, config };
}

export function startSession(sessionId: string): ClientMessage {
  return { type: "start_session", session_id: sessionId };
}

export function submitJudgment(sessionId: string, judgedYes: boolean): ClientMessage {
  return { type: "submit_judgment", session_id: sessionId, judgment: judgedYes ? "yes" : "no" };
}

export function submitDrink(sessionId: string, drink: string): ClientMessage {
  return { type: "submit_drink", session_id: sessionId, drink };
}

export function submitIngredients(sessionId: string, ingredients: Iterable<string>): ClientMessage {
  // Sorted to match the server-side builder byte for byte.
  return {
    type: "submit_ingredients",
    session_id: sessionId,
    ingredients: [...ingredients].sort(),
  };
}

export function subscribe(sessionId: string, role: Role): ClientMessage {
  return { type: "subscribe", session_id: sessionId, role };
}
