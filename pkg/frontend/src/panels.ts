// DOM rendering for the three views. Rendering is a pure function of
// the view model (plus the wall clock for staleness); all interaction
// goes through the controller or the send callback.

import { GamePanelController } from "./game_logic.js";
import { lampState, sparklinePoints, type LampState } from "./gauge.js";
import { setConfig, startSession, type ClientMessage } from "./protocol.js";
import type { ViewModel } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function beep(): void {
  try {
    const ctx = new AudioContext();
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.frequency.value = 660;
    gain.gain.value = 0.08;
    osc.connect(gain).connect(ctx.destination);
    osc.start();
    osc.stop(ctx.currentTime + 0.18);
    osc.onended = () => ctx.close();
  } catch {
    // No audio permission: the text banner still carries the cue.
  }
}

// --- audience configuration panel -------------------------------------------

export class ConfigPanel {
  readonly root = el("section", "panel config-panel");
  private notice = el("p", "notice");
  private fields: Record<string, HTMLInputElement> = {};

  constructor(sessionId: string, send: (message: ClientMessage) => void) {
    this.root.append(el("h2", "", "Audience: choose the program"));
    const form = el("div", "config-form");
    const rows: Array<[string, string, number, number, number]> = [
      // key, label, min, max, step
      ["n_level", "N (how many orders back)", 1, 4, 1],
      ["ingredient_count", "Ingredients per pizza", 1, 5, 1],
      ["target_rate", "Target rate", 0, 1, 0.05],
      ["trial_count", "Orders prepared", 2, 200, 1],
      ["session_duration_s", "Session length (s)", 30, 600, 30],
    ];
    for (const [key, label, min, max, step] of rows) {
      const row = el("label", "config-row", label);
      const input = el("input");
      input.type = "number";
      input.min = String(min);
      input.max = String(max);
      input.step = String(step);
      input.addEventListener("change", () => {
        const value = Number(input.value);
        send(setConfig(sessionId, { [key]: value }));
      });
      this.fields[key] = input;
      row.append(input);
      form.append(row);
    }
    const start = el("button", "start-button", "Start the game");
    start.addEventListener("click", () => send(startSession(sessionId)));
    this.root.append(form, start, this.notice);
  }

  render(vm: ViewModel): void {
    // The form always shows the server-acknowledged values.
    if (vm.config) {
      for (const [key, input] of Object.entries(this.fields)) {
        if (document.activeElement !== input) {
          input.value = String((vm.config as unknown as Record<string, number>)[key]);
        }
      }
    }
    if (vm.lastError && Date.now() - vm.lastError.atMs < 4000) {
      this.notice.textContent = `${vm.lastError.code}: ${vm.lastError.detail}`;
      this.notice.classList.add("visible");
    } else {
      this.notice.classList.remove("visible");
    }
  }
}

// --- player game panel --------------------------------------------------------

export class GamePanel {
  readonly root = el("section", "panel game-panel");
  private customer = el("div", "customer-card");
  private cueBanner = el("div", "drink-cue");
  private controls = el("div", "controls");
  private feedbackOverlay = el("div", "feedback-overlay");
  private lastCueIndex = -1;
  private feedbackShownFor = -1;

  constructor(private readonly controller: GamePanelController) {
    this.root.append(
      el("h2", "", "Pizza chef"),
      this.customer,
      this.cueBanner,
      this.controls,
      this.feedbackOverlay,
    );
  }

  render(vm: ViewModel): void {
    const order = vm.currentOrder;
    this.customer.replaceChildren();
    if (order) {
      this.customer.append(
        el("div", "customer-name", `${order.customer_id} (${order.order_index + 1}/${order.total_orders})`),
      );
      const showIngredients = vm.phase !== "selecting_ingredients";
      const chips = el("div", "chips");
      for (const name of order.ingredients) {
        chips.append(el("span", "chip", showIngredients ? name : "?"));
      }
      this.customer.append(chips);
      if (order.order_index !== this.lastCueIndex) {
        this.lastCueIndex = order.order_index;
        beep();
      }
      this.cueBanner.textContent = `Drink order: "${order.drink_cue}"`;
    }

    this.controls.replaceChildren();
    if (vm.phase === "judging") {
      this.controls.append(
        el("p", "prompt", "Same drink as the order before?"),
        this.button("Yes", () => this.controller.clickJudgment(true)),
        this.button("No", () => this.controller.clickJudgment(false)),
      );
    } else if (vm.phase === "selecting_drink" && vm.config) {
      this.controls.append(el("p", "prompt", "Pour the drink:"));
      for (const drink of vm.config.drink_vocab) {
        this.controls.append(this.button(drink, () => this.controller.clickDrink(drink)));
      }
    } else if (vm.phase === "selecting_ingredients" && vm.config) {
      this.controls.append(
        el("p", "prompt", `Build the pizza from memory (${this.controller.expectedIngredientCount} ingredients):`),
      );
      const grid = el("div", "ingredient-grid");
      for (const name of vm.config.ingredient_vocab) {
        const button = this.button(name, () => {
          this.controller.toggleIngredient(name);
          button.classList.toggle("selected", this.controller.selection.has(name));
        });
        button.classList.toggle("selected", this.controller.selection.has(name));
        grid.append(button);
      }
      const validate = this.button("Validate order", () => {
        const result = this.controller.clickValidate();
        if (result === "confirm") {
          const missing = this.controller.expectedIngredientCount - this.controller.selection.size;
          if (window.confirm(`Only ${this.controller.selection.size} selected (${missing} missing). Send anyway?`)) {
            this.controller.clickConfirm();
          }
        }
      });
      validate.classList.add("validate");
      this.controls.append(grid, validate);
    } else if (vm.phase === "finished") {
      this.controls.append(el("p", "prompt", "Time! The truck is closed."));
    }

    if (vm.lastFeedback && vm.lastFeedback.order_index !== this.feedbackShownFor) {
      this.feedbackShownFor = vm.lastFeedback.order_index;
      const happy = vm.lastFeedback.feedback === "positive";
      this.feedbackOverlay.textContent = happy ? "😊 Perfect order!" : "😠 Wrong order!";
      this.feedbackOverlay.className = `feedback-overlay visible ${happy ? "positive" : "negative"}`;
      window.setTimeout(() => this.feedbackOverlay.classList.remove("visible"), 1500);
    }
    if (vm.lastError && Date.now() - vm.lastError.atMs < 600) {
      this.root.classList.add("shake");
      window.setTimeout(() => this.root.classList.remove("shake"), 600);
    }
  }

  private button(label: string, onClick: () => void): HTMLButtonElement {
    const button = el("button", "", label);
    button.addEventListener("click", onClick);
    return button;
  }
}

// --- spectator display ---------------------------------------------------------

export class SpectatorPanel {
  readonly root = el("section", "panel spectator-panel");
  private countdown = el("div", "countdown", "--:--");
  private scoreLine = el("div", "score-line");
  private lamp = el("div", "lamp off");
  private lampLabel = el("div", "lamp-label", "no signal");
  private spark: HTMLCanvasElement;
  private phaseLine = el("div", "phase-line");

  constructor() {
    this.spark = document.createElement("canvas");
    this.spark.width = 360;
    this.spark.height = 80;
    this.spark.className = "sparkline";
    const gauge = el("div", "gauge");
    gauge.append(this.lamp, this.lampLabel, this.spark);
    this.root.append(
      el("h2", "", "Spectators"),
      this.countdown,
      this.phaseLine,
      this.scoreLine,
      el("h3", "", "Mental workload"),
      gauge,
    );
  }

  render(vm: ViewModel, nowMs: number): void {
    if (vm.countdownS !== null) {
      const m = Math.floor(vm.countdownS / 60);
      const s = Math.floor(vm.countdownS % 60);
      this.countdown.textContent = `${m}:${String(s).padStart(2, "0")}`;
    }
    this.phaseLine.textContent = vm.sessionEnded
      ? "session over"
      : vm.phase
        ? `phase: ${vm.phase}${vm.phaseOrderIndex !== null ? ` (order ${vm.phaseOrderIndex + 1})` : ""}`
        : "waiting for the game";
    if (vm.score) {
      this.scoreLine.textContent =
        `orders ${vm.score.orders_correct}/${vm.score.orders_completed} correct, ` +
        `mean response ${(vm.score.mean_response_time_ms / 1000).toFixed(1)} s`;
    }

    const state: LampState = lampState(vm, nowMs);
    this.lamp.className = `lamp ${state}`;
    this.lampLabel.textContent =
      state === "off" ? "no signal" : state === "stale" ? "signal lost" : state;

    const ctx = this.spark.getContext("2d");
    if (ctx) {
      ctx.clearRect(0, 0, this.spark.width, this.spark.height);
      ctx.strokeStyle = "#8ab";
      ctx.fillStyle = "#8ab";
      const points = sparklinePoints(vm.workloadHistory, this.spark.width, this.spark.height);
      for (const p of points) {
        ctx.beginPath();
        ctx.arc(p.x, p.y, 2.2, 0, 2 * Math.PI);
        if (p.hollow) {
          ctx.stroke();
        } else {
          ctx.fill();
        }
      }
      // Threshold line at relative index 1.5 (overload boundary).
      ctx.strokeStyle = "#a55";
      ctx.setLineDash([4, 3]);
      ctx.beginPath();
      const yThreshold = this.spark.height - (1.5 / 3.0) * this.spark.height;
      ctx.moveTo(0, yThreshold);
      ctx.lineTo(this.spark.width, yThreshold);
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }
}
