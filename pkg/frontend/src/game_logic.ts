// Click-to-message mapping for the player panel, DOM-free.
//
// The controller tracks only what the server pushed (current order,
// current phase) plus the in-progress ingredient selection, which is
// pure input state. It never judges anything: a validate with too few
// ingredients asks for confirmation, then sends anyway and lets the
// server rule.

import {
  submitDrink,
  submitIngredients,
  submitJudgment,
  type ClientMessage,
  type GamePhaseName,
  type OrderPresented,
  type ServerMessage,
} from "./protocol.js";

export type SendFn = (message: ClientMessage) => void;

export class GamePanelController {
  phase: GamePhaseName | null = null;
  order: OrderPresented | null = null;
  selection = new Set<string>();
  private pendingValidate = false;

  constructor(
    private readonly sessionId: string,
    private readonly send: SendFn,
  ) {}

  onMessage(message: ServerMessage): void {
    if (message.type === "order_presented") {
      this.order = message;
      this.selection.clear();
      this.pendingValidate = false;
    } else if (message.type === "phase_changed") {
      this.phase = message.phase;
    }
  }

  get expectedIngredientCount(): number {
    return this.order ? this.order.ingredients.length : 0;
  }

  clickJudgment(judgedYes: boolean): void {
    if (this.phase !== "judging") {
      return; // button is disabled outside its phase
    }
    this.send(submitJudgment(this.sessionId, judgedYes));
  }

  clickDrink(drink: string): void {
    if (this.phase !== "selecting_drink") {
      return;
    }
    this.send(submitDrink(this.sessionId, drink));
  }

  toggleIngredient(name: string): void {
    if (this.phase !== "selecting_ingredients") {
      return;
    }
    if (this.selection.has(name)) {
      this.selection.delete(name);
    } else {
      this.selection.add(name);
    }
    this.pendingValidate = false;
  }

  /**
   * Validate the ingredient selection. Returns "confirm" when the
   * selection is smaller than the order asks for and no confirmation
   * was given yet; calling validate again (or clickConfirm) sends it.
   */
  clickValidate(): "sent" | "confirm" | "ignored" {
    if (this.phase !== "selecting_ingredients") {
      return "ignored";
    }
    if (this.selection.size < this.expectedIngredientCount && !this.pendingValidate) {
      this.pendingValidate = true;
      return "confirm";
    }
    this.pendingValidate = false;
    this.send(submitIngredients(this.sessionId, this.selection));
    return "sent";
  }

  clickConfirm(): void {
    if (this.pendingValidate) {
      this.clickValidate();
    }
  }
}
