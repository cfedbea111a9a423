// Bootstrap: pick a role from the URL, connect, wire panels to state.
//
//   index.html?ws=ws://127.0.0.1:8765/ws&role=player&session=live-...

import { GamePanelController } from "./game_logic.js";
import { ConfigPanel, GamePanel, SpectatorPanel } from "./panels.js";
import { subscribe, type ClientMessage, type Role, type ServerMessage } from "./protocol.js";
import { SocketClient } from "./socket.js";
import { applyMessage, initialViewModel, setConnection, type ViewModel } from "./state.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

async function discoverSessionId(wsUrl: string): Promise<string> {
  // The server's /health endpoint names the one session it hosts.
  try {
    const healthUrl = wsUrl.replace(/^ws/, "http").replace(/\/ws$/, "/health");
    const response = await fetch(healthUrl);
    const body = (await response.json()) as { session_id?: string };
    return body.session_id ?? "live";
  } catch {
    return "live";
  }
}

async function main(): Promise<void> {
  const wsUrl = param("ws", `ws://${window.location.hostname}:8765/ws`);
  const view = param("role", "spectator"); // player | spectator | config
  const sessionId = param("session", "") || (await discoverSessionId(wsUrl));

  let vm: ViewModel = initialViewModel();
  const knownSessionId = sessionId;

  const statusLine = document.createElement("div");
  statusLine.className = "status-line";
  document.body.append(statusLine);

  const send = (message: ClientMessage): void => {
    socket.send({ ...message, session_id: knownSessionId });
  };

  const controller = new GamePanelController(knownSessionId, send);
  const configPanel = new ConfigPanel(knownSessionId, send);
  const gamePanel = new GamePanel(controller);
  const spectatorPanel = new SpectatorPanel();

  if (view === "config") {
    document.body.append(configPanel.root, spectatorPanel.root);
  } else if (view === "player") {
    document.body.append(gamePanel.root, spectatorPanel.root);
  } else {
    document.body.append(spectatorPanel.root);
  }

  const render = (): void => {
    statusLine.textContent = `${vm.connection} · ${wsUrl}`;
    statusLine.className = `status-line ${vm.connection}`;
    const now = Date.now();
    if (view === "config") configPanel.render(vm);
    if (view === "player") gamePanel.render(vm);
    spectatorPanel.render(vm, now);
  };

  const socket = new SocketClient(
    wsUrl,
    (message: ServerMessage) => {
      vm = applyMessage(vm, message, Date.now());
      controller.onMessage(message);
      render();
    },
    (state) => {
      vm = setConnection(vm, state);
      if (state === "open") {
        const role: Role = view === "player" ? "player" : "spectator";
        socket.send(subscribe(knownSessionId, role));
      }
      render();
    },
  );

  // Staleness greying needs periodic redraws even with no traffic.
  window.setInterval(render, 500);
}

void main();
