/** Browser entry point: wires the socket, canvases, and controls together. */
import { SteeringClient, serviceUrl, type SocketLike } from "./client.js";
import { renderChart } from "./chart.js";
import { renderWorld, type Context2DLike } from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const url = serviceUrl(window.location.search);
  const socket = new WebSocket(url) as unknown as SocketLike;
  const client = new SteeringClient(socket);

  const world = el<HTMLCanvasElement>("world");
  const chart = el<HTMLCanvasElement>("chart");
  const banner = el<HTMLDivElement>("banner");
  const readout = el<HTMLDivElement>("readout");
  const toast = el<HTMLDivElement>("toast");
  const kInput = el<HTMLInputElement>("k");
  const recruitBtn = el<HTMLButtonElement>("recruit");
  const releaseBtn = el<HTMLButtonElement>("release");
  const pauseBtn = el<HTMLButtonElement>("pause");
  const resetBtn = el<HTMLButtonElement>("reset");

  let lastShownError: string | null = null;

  recruitBtn.onclick = () => {
    if (!client.sendRecruit(Number(kInput.value))) {
      toast.textContent = "recruit needs a whole number k >= 1";
    }
  };
  releaseBtn.onclick = () => {
    if (!client.sendRelease(Number(kInput.value))) {
      toast.textContent = "release needs a whole number k >= 1";
    }
  };
  pauseBtn.onclick = () => {
    const snap = client.state.latest;
    if (snap?.paused) client.sendResume();
    else client.sendPause();
  };
  resetBtn.onclick = () => client.sendReset();

  function frame(): void {
    client.tick();
    const state = client.state;
    const snap = state.latest;

    banner.textContent =
      state.status === "connected"
        ? ""
        : state.status === "connecting"
          ? `connecting to ${url} ...`
          : "disconnected - data is stale";
    banner.className = state.status;

    const busy = !state.controlsEnabled;
    recruitBtn.disabled = busy;
    releaseBtn.disabled = busy;
    pauseBtn.disabled = busy;
    resetBtn.disabled = busy;

    if (state.lastError && state.lastError !== lastShownError) {
      toast.textContent = state.lastError;
      lastShownError = state.lastError;
    }

    if (snap) {
      pauseBtn.textContent = snap.paused ? "resume" : "pause";
      readout.textContent =
        `t = ${snap.t.toFixed(1)} s | energy ${snap.energy.toFixed(1)} / ${snap.capacity}` +
        ` | urgency ${snap.theta.toFixed(3)} | active ${snap.active_n}` +
        ` | foragers ${snap.n_foragers} (expected ${snap.expected_n.toFixed(2)})`;
      const wctx = world.getContext("2d") as unknown as Context2DLike;
      renderWorld(wctx, snap, world.width, world.height);
      const cctx = chart.getContext("2d") as unknown as Context2DLike;
      renderChart(
        cctx,
        state.history.toArray(),
        snap.capacity,
        Math.max(snap.active_n, 1),
        chart.width,
        chart.height,
      );
    }
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

main();
