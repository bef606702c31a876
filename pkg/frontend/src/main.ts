/** Browser shell: file loading, track panels, and the animation loop.
 *
 * All state transitions go through the pure functions in playback.ts; this
 * file only owns DOM plumbing. The scene object is never modified after
 * validation.
 */

import {
  LoadedScene,
  advance,
  loadScene,
  maxFrames,
  pause,
  play,
  scrub,
  setSpeed,
  togglePlaying,
  trackFrameIndex,
} from "./playback";
import { DEFAULT_CAMERA, DrawSurface, renderTrack } from "./render";
import { SchemaError, SceneTrack } from "./scene";

interface Panel {
  canvas: HTMLCanvasElement;
  frameLabel: HTMLElement;
  track: SceneTrack;
}

let current: LoadedScene | null = null;
let panels: Panel[] = [];
let lastTick = 0;
let needsRedraw = false;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function canvasSurface(ctx: CanvasRenderingContext2D): DrawSurface {
  return {
    line(x1, y1, x2, y2, color, width) {
      ctx.strokeStyle = color;
      ctx.lineWidth = width;
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
    },
    circle(x, y, radius, color) {
      ctx.fillStyle = color;
      ctx.beginPath();
      ctx.arc(x, y, radius, 0, Math.PI * 2);
      ctx.fill();
    },
  };
}

function formatBadge(name: string, value: number): string {
  const rounded = Math.abs(value) >= 100 ? value.toFixed(1) : value.toPrecision(3);
  return `${name}: ${rounded}`;
}

function buildPanels(loaded: LoadedScene): void {
  const grid = byId<HTMLDivElement>("tracks");
  grid.textContent = "";
  panels = loaded.scene.tracks.map((track) => {
    const panel = document.createElement("section");
    panel.className = "panel";

    const title = document.createElement("h2");
    title.textContent = track.clip_id;
    panel.appendChild(title);

    const canvas = document.createElement("canvas");
    canvas.width = 320;
    canvas.height = 340;
    panel.appendChild(canvas);

    const frameLabel = document.createElement("div");
    frameLabel.className = "frame-label";
    panel.appendChild(frameLabel);

    const caption = document.createElement("p");
    caption.className = "caption";
    caption.textContent = track.caption;
    panel.appendChild(caption);

    const badgeRow = document.createElement("div");
    badgeRow.className = "badges";
    for (const [name, value] of Object.entries(track.badges)) {
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.textContent = formatBadge(name, value);
      badgeRow.appendChild(badge);
    }
    panel.appendChild(badgeRow);

    grid.appendChild(panel);
    return { canvas, frameLabel, track };
  });
}

function redraw(): void {
  if (!current) {
    return;
  }
  const frame = current.playback.frame;
  for (const panel of panels) {
    const ctx = panel.canvas.getContext("2d");
    if (!ctx) {
      continue;
    }
    ctx.clearRect(0, 0, panel.canvas.width, panel.canvas.height);
    renderTrack(
      canvasSurface(ctx),
      panel.track,
      current.scene.skeleton.parents,
      frame,
      DEFAULT_CAMERA,
      { width: panel.canvas.width, height: panel.canvas.height },
    );
    const shown = trackFrameIndex(panel.track, frame);
    panel.frameLabel.textContent = `frame ${shown} / ${panel.track.frames.length - 1}`;
  }
  const slider = byId<HTMLInputElement>("scrub");
  slider.value = String(Math.floor(frame));
  byId("clock").textContent = `${Math.floor(frame)} / ${maxFrames(current.scene) - 1}`;
  byId<HTMLButtonElement>("play-toggle").textContent = current.playback.playing
    ? "pause"
    : "play";
}

function setScene(loaded: LoadedScene): void {
  current = loaded;
  byId("error").textContent = "";
  byId<HTMLDivElement>("controls").hidden = false;
  const slider = byId<HTMLInputElement>("scrub");
  slider.max = String(maxFrames(loaded.scene) - 1);
  slider.value = "0";
  buildPanels(loaded);
  needsRedraw = true;
}

function showError(err: unknown): void {
  const box = byId("error");
  if (err instanceof SchemaError) {
    box.textContent = `rejected: ${err.message}`;
  } else {
    box.textContent = `failed to load: ${(err as Error).message}`;
  }
}

function loadText(text: string): void {
  try {
    setScene(loadScene(JSON.parse(text)));
  } catch (err) {
    showError(err);
  }
}

function loadFile(file: File): void {
  file
    .text()
    .then(loadText)
    .catch((err) => showError(err));
}

function tick(now: number): void {
  if (current) {
    const dt = lastTick ? (now - lastTick) / 1000 : 0;
    if (current.playback.playing) {
      current = advance(current, dt);
      needsRedraw = true;
    }
    if (needsRedraw) {
      redraw();
      needsRedraw = false;
    }
  }
  lastTick = now;
  requestAnimationFrame(tick);
}

function wireControls(): void {
  const fileInput = byId<HTMLInputElement>("file-input");
  fileInput.addEventListener("change", () => {
    if (fileInput.files && fileInput.files[0]) {
      loadFile(fileInput.files[0]);
    }
  });

  const dropZone = byId<HTMLDivElement>("drop-zone");
  dropZone.addEventListener("dragover", (ev) => {
    ev.preventDefault();
    dropZone.classList.add("hover");
  });
  dropZone.addEventListener("dragleave", () => dropZone.classList.remove("hover"));
  dropZone.addEventListener("drop", (ev) => {
    ev.preventDefault();
    dropZone.classList.remove("hover");
    const file = ev.dataTransfer?.files?.[0];
    if (file) {
      loadFile(file);
    }
  });

  byId<HTMLButtonElement>("play-toggle").addEventListener("click", () => {
    if (current) {
      current = togglePlaying(current);
      needsRedraw = true;
    }
  });

  const slider = byId<HTMLInputElement>("scrub");
  slider.addEventListener("input", () => {
    if (current) {
      current = scrub(current, Number(slider.value));
      needsRedraw = true;
    }
  });

  byId<HTMLSelectElement>("speed").addEventListener("change", (ev) => {
    if (current) {
      const value = Number((ev.target as HTMLSelectElement).value);
      current = setSpeed(current, value);
    }
  });

  document.addEventListener("keydown", (ev) => {
    if (!current) {
      return;
    }
    if (ev.key === " ") {
      ev.preventDefault();
      current = togglePlaying(current);
      needsRedraw = true;
    } else if (ev.key === "ArrowRight") {
      current = scrub(current, Math.floor(current.playback.frame) + 1);
      needsRedraw = true;
    } else if (ev.key === "ArrowLeft") {
      current = scrub(current, Math.floor(current.playback.frame) - 1);
      needsRedraw = true;
    }
  });
}

export function start(): void {
  wireControls();
  requestAnimationFrame(tick);
}

if (typeof document !== "undefined" && document.getElementById("drop-zone")) {
  start();
}

export { loadText, pause, play };
