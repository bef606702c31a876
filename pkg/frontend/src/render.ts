/** Stick-figure rendering as pure geometry.
 *
 * Everything here is a deterministic function of (frame data, camera,
 * viewport): no clocks, no globals, no reads from the DOM. Drawing goes
 * through the tiny DrawSurface interface so tests can record commands and
 * the browser adapter can forward them to a 2D canvas context.
 */

import { Frame, SceneTrack, Vec3 } from "./scene";
import { displayedFrame } from "./playback";

export interface Camera {
  /** Rotation about the vertical axis, radians. */
  yaw: number;
  /** Downward tilt, radians. */
  pitch: number;
  /** Pixels per meter. */
  zoom: number;
  /** World-space point mapped to the viewport center. */
  center: Vec3;
}

export interface Viewport {
  width: number;
  height: number;
}

export interface ScreenPoint {
  x: number;
  y: number;
  /** Camera-space depth, larger = farther; usable for paint ordering. */
  depth: number;
}

export interface DrawSurface {
  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void;
  circle(x: number, y: number, radius: number, color: string): void;
}

export const DEFAULT_CAMERA: Camera = {
  yaw: Math.PI / 6,
  pitch: Math.PI / 12,
  zoom: 120,
  center: [0, 0.9, 0],
};

export const BONE_COLOR = "#3a7bd5";
export const JOINT_COLOR = "#1d3f75";
export const GROUND_COLOR = "#d0d0d0";

export function project(p: Vec3, camera: Camera, viewport: Viewport): ScreenPoint {
  const x = p[0] - camera.center[0];
  const y = p[1] - camera.center[1];
  const z = p[2] - camera.center[2];
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const xr = cy * x + sy * z;
  const zr = -sy * x + cy * z;
  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  const yr = cp * y - sp * zr;
  const depth = sp * y + cp * zr;
  return {
    x: viewport.width / 2 + camera.zoom * xr,
    y: viewport.height / 2 - camera.zoom * yr,
    depth,
  };
}

/** [child, parent] index pairs; every non-root joint contributes one bone. */
export function boneSegments(parents: number[]): Array<[number, number]> {
  const bones: Array<[number, number]> = [];
  parents.forEach((parent, child) => {
    if (parent >= 0) {
      bones.push([child, parent]);
    }
  });
  return bones;
}

/** A small reference grid on the ground plane (y = 0). */
export function renderGround(
  surface: DrawSurface,
  camera: Camera,
  viewport: Viewport,
  halfExtent = 1,
  step = 0.5,
): void {
  for (let u = -halfExtent; u <= halfExtent + 1e-9; u += step) {
    const a = project([u, 0, -halfExtent], camera, viewport);
    const b = project([u, 0, halfExtent], camera, viewport);
    surface.line(a.x, a.y, b.x, b.y, GROUND_COLOR, 1);
    const c = project([-halfExtent, 0, u], camera, viewport);
    const d = project([halfExtent, 0, u], camera, viewport);
    surface.line(c.x, c.y, d.x, d.y, GROUND_COLOR, 1);
  }
}

export function renderFrame(
  surface: DrawSurface,
  frame: Frame,
  parents: number[],
  camera: Camera,
  viewport: Viewport,
): void {
  const points = frame.map((p) => project(p, camera, viewport));
  for (const [child, parent] of boneSegments(parents)) {
    const a = points[child];
    const b = points[parent];
    surface.line(a.x, a.y, b.x, b.y, BONE_COLOR, 2);
  }
  for (const point of points) {
    surface.circle(point.x, point.y, 3, JOINT_COLOR);
  }
}

/** Draw the frame a track displays at the given global clock position. */
export function renderTrack(
  surface: DrawSurface,
  track: SceneTrack,
  parents: number[],
  globalFrame: number,
  camera: Camera,
  viewport: Viewport,
): void {
  renderGround(surface, camera, viewport);
  renderFrame(surface, displayedFrame(track, globalFrame), parents, camera, viewport);
}
