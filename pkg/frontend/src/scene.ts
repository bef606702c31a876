/** Scene file schema (version 1) and validation.
 *
 * A scene is fully self-contained: skeleton topology plus per-track frame
 * data live inline, so the viewer never needs a second file. Validation
 * errors carry the JSON path of the offending node, e.g.
 * "scene.tracks[0].frames[2]".
 */

export const SCENE_VERSION = 1;
export const MAX_TRACKS = 16;

export type Vec3 = [number, number, number];
export type Frame = Vec3[];

export interface SceneSkeleton {
  parents: number[];
  names: string[];
}

export interface SceneTrack {
  clip_id: string;
  fps: number;
  caption: string;
  badges: Record<string, number>;
  frames: Frame[];
}

export interface Scene {
  version: number;
  skeleton: SceneSkeleton;
  tracks: SceneTrack[];
}

export class SchemaError extends Error {
  readonly path: string;

  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "SchemaError";
    this.path = path;
  }
}

function isObject(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function checkBadges(raw: unknown, where: string): Record<string, number> {
  if (raw === undefined) {
    return {};
  }
  if (!isObject(raw)) {
    throw new SchemaError(where, "expected an object of metric values");
  }
  for (const [name, value] of Object.entries(raw)) {
    if (!isFiniteNumber(value)) {
      throw new SchemaError(`${where}.${name}`, "expected a finite number");
    }
  }
  return raw as Record<string, number>;
}

function checkTrack(raw: unknown, index: number, numJoints: number): SceneTrack {
  const where = `scene.tracks[${index}]`;
  if (!isObject(raw)) {
    throw new SchemaError(where, "expected an object");
  }
  if (typeof raw.clip_id !== "string") {
    throw new SchemaError(`${where}.clip_id`, "expected a string");
  }
  if (!isFiniteNumber(raw.fps) || raw.fps <= 0) {
    throw new SchemaError(`${where}.fps`, "expected a positive number");
  }
  if (raw.caption !== undefined && typeof raw.caption !== "string") {
    throw new SchemaError(`${where}.caption`, "expected a string");
  }
  const badges = checkBadges(raw.badges, `${where}.badges`);
  const frames = raw.frames;
  if (!Array.isArray(frames) || frames.length === 0) {
    throw new SchemaError(`${where}.frames`, "expected a non-empty array");
  }
  frames.forEach((frame, f) => {
    if (!Array.isArray(frame) || frame.length !== numJoints) {
      const got = Array.isArray(frame) ? `${frame.length} joints` : typeof frame;
      throw new SchemaError(
        `${where}.frames[${f}]`,
        `expected ${numJoints} joints, got ${got}`,
      );
    }
    frame.forEach((joint: unknown, j: number) => {
      if (
        !Array.isArray(joint) ||
        joint.length !== 3 ||
        !joint.every(isFiniteNumber)
      ) {
        throw new SchemaError(`${where}.frames[${f}][${j}]`, "expected [x, y, z]");
      }
    });
  });
  return {
    clip_id: raw.clip_id,
    fps: raw.fps,
    caption: typeof raw.caption === "string" ? raw.caption : "",
    badges,
    frames: frames as Frame[],
  };
}

/** Validate an arbitrary parsed JSON value against the scene schema. */
export function validateScene(raw: unknown): Scene {
  if (!isObject(raw)) {
    throw new SchemaError("scene", "expected an object");
  }
  if (raw.version !== SCENE_VERSION) {
    throw new SchemaError(
      "scene.version",
      `expected ${SCENE_VERSION}, got ${JSON.stringify(raw.version)}`,
    );
  }
  const skeleton = raw.skeleton;
  if (!isObject(skeleton)) {
    throw new SchemaError("scene.skeleton", "expected an object");
  }
  const parents = skeleton.parents;
  if (
    !Array.isArray(parents) ||
    parents.length === 0 ||
    !parents.every((p) => Number.isInteger(p))
  ) {
    throw new SchemaError(
      "scene.skeleton.parents",
      "expected a non-empty array of joint indices",
    );
  }
  const names = skeleton.names;
  if (!Array.isArray(names) || names.length !== parents.length) {
    throw new SchemaError("scene.skeleton.names", "must match parents length");
  }
  if (!names.every((n) => typeof n === "string")) {
    throw new SchemaError("scene.skeleton.names", "expected strings");
  }
  const tracks = raw.tracks;
  if (!Array.isArray(tracks)) {
    throw new SchemaError("scene.tracks", "expected an array");
  }
  if (tracks.length > MAX_TRACKS) {
    throw new SchemaError(
      "scene.tracks",
      `${tracks.length} tracks exceed the ${MAX_TRACKS} limit`,
    );
  }
  return {
    version: SCENE_VERSION,
    skeleton: { parents: parents as number[], names: names as string[] },
    tracks: tracks.map((t, i) => checkTrack(t, i, parents.length)),
  };
}

/** Parse scene JSON text; JSON syntax errors surface as SchemaError too. */
export function parseScene(text: string): Scene {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError("scene", `not valid JSON (${(err as Error).message})`);
  }
  return validateScene(raw);
}
