/** Playback state machine: pure transitions over an immutable scene.
 *
 * The global clock counts frames of the longest track; shorter tracks
 * simply hold their final frame once the clock passes their end. All
 * transitions return a new state object and never touch the scene.
 */

import { Frame, Scene, SceneTrack, validateScene } from "./scene";

export interface PlaybackState {
  /** Fractional frame position in [0, maxFrames(scene) - 1]. */
  frame: number;
  playing: boolean;
  /** Playback rate multiplier, clamped to [MIN_SPEED, MAX_SPEED]. */
  speed: number;
}

export interface LoadedScene {
  scene: Scene;
  playback: PlaybackState;
}

export const MIN_SPEED = 0.1;
export const MAX_SPEED = 8;

/** Frame count of the longest track; the scrub range is [0, maxFrames - 1]. */
export function maxFrames(scene: Scene): number {
  return scene.tracks.reduce((m, t) => Math.max(m, t.frames.length), 0);
}

/** Clock rate: fps of the longest track (first one on ties). */
export function clockFps(scene: Scene): number {
  let longest = scene.tracks[0];
  for (const track of scene.tracks) {
    if (track.frames.length > longest.frames.length) {
      longest = track;
    }
  }
  return longest.fps;
}

export function loadScene(raw: unknown): LoadedScene {
  const scene = validateScene(raw);
  return { scene, playback: { frame: 0, playing: false, speed: 1 } };
}

function clampFrame(scene: Scene, frame: number): number {
  const last = maxFrames(scene) - 1;
  if (!Number.isFinite(frame)) {
    return 0;
  }
  return Math.min(Math.max(frame, 0), last);
}

/** Jump to a frame. Scrubbing always pauses playback. */
export function scrub(loaded: LoadedScene, frame: number): LoadedScene {
  return {
    scene: loaded.scene,
    playback: {
      ...loaded.playback,
      frame: clampFrame(loaded.scene, Math.floor(frame)),
      playing: false,
    },
  };
}

/** Resume from the current (possibly scrubbed) frame. */
export function play(loaded: LoadedScene): LoadedScene {
  return {
    scene: loaded.scene,
    playback: { ...loaded.playback, playing: true },
  };
}

export function pause(loaded: LoadedScene): LoadedScene {
  return {
    scene: loaded.scene,
    playback: { ...loaded.playback, playing: false },
  };
}

export function togglePlaying(loaded: LoadedScene): LoadedScene {
  return loaded.playback.playing ? pause(loaded) : play(loaded);
}

export function setSpeed(loaded: LoadedScene, speed: number): LoadedScene {
  const clamped = Math.min(Math.max(speed, MIN_SPEED), MAX_SPEED);
  return {
    scene: loaded.scene,
    playback: { ...loaded.playback, speed: clamped },
  };
}

/** Advance the clock by wall time; loops back to 0 past the end. */
export function advance(loaded: LoadedScene, dtSeconds: number): LoadedScene {
  if (!loaded.playback.playing || dtSeconds <= 0) {
    return loaded;
  }
  const span = maxFrames(loaded.scene);
  const step = dtSeconds * clockFps(loaded.scene) * loaded.playback.speed;
  let frame = loaded.playback.frame + step;
  if (frame > span - 1) {
    frame = span > 1 ? frame % (span - 1) : 0;
  }
  return {
    scene: loaded.scene,
    playback: { ...loaded.playback, frame },
  };
}

/** The frame index this track shows for a global clock position. */
export function trackFrameIndex(track: SceneTrack, frame: number): number {
  const idx = Math.floor(frame);
  return Math.min(Math.max(idx, 0), track.frames.length - 1);
}

/** The joint coordinates this track displays at a global clock position. */
export function displayedFrame(track: SceneTrack, frame: number): Frame {
  return track.frames[trackFrameIndex(track, frame)];
}
