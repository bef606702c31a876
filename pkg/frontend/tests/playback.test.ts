import { describe, expect, it } from "vitest";

import {
  MAX_SPEED,
  MIN_SPEED,
  advance,
  clockFps,
  displayedFrame,
  loadScene,
  maxFrames,
  pause,
  play,
  scrub,
  setSpeed,
  togglePlaying,
  trackFrameIndex,
} from "../src/playback";
import { Scene } from "../src/scene";
import { goldenScene } from "./scene.test";

function frame(joints: number, value: number) {
  return Array.from({ length: joints }, () => [value, value, value] as [number, number, number]);
}

function twoTrackScene(): Scene {
  // track a: 10 frames at 30 fps; track b: 4 frames at 15 fps
  return {
    version: 1,
    skeleton: { parents: [-1, 0], names: ["root", "tip"] },
    tracks: [
      {
        clip_id: "a",
        fps: 30,
        caption: "",
        badges: {},
        frames: Array.from({ length: 10 }, (_, i) => frame(2, i)),
      },
      {
        clip_id: "b",
        fps: 15,
        caption: "",
        badges: {},
        frames: Array.from({ length: 4 }, (_, i) => frame(2, 10 + i)),
      },
    ],
  };
}

describe("loadScene", () => {
  it("starts paused at frame 0, speed 1", () => {
    const loaded = loadScene(twoTrackScene());
    expect(loaded.playback).toEqual({ frame: 0, playing: false, speed: 1 });
  });

  it("validates on the way in", () => {
    expect(() => loadScene({ version: 7 })).toThrowError(/scene\.version/);
  });
});

describe("scrubbing", () => {
  it("scrub to frame 7 of the golden scene displays frame 7 exactly", () => {
    const scene = goldenScene();
    const loaded = scrub(loadScene(scene), 7);
    expect(loaded.playback.frame).toBe(7);
    const shown = displayedFrame(loaded.scene.tracks[0], loaded.playback.frame);
    // identical values, coordinate for coordinate, against the raw file data
    expect(shown).toEqual(scene.tracks[0].frames[7]);
    expect(shown[0][0]).toBe(scene.tracks[0].frames[7][0][0]);
    expect(shown[23][2]).toBe(scene.tracks[0].frames[7][23][2]);
  });

  it("pauses playback", () => {
    const loaded = play(loadScene(twoTrackScene()));
    expect(loaded.playback.playing).toBe(true);
    expect(scrub(loaded, 3).playback.playing).toBe(false);
  });

  it("clamps to the longest track range", () => {
    const loaded = loadScene(twoTrackScene());
    expect(scrub(loaded, 99).playback.frame).toBe(9);
    expect(scrub(loaded, -5).playback.frame).toBe(0);
  });

  it("floors fractional input", () => {
    const loaded = loadScene(twoTrackScene());
    expect(scrub(loaded, 4.9).playback.frame).toBe(4);
  });

  it("shorter tracks hold their last frame", () => {
    const loaded = scrub(loadScene(twoTrackScene()), 8);
    const [long, short] = loaded.scene.tracks;
    expect(trackFrameIndex(long, loaded.playback.frame)).toBe(8);
    expect(trackFrameIndex(short, loaded.playback.frame)).toBe(3);
    expect(displayedFrame(short, loaded.playback.frame)).toEqual(
      short.frames[3],
    );
  });

  it("never mutates the scene", () => {
    const scene = twoTrackScene();
    const pristine = JSON.stringify(scene);
    let loaded = loadScene(scene);
    loaded = play(loaded);
    loaded = advance(loaded, 0.5);
    loaded = scrub(loaded, 2);
    loaded = setSpeed(loaded, 4);
    expect(JSON.stringify(loaded.scene)).toBe(pristine);
  });
});

describe("play, pause, speed", () => {
  it("play resumes from the scrubbed frame", () => {
    let loaded = scrub(loadScene(twoTrackScene()), 5);
    loaded = play(loaded);
    expect(loaded.playback.playing).toBe(true);
    expect(loaded.playback.frame).toBe(5);
  });

  it("toggle flips the playing flag", () => {
    const loaded = loadScene(twoTrackScene());
    expect(togglePlaying(loaded).playback.playing).toBe(true);
    expect(togglePlaying(togglePlaying(loaded)).playback.playing).toBe(false);
  });

  it("pause keeps the frame", () => {
    let loaded = play(scrub(loadScene(twoTrackScene()), 6));
    loaded = play(loaded);
    loaded = pause(loaded);
    expect(loaded.playback).toMatchObject({ frame: 6, playing: false });
  });

  it("speed is clamped to the legal range", () => {
    const loaded = loadScene(twoTrackScene());
    expect(setSpeed(loaded, 0).playback.speed).toBe(MIN_SPEED);
    expect(setSpeed(loaded, 100).playback.speed).toBe(MAX_SPEED);
    expect(setSpeed(loaded, 2).playback.speed).toBe(2);
  });
});

describe("advance", () => {
  it("does nothing while paused", () => {
    const loaded = loadScene(twoTrackScene());
    expect(advance(loaded, 1.0)).toBe(loaded);
  });

  it("moves one frame per 1/fps seconds at speed 1", () => {
    let loaded = play(loadScene(twoTrackScene()));
    loaded = advance(loaded, 1 / 30);
    expect(loaded.playback.frame).toBeCloseTo(1, 9);
  });

  it("scales with the speed multiplier", () => {
    let loaded = setSpeed(play(loadScene(twoTrackScene())), 2);
    loaded = advance(loaded, 1 / 30);
    expect(loaded.playback.frame).toBeCloseTo(2, 9);
  });

  it("uses the longest track's clock", () => {
    expect(clockFps(twoTrackScene())).toBe(30);
  });

  it("loops past the end", () => {
    let loaded = play(loadScene(twoTrackScene()));
    loaded = advance(loaded, 1.0); // 30 frames forward in a 10-frame scene
    const span = maxFrames(loaded.scene);
    expect(loaded.playback.frame).toBeGreaterThanOrEqual(0);
    expect(loaded.playback.frame).toBeLessThanOrEqual(span - 1);
  });

  it("stays in range across many random ticks", () => {
    let loaded = setSpeed(play(loadScene(twoTrackScene())), 4);
    let seed = 1234567;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let i = 0; i < 500; i++) {
      loaded = advance(loaded, rand() * 0.2);
      expect(loaded.playback.frame).toBeGreaterThanOrEqual(0);
      expect(loaded.playback.frame).toBeLessThanOrEqual(9);
    }
  });
});
