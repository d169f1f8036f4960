/**
 * Frame player for animation payloads. Frames come fully formed from the
 * service; the player only picks which one is on screen. Scrubbing to the
 * ends lands exactly on the first and last frame, which the service
 * guarantees to be the source and target trees.
 */

import type { GeodesicDoc, GeodesicFrameDoc } from "./documents.js";

export class FramePlayer {
  readonly frames: GeodesicFrameDoc[];
  index = 0;
  playing = false;
  loop = false;
  frameMs: number;
  private accumulated = 0;

  constructor(
    doc: GeodesicDoc,
    private readonly onFrame: (index: number, frame: GeodesicFrameDoc) => void,
    frameMs = 120,
  ) {
    this.frames = doc.frames;
    this.frameMs = frameMs;
  }

  get length(): number {
    return this.frames.length;
  }

  current(): GeodesicFrameDoc {
    return this.frames[this.index];
  }

  /** Jump to the frame nearest the given position on the path. */
  scrubTo(lambda: number): number {
    const last = this.frames.length - 1;
    if (last < 0) return 0;
    let index: number;
    if (lambda <= 0) {
      index = 0;
    } else if (lambda >= 1) {
      index = last;
    } else {
      let best = 0;
      let gap = Infinity;
      this.frames.forEach((frame, k) => {
        const d = Math.abs(frame.lambda - lambda);
        if (d < gap) {
          gap = d;
          best = k;
        }
      });
      index = best;
    }
    this.show(index);
    return index;
  }

  show(index: number): void {
    const clamped = Math.max(0, Math.min(this.frames.length - 1, index));
    this.index = clamped;
    this.onFrame(clamped, this.frames[clamped]);
  }

  play(): void {
    if (this.frames.length < 2) return;
    if (this.index >= this.frames.length - 1) this.show(0);
    this.playing = true;
    this.accumulated = 0;
  }

  pause(): void {
    this.playing = false;
  }

  toggle(): void {
    if (this.playing) this.pause();
    else this.play();
  }

  /** Advance by elapsed milliseconds; call it from the animation loop. */
  step(dtMs: number): void {
    if (!this.playing) return;
    this.accumulated += dtMs;
    while (this.accumulated >= this.frameMs) {
      this.accumulated -= this.frameMs;
      if (this.index < this.frames.length - 1) {
        this.show(this.index + 1);
        if (this.index === this.frames.length - 1 && !this.loop) {
          // Landed on the target; stop right away instead of next tick.
          this.playing = false;
          return;
        }
      } else if (this.loop) {
        this.show(0);
      } else {
        this.playing = false;
        return;
      }
    }
  }
}
