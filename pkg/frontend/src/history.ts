import type { EditSession } from "./types.js";
import { cloneSession } from "./session.js";

/** Lossless edit history: a stack of immutable session snapshots.
 * Navigation restores exact prior sessions; the server's determinism then
 * restores exact prior images. */
export class SessionHistory {
  private past: EditSession[] = [];
  private future: EditSession[] = [];
  private current: EditSession | null = null;

  get present(): EditSession | null {
    return this.current ? cloneSession(this.current) : null;
  }

  canUndo(): boolean {
    return this.past.length > 0;
  }

  canRedo(): boolean {
    return this.future.length > 0;
  }

  push(session: EditSession): void {
    if (this.current) this.past.push(this.current);
    this.current = cloneSession(session);
    this.future = [];
  }

  undo(): EditSession | null {
    const prev = this.past.pop();
    if (!prev) return null;
    if (this.current) this.future.push(this.current);
    this.current = prev;
    return cloneSession(prev);
  }

  redo(): EditSession | null {
    const next = this.future.pop();
    if (!next) return null;
    if (this.current) this.past.push(this.current);
    this.current = next;
    return cloneSession(next);
  }

  depth(): { undo: number; redo: number } {
    return { undo: this.past.length, redo: this.future.length };
  }
}
