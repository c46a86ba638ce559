/** Debounced, latest-wins request scheduling.
 *
 * Rapid control movement produces at most one in-flight request: a change
 * arriving during the debounce window replaces the pending value, and a
 * change firing mid-flight aborts the running request and waits for it to
 * settle before the next one starts. */

export type RenderFn<T> = (value: T, signal: AbortSignal) => Promise<void>;

export class DebouncedRenderer<T> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: T | null = null;
  private controller: AbortController | null = null;
  private running: Promise<void> = Promise.resolve();
  private inFlightCount = 0;
  maxObservedInFlight = 0;

  constructor(private render: RenderFn<T>, private delayMs = 150) {}

  /** Schedule a render of the latest value after the debounce delay. */
  request(value: T): void {
    this.pending = value;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, this.delayMs);
  }

  /** Resolves when everything scheduled so far has settled. */
  async idle(): Promise<void> {
    while (this.timer !== null || this.pending !== null || this.inFlightCount > 0) {
      if (this.timer !== null) {
        clearTimeout(this.timer);
        this.timer = null;
      }
      await this.fire();
      await this.running;
    }
  }

  private async fire(): Promise<void> {
    const value = this.pending;
    if (value === null) return;
    this.pending = null;
    // kill the in-flight request and wait for it to settle: never two at once
    this.controller?.abort();
    await this.running;
    const controller = new AbortController();
    this.controller = controller;
    this.inFlightCount += 1;
    this.maxObservedInFlight = Math.max(this.maxObservedInFlight, this.inFlightCount);
    this.running = this.render(value, controller.signal)
      .catch((err: unknown) => {
        if ((err as Error)?.name !== "AbortError") throw err;
      })
      .finally(() => {
        this.inFlightCount -= 1;
      });
    await this.running;
  }
}
