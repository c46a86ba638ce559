import { ApiClient, ApiError } from "./api.js";
import { PCA_SLOTS, defaultPcaSlots, slotsToEdits, type PcaSlot } from "./controls.js";
import { SessionHistory } from "./history.js";
import { DebouncedRenderer } from "./scheduler.js";
import { cloneSession, defaultSession } from "./session.js";
import { validateSession, type FieldError } from "./validation.js";
import type { EditSession, ModelInfo, PcaSummary } from "./types.js";

export type AppEvents = {
  onImage?: (pngBytes: Uint8Array, archiveId: string) => void;
  onError?: (message: string) => void;
  onFieldErrors?: (errors: FieldError[]) => void;
  onState?: (app: ConsoleApp) => void;
};

/** Headless console core: state, validation, history, and the single-flight
 * render loop. The DOM layer only forwards events into this class. */
export class ConsoleApp {
  models: ModelInfo[] = [];
  model: ModelInfo | null = null;
  pcaSummary: PcaSummary | null = null;
  session: EditSession | null = null;
  slots: PcaSlot[] = defaultPcaSlots();
  history = new SessionHistory();
  lastImage: Uint8Array | null = null;
  lastArchiveId: string | null = null;
  lastError: string | null = null;
  private renderer: DebouncedRenderer<EditSession>;

  constructor(private api: ApiClient, private events: AppEvents = {}, debounceMs = 150) {
    this.renderer = new DebouncedRenderer<EditSession>(
      (session, signal) => this.renderNow(session, signal), debounceMs);
  }

  get maxObservedInFlight(): number {
    return this.renderer.maxObservedInFlight;
  }

  async init(): Promise<void> {
    this.models = await this.api.models();
    if (this.models.length === 0) {
      this.fail("no models available");
      return;
    }
    await this.selectModel(this.models[0]!.model_id);
  }

  async selectModel(modelId: string): Promise<void> {
    const model = this.models.find((m) => m.model_id === modelId);
    if (!model) {
      this.fail(`unknown model ${modelId}`);
      return;
    }
    this.model = model;
    this.pcaSummary = await this.api.pca(modelId, PCA_SLOTS).catch(() => null);
    this.session = defaultSession(model);
    this.slots = defaultPcaSlots();
    this.history = new SessionHistory();
    await this.renderNow(this.session);
  }

  /** Apply a session mutation and schedule a debounced re-render. */
  update(mutate: (session: EditSession) => void): void {
    if (!this.session || !this.model) return;
    const next = cloneSession(this.session);
    mutate(next);
    next.pca_edits = slotsToEdits(this.slots);
    const errors = validateSession(next, this.model);
    if (errors.length > 0) {
      this.events.onFieldErrors?.(errors);
      return; // invalid input never leaves the client
    }
    this.session = next;
    this.events.onState?.(this);
    this.renderer.request(next);
  }

  setSlot(index: number, patch: Partial<PcaSlot>): void {
    const slot = this.slots[index];
    if (!slot) return;
    this.slots[index] = { ...slot, ...patch };
    this.update(() => undefined);
  }

  async undo(): Promise<void> {
    const session = this.history.undo();
    if (session) await this.restore(session);
  }

  async redo(): Promise<void> {
    const session = this.history.redo();
    if (session) await this.restore(session);
  }

  private async restore(session: EditSession): Promise<void> {
    this.session = session;
    await this.renderNow(session, undefined, { pushHistory: false });
    this.events.onState?.(this);
  }

  async downloadLatent(): Promise<Uint8Array | null> {
    if (!this.lastArchiveId) return null;
    return this.api.downloadLatent(this.lastArchiveId);
  }

  /** Upload an archive; on architecture mismatch the server's message names
   * the model the archive needs, and local state stays untouched. */
  async uploadLatent(blob: Uint8Array): Promise<boolean> {
    if (!this.model || !this.session) return false;
    try {
      const archiveId = await this.api.uploadLatent(this.model.model_id, blob);
      const next = cloneSession(this.session);
      next.archive_id = archiveId;
      this.session = next;
      await this.renderNow(next);
      return true;
    } catch (err) {
      this.fail(err instanceof ApiError ? err.detail : String(err));
      return false;
    }
  }

  async idle(): Promise<void> {
    await this.renderer.idle();
  }

  private async renderNow(session: EditSession, signal?: AbortSignal,
                          opts: { pushHistory: boolean } = { pushHistory: true }): Promise<void> {
    try {
      const result = await this.api.generatePng(session, signal);
      this.lastImage = result.pngBytes;
      this.lastArchiveId = result.archiveId;
      this.lastError = null;
      if (opts.pushHistory) this.history.push(session);
      this.events.onImage?.(result.pngBytes, result.archiveId);
      this.events.onState?.(this);
    } catch (err) {
      if ((err as Error)?.name === "AbortError") throw err;
      // 4xx/5xx: keep the last image, surface the message
      this.fail(err instanceof ApiError ? err.detail : String(err));
    }
  }

  private fail(message: string): void {
    this.lastError = message;
    this.events.onError?.(message);
  }
}
