import type { EditSession, ModelInfo, PcaEditParams, StyleMixParams } from "./types.js";

/** Fresh defaults for a model: truncation 1.0, no mixing, no edits. */
export function defaultSession(model: ModelInfo): EditSession {
  return {
    model_id: model.model_id,
    latent_seed: 0,
    noise_seed: 0,
    truncation: 1.0,
    pca_edits: [],
  };
}

/** Deep, immutable-friendly copy; history snapshots rely on this. */
export function cloneSession(session: EditSession): EditSession {
  return {
    ...session,
    style_mix: session.style_mix ? { ...session.style_mix } : undefined,
    pca_edits: session.pca_edits.map((e: PcaEditParams) => ({ ...e })),
  };
}

/** Canonical JSON (sorted keys, no undefined) — equal sessions serialize
 * identically, so this doubles as the request body and the export format. */
export function canonicalSession(session: EditSession): string {
  const sortValue = (value: unknown): unknown => {
    if (Array.isArray(value)) return value.map(sortValue);
    if (value && typeof value === "object") {
      const entries = Object.entries(value as Record<string, unknown>)
        .filter(([, v]) => v !== undefined)
        .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
      return Object.fromEntries(entries.map(([k, v]) => [k, sortValue(v)]));
    }
    return value;
  };
  return JSON.stringify(sortValue(session));
}

export function sessionsEqual(a: EditSession, b: EditSession): boolean {
  return canonicalSession(a) === canonicalSession(b);
}

export function withStyleMix(session: EditSession, mix: StyleMixParams | undefined): EditSession {
  const next = cloneSession(session);
  next.style_mix = mix ? { ...mix } : undefined;
  return next;
}
