import type { EditSession, ModelInfo } from "./types.js";

export type FieldError = { field: string; message: string };

function inRange(value: number, [lo, hi]: [number, number]): boolean {
  return Number.isFinite(value) && value >= lo && value <= hi;
}

function checkRange(errors: FieldError[], field: string, value: number,
                    range: [number, number], integer = false): void {
  if (!inRange(value, range)) {
    errors.push({ field, message: `must be in [${range[0]}, ${range[1]}]` });
  } else if (integer && !Number.isInteger(value)) {
    errors.push({ field, message: "must be an integer" });
  }
}

/** Client-side mirror of the server's checks, built entirely from the
 * ranges the server reported for the model. Invalid sessions are never
 * sent; the server remains the authority. */
export function validateSession(session: EditSession, model: ModelInfo): FieldError[] {
  const r = model.ranges;
  const errors: FieldError[] = [];
  checkRange(errors, "latent_seed", session.latent_seed, r.latent_seed, true);
  checkRange(errors, "noise_seed", session.noise_seed, r.noise_seed, true);
  checkRange(errors, "truncation", session.truncation, r.truncation);
  if (session.style_mix) {
    checkRange(errors, "style_mix.mix_seed", session.style_mix.mix_seed, r.style_mix_seed, true);
    checkRange(errors, "style_mix.cutoff", session.style_mix.cutoff, r.style_mix_cutoff, true);
    checkRange(errors, "style_mix.strength", session.style_mix.strength, r.style_mix_strength);
  }
  if (session.pca_edits.length > r.max_pca_edits) {
    errors.push({ field: "pca_edits", message: `at most ${r.max_pca_edits} edits` });
  }
  session.pca_edits.forEach((edit, i) => {
    checkRange(errors, `pca_edits[${i}].direction`, edit.direction, r.pca_direction, true);
    checkRange(errors, `pca_edits[${i}].weight`, edit.weight, r.pca_weight);
  });
  return errors;
}
