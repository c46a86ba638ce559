import type { EditSession, ModelInfo } from "./types.js";

/** One renderable control. The panel is generated from server metadata;
 * if the server changes a range, the UI follows with no code change. */
export type ControlSpec =
  | { kind: "select"; id: string; label: string; options: string[]; value: string }
  | { kind: "seed"; id: string; label: string; min: number; max: number; value: number }
  | { kind: "slider"; id: string; label: string; min: number; max: number;
      step: number; value: number }
  | { kind: "int-field"; id: string; label: string; min: number; max: number; value: number }
  | { kind: "button"; id: string; label: string };

export const PCA_SLOTS = 10;

/** A PCA slider slot: editable direction index plus a weight slider. */
export type PcaSlot = { direction: number; weight: number };

export function defaultPcaSlots(): PcaSlot[] {
  return Array.from({ length: PCA_SLOTS }, (_, i) => ({ direction: i, weight: 0 }));
}

/** Convert the slot array to the session's edit list (zero-weight slots are
 * inactive and not sent). */
export function slotsToEdits(slots: PcaSlot[]): { direction: number; weight: number }[] {
  return slots.filter((s) => s.weight !== 0)
    .map((s) => ({ direction: s.direction, weight: s.weight }));
}

/** Every control the console exposes, in panel order: model selector, the
 * seeds, truncation, the style-mix triple, ten direction/weight slots, and
 * the latent download/upload pair. */
export function buildControlSpecs(
  model: ModelInfo, models: string[], session: EditSession, slots: PcaSlot[],
): ControlSpec[] {
  const r = model.ranges;
  const specs: ControlSpec[] = [
    { kind: "select", id: "model", label: "Model", options: models, value: model.model_id },
    { kind: "seed", id: "latent_seed", label: "Latent Seed",
      min: r.latent_seed[0], max: r.latent_seed[1], value: session.latent_seed },
    { kind: "seed", id: "noise_seed", label: "Noise Seed",
      min: r.noise_seed[0], max: r.noise_seed[1], value: session.noise_seed },
    { kind: "slider", id: "truncation", label: "Truncation",
      min: r.truncation[0], max: r.truncation[1], step: 0.01, value: session.truncation },
    { kind: "seed", id: "style_mix_seed", label: "Style-Mix Seed",
      min: r.style_mix_seed[0], max: r.style_mix_seed[1],
      value: session.style_mix?.mix_seed ?? 0 },
    { kind: "int-field", id: "style_mix_cutoff", label: "Style-Mix Cutoff",
      min: r.style_mix_cutoff[0], max: r.style_mix_cutoff[1],
      value: session.style_mix?.cutoff ?? 0 },
    { kind: "slider", id: "style_mix_strength", label: "Style-Mix Strength",
      min: r.style_mix_strength[0], max: r.style_mix_strength[1], step: 0.01,
      value: session.style_mix?.strength ?? 0 },
  ];
  slots.forEach((slot, i) => {
    specs.push({ kind: "int-field", id: `pca_direction_${i}`, label: `PCA Direction ${i + 1}`,
                 min: r.pca_direction[0], max: r.pca_direction[1], value: slot.direction });
    specs.push({ kind: "slider", id: `pca_weight_${i}`, label: `PCA Weight ${i + 1}`,
                 min: r.pca_weight[0], max: r.pca_weight[1], step: 0.1, value: slot.weight });
  });
  specs.push({ kind: "button", id: "download_latent", label: "Download Latent & Noise" });
  specs.push({ kind: "button", id: "upload_latent", label: "Upload Latent & Noise" });
  return specs;
}
