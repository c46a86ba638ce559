/** Wire types for the /v1 API. The server is the single source of truth for
 * every validation range; the UI never hardcodes a bound. */

export type Ranges = {
  latent_seed: [number, number];
  noise_seed: [number, number];
  style_mix_seed: [number, number];
  truncation: [number, number];
  style_mix_cutoff: [number, number];
  style_mix_strength: [number, number];
  pca_direction: [number, number];
  pca_weight: [number, number];
  max_pca_edits: number;
};

export type ModelInfo = {
  model_id: string;
  resolution: number;
  gate_spec: string;
  latent_dim: number;
  num_layers: number;
  basis_available: boolean;
  ranges: Ranges;
};

export type PcaSummary = {
  model_id: string;
  latent_dim: number;
  k: number;
  variances: number[];
};

export type StyleMixParams = {
  mix_seed: number;
  cutoff: number;
  strength: number;
};

export type PcaEditParams = {
  direction: number;
  weight: number;
};

/** Mirrors the server's EditSession body. */
export type EditSession = {
  model_id: string;
  latent_seed: number;
  noise_seed: number;
  truncation: number;
  style_mix?: StyleMixParams;
  pca_edits: PcaEditParams[];
  archive_id?: string;
};

export type GenerateResult = {
  pngBytes: Uint8Array;
  archiveId: string;
};

export type JobStatus = {
  job_id: string;
  status: "pending" | "running" | "done" | "failed";
  archive_id?: string;
  final_loss?: number;
  error?: string;
};
