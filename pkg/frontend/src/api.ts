import type { EditSession, GenerateResult, JobStatus, ModelInfo, PcaSummary } from "./types.js";
import { canonicalSession } from "./session.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body.detail !== undefined) detail = JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, detail);
}

/** Thin typed client over the inference service; the UI's only data path. */
export class ApiClient {
  constructor(private baseUrl = "", private fetchFn: typeof fetch = fetch) {}

  async models(): Promise<ModelInfo[]> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/models`);
    await raiseForStatus(response);
    return (await response.json()) as ModelInfo[];
  }

  async pca(modelId: string, k: number): Promise<PcaSummary> {
    const response = await this.fetchFn(
      `${this.baseUrl}/v1/pca/${encodeURIComponent(modelId)}?k=${k}`);
    await raiseForStatus(response);
    return (await response.json()) as PcaSummary;
  }

  async generatePng(session: EditSession, signal?: AbortSignal): Promise<GenerateResult> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/generate/png`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: canonicalSession(session),
      signal,
    });
    await raiseForStatus(response);
    const bytes = new Uint8Array(await response.arrayBuffer());
    return { pngBytes: bytes, archiveId: response.headers.get("X-Archive-Id") ?? "" };
  }

  async downloadLatent(archiveId: string): Promise<Uint8Array> {
    const response = await this.fetchFn(
      `${this.baseUrl}/v1/latent/${encodeURIComponent(archiveId)}`);
    await raiseForStatus(response);
    return new Uint8Array(await response.arrayBuffer());
  }

  async uploadLatent(modelId: string, blob: Uint8Array): Promise<string> {
    const response = await this.fetchFn(
      `${this.baseUrl}/v1/latent?model_id=${encodeURIComponent(modelId)}`, {
        method: "POST",
        headers: { "content-type": "application/octet-stream" },
        body: blob.slice().buffer as ArrayBuffer,
      });
    await raiseForStatus(response);
    return ((await response.json()) as { archive_id: string }).archive_id;
  }

  async projectImage(modelId: string, png: Uint8Array, steps?: number): Promise<string> {
    const params = new URLSearchParams({ model_id: modelId });
    if (steps !== undefined) params.set("steps", String(steps));
    const response = await this.fetchFn(`${this.baseUrl}/v1/project?${params}`, {
      method: "POST",
      headers: { "content-type": "image/png" },
      body: png.slice().buffer as ArrayBuffer,
    });
    await raiseForStatus(response);
    return ((await response.json()) as { job_id: string }).job_id;
  }

  async jobStatus(jobId: string): Promise<JobStatus> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/jobs/${encodeURIComponent(jobId)}`);
    await raiseForStatus(response);
    return (await response.json()) as JobStatus;
  }
}
