import { describe, expect, it } from "vitest";

import { buildControlSpecs, defaultPcaSlots, slotsToEdits, PCA_SLOTS } from "../src/controls.js";
import { defaultSession } from "../src/session.js";
import { TOY_MODEL } from "./mock_server.js";

describe("control panel specs", () => {
  const specs = buildControlSpecs(TOY_MODEL, ["toy16"], defaultSession(TOY_MODEL),
                                  defaultPcaSlots());
  const byId = new Map(specs.map((s) => [s.id, s]));

  it("renders every parameter group", () => {
    expect(byId.has("model")).toBe(true);
    expect(byId.has("latent_seed")).toBe(true);
    expect(byId.has("noise_seed")).toBe(true);
    expect(byId.has("truncation")).toBe(true);
    expect(byId.has("style_mix_seed")).toBe(true);
    expect(byId.has("style_mix_cutoff")).toBe(true);
    expect(byId.has("style_mix_strength")).toBe(true);
    for (let i = 0; i < PCA_SLOTS; i++) {
      expect(byId.has(`pca_direction_${i}`)).toBe(true);
      expect(byId.has(`pca_weight_${i}`)).toBe(true);
    }
    expect(byId.has("download_latent")).toBe(true);
    expect(byId.has("upload_latent")).toBe(true);
  });

  it("sources every range from server metadata", () => {
    const r = TOY_MODEL.ranges;
    expect(byId.get("truncation")).toMatchObject({ min: r.truncation[0], max: r.truncation[1] });
    expect(byId.get("style_mix_cutoff")).toMatchObject({
      min: r.style_mix_cutoff[0], max: r.style_mix_cutoff[1] });
    expect(byId.get("pca_direction_0")).toMatchObject({
      min: r.pca_direction[0], max: r.pca_direction[1] });
    expect(byId.get("pca_weight_9")).toMatchObject({
      min: r.pca_weight[0], max: r.pca_weight[1] });
    expect(byId.get("latent_seed")).toMatchObject({ max: r.latent_seed[1] });
  });

  it("follows a changed server range with no code change", () => {
    const tightened = {
      ...TOY_MODEL,
      ranges: { ...TOY_MODEL.ranges, pca_weight: [-5, 5] as [number, number] },
    };
    const tightSpecs = buildControlSpecs(tightened, ["toy16"], defaultSession(tightened),
                                         defaultPcaSlots());
    const weight = tightSpecs.find((s) => s.id === "pca_weight_0");
    expect(weight).toMatchObject({ min: -5, max: 5 });
  });

  it("has exactly ten direction/weight slots", () => {
    expect(defaultPcaSlots()).toHaveLength(10);
  });

  it("sends only active (nonzero-weight) slots", () => {
    const slots = defaultPcaSlots();
    slots[3] = { direction: 7, weight: 2.5 };
    slots[8] = { direction: 1, weight: -4 };
    expect(slotsToEdits(slots)).toEqual([
      { direction: 7, weight: 2.5 },
      { direction: 1, weight: -4 },
    ]);
  });
});
