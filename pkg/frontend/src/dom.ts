import type { ConsoleApp } from "./app.js";
import { buildControlSpecs, type ControlSpec } from "./controls.js";

function controlElement(spec: ControlSpec, app: ConsoleApp): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "control";
  wrap.dataset.controlId = spec.id;
  const caption = document.createElement("span");
  caption.textContent = spec.label;
  wrap.appendChild(caption);

  if (spec.kind === "select") {
    const select = document.createElement("select");
    for (const option of spec.options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      el.selected = option === spec.value;
      select.appendChild(el);
    }
    select.addEventListener("change", () => void app.selectModel(select.value));
    wrap.appendChild(select);
    return wrap;
  }
  if (spec.kind === "button") {
    const button = document.createElement("button");
    button.textContent = spec.label;
    button.dataset.action = spec.id;
    wrap.appendChild(button);
    return wrap;
  }

  const input = document.createElement("input");
  input.type = spec.kind === "slider" ? "range" : "number";
  input.min = String(spec.min);
  input.max = String(spec.max);
  input.step = spec.kind === "slider" ? String(spec.step) : "1";
  input.value = String(spec.value);
  input.addEventListener("input", () => {
    const value = Number(input.value);
    const id = spec.id;
    if (id.startsWith("pca_direction_")) {
      app.setSlot(Number(id.slice("pca_direction_".length)), { direction: value });
    } else if (id.startsWith("pca_weight_")) {
      app.setSlot(Number(id.slice("pca_weight_".length)), { weight: value });
    } else {
      app.update((session) => {
        if (id === "latent_seed") session.latent_seed = value;
        else if (id === "noise_seed") session.noise_seed = value;
        else if (id === "truncation") session.truncation = value;
        else {
          const mix = session.style_mix ?? { mix_seed: 0, cutoff: 0, strength: 0 };
          if (id === "style_mix_seed") mix.mix_seed = value;
          else if (id === "style_mix_cutoff") mix.cutoff = value;
          else if (id === "style_mix_strength") mix.strength = value;
          session.style_mix = mix;
        }
        delete session.archive_id; // manual edits leave archive replay mode
      });
    }
  });
  wrap.appendChild(input);
  return wrap;
}

/** Render the whole control panel for the current model into `root`. */
export function renderControls(root: HTMLElement, app: ConsoleApp): void {
  root.textContent = "";
  if (!app.model || !app.session) {
    const banner = document.createElement("div");
    banner.className = "banner-error";
    banner.textContent = app.lastError ?? "service unreachable, retrying…";
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void app.init());
    banner.appendChild(retry);
    root.appendChild(banner);
    return;
  }
  const specs = buildControlSpecs(
    app.model, app.models.map((m) => m.model_id), app.session, app.slots);
  for (const spec of specs) {
    root.appendChild(controlElement(spec, app));
  }

  const undoBtn = document.createElement("button");
  undoBtn.textContent = "Undo";
  undoBtn.disabled = !app.history.canUndo();
  undoBtn.addEventListener("click", () => void app.undo());
  const redoBtn = document.createElement("button");
  redoBtn.textContent = "Redo";
  redoBtn.disabled = !app.history.canRedo();
  redoBtn.addEventListener("click", () => void app.redo());
  root.append(undoBtn, redoBtn);

  root.querySelector<HTMLButtonElement>('[data-action="download_latent"] button, button[data-action="download_latent"]')
    ?.addEventListener("click", async () => {
      const blob = await app.downloadLatent();
      if (!blob || typeof URL === "undefined") return;
      const url = URL.createObjectURL(new Blob([blob.slice().buffer]));
      const link = document.createElement("a");
      link.href = url;
      link.download = `${app.lastArchiveId ?? "latent"}.latent`;
      link.click();
      URL.revokeObjectURL(url);
    });

  root.querySelector<HTMLButtonElement>('button[data-action="upload_latent"]')
    ?.addEventListener("click", () => {
      const picker = document.createElement("input");
      picker.type = "file";
      picker.addEventListener("change", async () => {
        const file = picker.files?.[0];
        if (!file) return;
        await app.uploadLatent(new Uint8Array(await file.arrayBuffer()));
      });
      picker.click();
    });
}

/** Swap the displayed image for freshly received PNG bytes. */
export function showImage(img: HTMLImageElement, pngBytes: Uint8Array): void {
  const url = URL.createObjectURL(new Blob([pngBytes.slice().buffer], { type: "image/png" }));
  const previous = img.src;
  img.src = url;
  if (previous.startsWith("blob:")) URL.revokeObjectURL(previous);
}
