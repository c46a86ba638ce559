import { ApiClient } from "./api.js";
import { ConsoleApp } from "./app.js";
import { renderControls, showImage } from "./dom.js";

function bootstrap(): void {
  const panel = document.getElementById("controls");
  const img = document.getElementById("preview") as HTMLImageElement | null;
  const status = document.getElementById("status");
  if (!panel || !img || !status) throw new Error("console markup missing");

  const app = new ConsoleApp(new ApiClient(""), {
    onImage: (png) => showImage(img, png),
    onError: (message) => {
      status.textContent = message;
      status.className = "error";
    },
    onFieldErrors: (errors) => {
      status.textContent = errors.map((e) => `${e.field}: ${e.message}`).join("; ");
      status.className = "field-error";
    },
    onState: () => renderControls(panel, app),
  });
  void app.init().then(() => renderControls(panel, app));
}

bootstrap();
