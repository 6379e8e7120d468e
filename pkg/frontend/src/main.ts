// Application bootstrap: wires the auth, diets, custom-ingredient, and
// label-check flows onto index.html.

import { ApiClient, ApiError } from "./api.js";
import { captureFrame, fileToBase64, startCamera, stopCamera } from "./camera.js";
import { renderCheckError, renderCustomPanel, renderDietsPanel, renderResultView } from "./render.js";
import { AppStore } from "./state.js";
import { t } from "./i18n.js";

function need<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function bootstrap(baseUrl = ""): AppStore {
  const store = new AppStore(new ApiClient(baseUrl));

  const authSection = need<HTMLElement>("auth-section");
  const mainSection = need<HTMLElement>("main-section");
  const authError = need<HTMLElement>("auth-error");
  const dietsRoot = need<HTMLElement>("diets-panel");
  const customRoot = need<HTMLElement>("custom-panel");
  const resultRoot = need<HTMLElement>("result-panel");
  const checkButton = need<HTMLButtonElement>("submit-check");
  const labelText = need<HTMLTextAreaElement>("label-text");
  const fileInput = need<HTMLInputElement>("label-file");
  const video = need<HTMLVideoElement>("camera-preview");
  const cameraButton = need<HTMLButtonElement>("camera-start");
  const captureButton = need<HTMLButtonElement>("camera-capture");

  let stream: MediaStream | null = null;

  store.subscribe((state) => {
    authSection.hidden = state.session !== null;
    mainSection.hidden = state.session === null;
    checkButton.disabled = state.checking;
    checkButton.textContent = state.checking ? t("checking") : t("submit_check");
    if (state.profile && state.catalog.length > 0) {
      renderDietsPanel(dietsRoot, state.catalog, state.profile, {
        choose: (name) => void store.chooseDiet(name),
        remove: (name) => void store.removeDiet(name),
      });
      renderCustomPanel(customRoot, state.profile, {
        add: (text) => void store.addIngredient(text),
        remove: (text) => void store.removeIngredient(text),
      });
    }
    if (state.lastResult) {
      renderResultView(resultRoot, state.lastResult);
    } else if (state.lastError) {
      renderCheckError(resultRoot, state.lastError);
    }
  });

  need<HTMLFormElement>("login-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const email = need<HTMLInputElement>("login-email").value;
    const password = need<HTMLInputElement>("login-password").value;
    store.login(email, password).catch((error: unknown) => {
      authError.textContent = error instanceof ApiError ? error.message : String(error);
    });
  });

  need<HTMLFormElement>("register-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const name = need<HTMLInputElement>("register-name").value;
    const email = need<HTMLInputElement>("register-email").value;
    const password = need<HTMLInputElement>("register-password").value;
    store.register(name, email, password).catch((error: unknown) => {
      authError.textContent = error instanceof ApiError ? error.message : String(error);
    });
  });

  need<HTMLButtonElement>("logout").addEventListener("click", () => store.logout());

  checkButton.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (file) {
      await store.check({ image_b64: await fileToBase64(file) });
      fileInput.value = "";
    } else if (labelText.value.trim()) {
      await store.check({ text: labelText.value });
    }
  });

  cameraButton.addEventListener("click", async () => {
    try {
      stream = await startCamera(video);
      video.hidden = false;
      captureButton.hidden = false;
    } catch (error) {
      renderCheckError(resultRoot, new ApiError("camera_error", String(error), 0));
    }
  });

  captureButton.addEventListener("click", async () => {
    if (!stream) return;
    const image = captureFrame(video);
    stopCamera(stream);
    stream = null;
    video.hidden = true;
    captureButton.hidden = true;
    await store.check({ image_b64: image });
  });

  return store;
}

if (typeof document !== "undefined" && document.getElementById("auth-section")) {
  bootstrap();
}
