import { StudioClient } from "./api";
import { App, type AppElements } from "./app";

function grab<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function mount(baseUrl: string, dataset: string, mode: "nl" | "keyword"): App {
  const elements: AppElements = {
    palette: grab("palette"),
    canvas: grab("canvas"),
    params: grab("params"),
    before: grab("before"),
    after: grab("after"),
    score: grab("score"),
    diagnostics: grab("diagnostics"),
    query: grab<HTMLInputElement>("query"),
    predictButton: grab<HTMLButtonElement>("predict-btn"),
    resetButton: grab<HTMLButtonElement>("reset-btn"),
    runButton: grab<HTMLButtonElement>("run-btn"),
    status: grab("status"),
  };
  const app = new App(new StudioClient(baseUrl), elements);
  void app.init(dataset, mode);
  return app;
}

declare global {
  interface Window {
    studio?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("palette")) {
  const params = new URLSearchParams(window.location.search);
  window.studio = mount(
    params.get("api") ?? "http://127.0.0.1:8686",
    params.get("dataset") ?? "nan-iris",
    (params.get("mode") as "nl" | "keyword") ?? "nl",
  );
}
