// DOM rendering: chat column with a live message and blinking caret,
// the parameter panel, preset picker, and visibility toggle. The
// partner is only ever labeled by its color name.

import { PARAM_DEFS, PRESETS } from "./params.js";
import type { ChatStore } from "./store.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mount(root: HTMLElement, store: ChatStore): void {
  root.innerHTML = "";

  const layout = el("div", "layout");
  const chatPane = el("div", "chat-pane");
  const panelPane = el("div", "panel-pane");
  layout.append(chatPane, panelPane);
  root.append(layout);

  // --- chat pane -----------------------------------------------------------
  const overlay = el("div", "overlay hidden");
  overlay.append(el("div", "overlay-box", "Connecting you to your partner..."));
  const messages = el("div", "messages");
  const composer = el("form", "composer");
  const input = el("input") as HTMLInputElement;
  input.placeholder = "Say something...";
  const sendButton = el("button", "", "Send");
  composer.append(input, sendButton);
  composer.addEventListener("submit", (event) => {
    event.preventDefault();
    store.sendMessage(input.value);
    input.value = "";
  });
  chatPane.append(overlay, messages, composer);

  // --- parameter panel -------------------------------------------------------
  const presetRow = el("div", "preset-row");
  presetRow.append(el("span", "panel-title", "Partner"));
  const presetSelect = el("select") as HTMLSelectElement;
  for (const name of Object.keys(PRESETS)) {
    const option = el("option", "", name) as HTMLOptionElement;
    option.value = name;
    presetSelect.append(option);
  }
  presetSelect.value = store.preset;
  presetSelect.addEventListener("change", () => {
    store.selectPreset(presetSelect.value);
    store.submitParams();
  });
  presetRow.append(presetSelect);

  const visibilityRow = el("label", "visibility-row");
  const visibilityBox = el("input") as HTMLInputElement;
  visibilityBox.type = "checkbox";
  visibilityBox.checked = store.showTyping;
  visibilityBox.addEventListener("change", () =>
    store.setVisibility(visibilityBox.checked)
  );
  visibilityRow.append(visibilityBox, el("span", "", "Show typing process"));

  const sliders = el("div", "sliders");
  const valueLabels = new Map<string, HTMLElement>();
  let group = "";
  for (const def of PARAM_DEFS) {
    if (def.group !== group) {
      group = def.group;
      sliders.append(el("div", "group-title", group));
    }
    const row = el("div", "slider-row");
    const label = el("label", "", def.label);
    const value = el("span", "slider-value");
    const slider = el("input") as HTMLInputElement;
    slider.type = "range";
    slider.min = String(def.min);
    slider.max = String(def.max);
    slider.step = String(def.step);
    slider.dataset.key = def.key;
    slider.addEventListener("input", () => {
      store.setParam(def.key, Number(slider.value));
      value.textContent = slider.value;
    });
    slider.addEventListener("change", () => {
      store.submitParams();
    });
    valueLabels.set(def.key, value);
    row.append(label, slider, value);
    sliders.append(row);
  }
  const problems = el("div", "problems");
  const noticesBox = el("div", "notices");
  panelPane.append(presetRow, visibilityRow, sliders, problems, noticesBox);

  // --- rendering -------------------------------------------------------------
  function render(): void {
    overlay.classList.toggle(
      "hidden",
      store.connection !== "waiting_room" && store.connection !== "connecting"
    );
    messages.innerHTML = "";
    for (const entry of store.entries) {
      const bubble = el(
        "div",
        `bubble ${entry.sender === "user" ? "user" : "partner"}`
      );
      if (entry.live) {
        const before = el("span", "", entry.text.slice(0, store.caret));
        const caret = el("span", "caret");
        const after = el("span", "", entry.text.slice(store.caret));
        bubble.append(before, caret, after);
        if (store.isTypingPaused) {
          bubble.append(el("span", "thinking", " ..."));
        }
      } else {
        bubble.textContent = entry.text;
      }
      messages.append(bubble);
    }
    messages.scrollTop = messages.scrollHeight;

    for (const def of PARAM_DEFS) {
      const slider = sliders.querySelector<HTMLInputElement>(
        `input[data-key="${def.key}"]`
      );
      const valueLabel = valueLabels.get(def.key);
      if (slider && document.activeElement !== slider) {
        slider.value = String(store.edited[def.key] ?? 0);
      }
      if (valueLabel) {
        valueLabel.textContent = String(store.edited[def.key] ?? 0);
      }
    }
    problems.textContent = store.validationProblems.join("; ");
    noticesBox.textContent = store.notices.slice(-3).join(" | ");
  }

  store.subscribe(render);
  render();
}
