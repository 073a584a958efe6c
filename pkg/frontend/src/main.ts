import { ChatClient } from "./client.js";
import { ChatStore } from "./store.js";
import { mount } from "./view.js";

const params = new URLSearchParams(window.location.search);
const host = params.get("gateway") ?? `${window.location.hostname}:8008`;
const url = `ws://${host}/chat`;

const store = new ChatStore();
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}
mount(root, store);

const client = new ChatClient(url, store);
client.connect();
