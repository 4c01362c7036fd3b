import { ApiClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const base = new URLSearchParams(location.search).get("api") ?? "";
const app = new App(root, new ApiClient(base));
app.init().catch((error) => {
  root.textContent = `Failed to load the problem: ${error}`;
});
