import { TeachplanApi } from "./api.js";
import { ConsoleModel } from "./model.js";
import { ConsoleView } from "./view.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8765";

const api = new TeachplanApi(baseUrl);
const model = new ConsoleModel(api);
const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const view = new ConsoleView(model, root);
view.render();

const sessionId = params.get("session");
if (sessionId) {
  void model.loadSession(sessionId);
}
