import "katex/dist/katex.min.css";
import "./styles.css";
import { ApiClient } from "./api";
import { Store } from "./state";
import { mountApp, showBanner } from "./view";

const root = document.getElementById("app");
if (root) {
  const client = new ApiClient();
  const store = new Store();
  const app = mountApp(root, client, store);
  client
    .bank()
    .then(({ records }) => store.applyBank(records))
    .catch((err) => showBanner(app.root, "error", `Could not load bank: ${String(err)}`));
}
