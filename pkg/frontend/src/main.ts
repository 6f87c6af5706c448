import { ApiClient } from "./api.js";
import { mountApp } from "./render.js";
import { Store } from "./state.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}

const store = new Store(new ApiClient(""));
const update = mountApp(root, {
  onLeafChange: (id, value) => void store.adjustLeaf(id, value),
  onWeightChange: (child, parent, weight) => void store.adjustWeight(child, parent, weight),
  onTimelineChange: (index) => void store.selectTimestamp(index),
  onRevertAll: () => void store.revertAll(),
  onRetry: () => void store.load(),
});
store.subscribe(update);
update(store.state);
void store.load();
