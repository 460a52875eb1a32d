import { ApiClient } from "./api.js";
import { ViewName, ViewState } from "./state.js";

export interface Ctx {
  api: ApiClient;
  state: ViewState;
  navigate: (view: ViewName) => void;
  tileTemplate: string;
}
