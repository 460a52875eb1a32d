import { ApiError } from "../api.js";
import { Ctx } from "../ctx.js";
import { clear, errorBanner, h } from "../dom.js";

export function renderLogin(root: HTMLElement, ctx: Ctx): void {
  clear(root);
  const status = h("div", { class: "status" });
  const username = h("input", { name: "username", autocomplete: "username" });
  const password = h("input", { name: "password", type: "password" });

  const form = h(
    "form",
    {
      class: "login-form",
      onsubmit: async (ev: Event) => {
        ev.preventDefault();
        clear(status);
        try {
          await ctx.api.signIn(username.value, password.value);
          ctx.navigate("registry");
        } catch (err) {
          const message =
            err instanceof ApiError && err.code === "BAD_CREDENTIALS"
              ? "Invalid username or password."
              : `Sign-in failed: ${(err as Error).message}`;
          status.append(errorBanner(message));
        }
      },
    },
    h("h2", {}, "Sign in"),
    h("label", {}, "Username", username),
    h("label", {}, "Password", password),
    h("button", { type: "submit" }, "Sign in"),
    status,
  );
  root.append(form, h("p", { class: "hint" },
    "The open data page is available without an account."));
}
