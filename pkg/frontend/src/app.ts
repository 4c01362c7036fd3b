import { ApiClient } from "./api.js";
import {
  renderConflictPanel,
  renderDomainsPanel,
  renderProblemHeader,
  renderRelaxedLedger,
  renderSolutionPanel,
  renderNotice,
  renderTree,
} from "./render.js";
import type { ProblemInfo, SessionState } from "./types.js";

/**
 * Single-page client for one negotiation session.  All solving happens on
 * the server; the page is re-rendered from the latest response and user
 * actions are serialized (controls disable while a request is in flight).
 */
export class App {
  private problem: ProblemInfo | null = null;
  private session: SessionState | null = null;
  private busy = false;
  private pending: Promise<void> = Promise.resolve();
  private readonly doc: Document;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.doc = root.ownerDocument;
  }

  /** Resolves when the in-flight action (if any) has settled. */
  settle(): Promise<void> {
    return this.pending;
  }

  async init(): Promise<void> {
    this.problem = await this.api.problem();
    this.render();
  }

  async startSession(view: string, policy: string): Promise<void> {
    const created = await this.api.createSession(view, policy);
    this.session = await this.api.run(created.session_id);
    this.render();
  }

  private enqueue(action: () => Promise<void>): void {
    if (this.busy) return;
    this.busy = true;
    this.render();
    this.pending = action()
      .catch((error) => {
        this.showError(error instanceof Error ? error.message : String(error));
      })
      .finally(() => {
        this.busy = false;
        this.render();
      });
  }

  private relax(index: number): void {
    const session = this.session;
    if (!session) return;
    this.enqueue(async () => {
      this.session = await this.api.relax(session.session_id, index);
    });
  }

  private restore(code: string): void {
    const session = this.session;
    if (!session) return;
    this.enqueue(async () => {
      this.session = await this.api.restore(session.session_id, code);
    });
  }

  private showError(message: string): void {
    const zone = this.root.querySelector(".errors");
    if (zone) zone.textContent = message;
  }

  // ------------------------------------------------------------- rendering

  private render(): void {
    const problem = this.problem;
    if (!problem) return;
    this.root.replaceChildren();
    this.root.append(renderProblemHeader(this.doc, problem));
    this.root.append(this.renderSessionControls(problem));

    const errors = this.doc.createElement("p");
    errors.className = "errors";
    this.root.append(errors);

    const columns = this.doc.createElement("div");
    columns.className = "columns";
    this.root.append(columns);

    const cut = new Set(
      problem.views.find((v) => v.name === this.selectedView())?.cut ?? [],
    );
    const relaxed = new Set((this.session?.relaxed ?? []).map((r) => r.code));
    const treeHost = this.doc.createElement("ul");
    treeHost.className = "boxtree";
    treeHost.append(renderTree(this.doc, problem.tree, { cut, relaxed }));
    const treePanel = this.doc.createElement("section");
    treePanel.className = "panel tree-panel";
    const treeTitle = this.doc.createElement("h2");
    treeTitle.textContent = "Constraint hierarchy";
    treePanel.append(treeTitle, treeHost);
    columns.append(treePanel);

    const side = this.doc.createElement("div");
    side.className = "side";
    columns.append(side);

    const session = this.session;
    if (!session) return;

    const notice = renderNotice(this.doc, session);
    if (notice) side.append(notice);

    if (session.status === "conflict" && session.conflict) {
      side.append(
        renderConflictPanel(this.doc, session.conflict, this.busy, {
          relax: (index) => this.relax(index),
          decline: () => this.relax(0),
        }),
      );
    }
    if (session.status === "solved" && session.solution) {
      side.append(
        renderSolutionPanel(
          this.doc,
          session.solution,
          problem.variables.map((v) => v.name),
        ),
      );
    } else if (session.domains) {
      side.append(
        renderDomainsPanel(
          this.doc,
          session.domains,
          problem.variables.map((v) => v.name),
        ),
      );
    }
    side.append(
      renderRelaxedLedger(this.doc, session.relaxed, this.busy, {
        restore: (code) => this.restore(code),
      }),
    );
  }

  private selectedView(): string {
    if (this.session) return this.session.view;
    const picker = this.root.querySelector<HTMLSelectElement>("select.view-picker");
    return picker?.value ?? this.problem?.views[0]?.name ?? "";
  }

  private renderSessionControls(problem: ProblemInfo): HTMLElement {
    const controls = this.doc.createElement("form");
    controls.className = "session-controls";
    controls.addEventListener("submit", (event) => event.preventDefault());

    const viewPicker = this.doc.createElement("select");
    viewPicker.className = "view-picker";
    for (const view of problem.views) {
      const option = this.doc.createElement("option");
      option.value = view.name;
      option.textContent = `${view.name} (${view.cut.join(", ")})`;
      if (this.session?.view === view.name) option.selected = true;
      viewPicker.append(option);
    }
    viewPicker.addEventListener("change", () => this.render());

    const policyPicker = this.doc.createElement("select");
    policyPicker.className = "policy-picker";
    for (const policy of ["all", "in-explanation"]) {
      const option = this.doc.createElement("option");
      option.value = policy;
      option.textContent = policy;
      if (this.session?.policy === policy) option.selected = true;
      policyPicker.append(option);
    }

    const start = this.doc.createElement("button");
    start.type = "button";
    start.className = "start";
    start.disabled = this.busy;
    start.textContent = this.session ? "Start over" : "Solve";
    start.addEventListener("click", () => {
      this.enqueue(async () => {
        const created = await this.api.createSession(
          viewPicker.value,
          policyPicker.value,
        );
        this.session = await this.api.run(created.session_id);
      });
    });

    controls.append(viewPicker, policyPicker, start);
    return controls;
  }
}
