import type {
  BoxInfo,
  ConflictEntry,
  ProblemInfo,
  RelaxedEntry,
  SessionState,
} from "./types.js";

// Pure DOM builders: every renderer is a function of server data plus a few
// callbacks, so replaying the same responses yields identical panels.

export interface TreeOptions {
  cut: ReadonlySet<string>;
  relaxed: ReadonlySet<string>;
}

export function renderTree(doc: Document, box: BoxInfo, options: TreeOptions): HTMLElement {
  const item = doc.createElement("li");
  item.dataset.box = box.code;
  item.classList.add("box");
  if (options.cut.has(box.code)) item.classList.add("in-cut");
  if (options.relaxed.has(box.code)) item.classList.add("relaxed");

  const header = doc.createElement("div");
  header.className = "box-header";
  const toggle = doc.createElement("button");
  toggle.type = "button";
  toggle.className = "toggle";
  toggle.textContent = "−";
  const title = doc.createElement("span");
  title.className = "box-title";
  title.textContent = `[${box.code}] ${box.label}`;
  header.append(toggle, title);
  if (options.relaxed.has(box.code)) {
    const badge = doc.createElement("span");
    badge.className = "badge";
    badge.textContent = "relaxed";
    header.append(badge);
  }
  item.append(header);

  const body = doc.createElement("ul");
  body.className = "box-body";
  for (const constraint of box.constraints) {
    const leaf = doc.createElement("li");
    leaf.className = "constraint";
    leaf.dataset.constraint = constraint.id;
    leaf.textContent = `${constraint.id}: ${constraint.text}`;
    body.append(leaf);
  }
  for (const child of box.children) {
    body.append(renderTree(doc, child, options));
  }
  item.append(body);

  toggle.addEventListener("click", () => {
    const hidden = body.style.display === "none";
    body.style.display = hidden ? "" : "none";
    toggle.textContent = hidden ? "−" : "+";
  });
  return item;
}

export function renderProblemHeader(doc: Document, problem: ProblemInfo): HTMLElement {
  const header = doc.createElement("div");
  header.className = "problem-header";
  const title = doc.createElement("h1");
  title.textContent = problem.name;
  const variables = doc.createElement("p");
  variables.className = "variables";
  variables.textContent = problem.variables
    .map((v) => `${v.name} ∈ [${v.lower}..${v.upper}]`)
    .join(",  ");
  header.append(title, variables);
  return header;
}

export interface ConflictHandlers {
  relax(index: number): void;
  decline(): void;
}

export function renderConflictPanel(
  doc: Document,
  entries: ConflictEntry[],
  busy: boolean,
  handlers: ConflictHandlers,
): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "panel conflict-panel";
  const title = doc.createElement("h2");
  title.textContent = "A contradiction occurred because of:";
  panel.append(title);
  const list = doc.createElement("ol");
  list.className = "conflict-list";
  for (const entry of entries) {
    const item = doc.createElement("li");
    item.dataset.conflict = entry.code;
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "relax";
    button.disabled = busy;
    button.textContent = `Relax [${entry.code}] ${entry.label}`;
    button.addEventListener("click", () => handlers.relax(entry.index));
    item.append(button);
    list.append(item);
  }
  panel.append(list);
  const decline = doc.createElement("button");
  decline.type = "button";
  decline.className = "decline";
  decline.disabled = busy;
  decline.textContent = "Keep everything (relax nothing)";
  decline.addEventListener("click", () => handlers.decline());
  panel.append(decline);
  return panel;
}

export function renderSolutionPanel(
  doc: Document,
  solution: Record<string, number>,
  order: string[],
): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "panel solution-panel";
  const title = doc.createElement("h2");
  title.textContent = "A solution has been obtained";
  const text = doc.createElement("p");
  text.className = "assignment";
  text.textContent = `(${order.map((v) => `${v}:${solution[v]}`).join(", ")})`;
  panel.append(title, text);
  return panel;
}

export function renderDomainsPanel(
  doc: Document,
  domains: Record<string, number[]>,
  order: string[],
): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "panel domains-panel";
  const title = doc.createElement("h2");
  title.textContent = "Current domains";
  panel.append(title);
  const list = doc.createElement("ul");
  for (const name of order) {
    const item = doc.createElement("li");
    item.textContent = `${name} ∈ {${(domains[name] ?? []).join(", ")}}`;
    list.append(item);
  }
  panel.append(list);
  return panel;
}

export interface LedgerHandlers {
  restore(code: string): void;
}

export function renderRelaxedLedger(
  doc: Document,
  relaxed: RelaxedEntry[],
  busy: boolean,
  handlers: LedgerHandlers,
): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "panel ledger-panel";
  const title = doc.createElement("h2");
  title.textContent = "Relaxed blocks";
  panel.append(title);
  if (relaxed.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "empty";
    empty.textContent = "none";
    panel.append(empty);
    return panel;
  }
  const list = doc.createElement("ul");
  list.className = "ledger-list";
  for (const entry of relaxed) {
    const item = doc.createElement("li");
    item.dataset.relaxed = entry.code;
    const label = doc.createElement("span");
    label.className = "ledger-label";
    label.textContent = `[${entry.code}] ${entry.label} — ${entry.constraint_ids.length} constraint(s) removed`;
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "restore";
    button.disabled = busy;
    button.textContent = "Set back";
    button.addEventListener("click", () => handlers.restore(entry.code));
    item.append(label, button);
    list.append(item);
  }
  panel.append(list);
  return panel;
}

export function renderNotice(doc: Document, state: SessionState): HTMLElement | null {
  const report = state.restore;
  if (!report) return null;
  const notice = doc.createElement("p");
  notice.className = `notice ${report.outcome}`;
  if (report.outcome === "restored") {
    const extras = (report.extra ?? [])
      .map((e) => `[${e.code}] ${e.constraint_ids.join(", ")}`)
      .join("; ");
    notice.textContent = extras
      ? `Restored; additional constraints were removed: ${extras}`
      : "Restored without further removals";
  } else {
    notice.textContent = `Refused: the restore conflicts with ${(
      report.conflict ?? []
    )
      .map((code) => `[${code}]`)
      .join(", ")}`;
  }
  return notice;
}
