// Wire types mirroring the service's JSON payloads.

export interface VariableInfo {
  name: string;
  lower: number;
  upper: number;
}

export interface ConstraintInfo {
  id: string;
  text: string;
}

export interface BoxInfo {
  code: string;
  label: string;
  constraints: ConstraintInfo[];
  children: BoxInfo[];
}

export interface ViewInfo {
  name: string;
  cut: string[];
}

export interface ProblemInfo {
  name: string;
  variables: VariableInfo[];
  tree: BoxInfo;
  views: ViewInfo[];
}

export interface ConflictEntry {
  index: number;
  code: string;
  label: string;
}

export interface RelaxedEntry {
  code: string;
  label: string;
  constraint_ids: string[];
}

export type SessionStatus = "idle" | "conflict" | "solved";

export interface RestoreReport {
  outcome: "restored" | "refused";
  extra?: { code: string; constraint_ids: string[] }[];
  conflict?: string[];
}

export interface SessionState {
  session_id: string;
  status: SessionStatus;
  view: string;
  policy: string;
  relaxed: RelaxedEntry[];
  conflict?: ConflictEntry[];
  explanation?: string[];
  solution?: Record<string, number>;
  domains?: Record<string, number[]>;
  restore?: RestoreReport;
}
