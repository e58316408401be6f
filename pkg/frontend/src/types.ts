// Wire types of the session protocol. The UI computes no HMI semantics;
// everything rendered is derived from these payloads.

export interface GroupPayload {
  kind: 'mandatory' | 'optional' | 'xor';
  children: string[];
}

export interface FeaturePayload {
  name: string;
  groups: GroupPayload[];
}

export interface ConstraintPayload {
  kind: 'requires' | 'excludes';
  lhs: string;
  rhs: string;
}

export interface FeatureModelPayload {
  name: string;
  root: string;
  features: FeaturePayload[];
  constraints: ConstraintPayload[];
}

export interface Violation {
  code: string;
  message: string;
}

export interface ValidatePayload {
  valid: boolean;
  violations: Violation[];
}

export interface ViewLine {
  text: string;
  kind: 'entry' | 'status';
  highlighted: boolean;
}

export interface ViewDialog {
  text: string;
  buttons: { label: string; highlighted: boolean }[];
}

export interface ViewModel {
  title: string;
  lines: ViewLine[];
  dialog: ViewDialog | null;
  config: string[];
}

export interface SessionCreated {
  sessionId: string;
  view: ViewModel;
}

export interface InputResponse {
  view: ViewModel;
  effects: { statusbox: string; value: string }[];
  transition: string;
}

export type InputEvent = 'up' | 'down' | 'select' | 'back';
