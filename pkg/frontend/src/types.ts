// Shared JSON schemas of the HTTP API. These mirror the backend's canonical
// encodings; the UI never derives numbers beyond plotting transforms.

export interface DelaySystem {
  n: number;
  m: number;
  a: number[];
  alpha: number[];
  tau: number;
}

export type DominanceTag = "strict" | "on_line" | "unverified" | "violated";

export interface Certificate {
  system: DelaySystem;
  s0: number;
  multiplicity: number;
  residuals: number[];
  dominance: DominanceTag;
  stable: boolean;
  chain_zeta?: number[];
}

export interface RootJson {
  re: number;
  im: number;
  mult: number;
  residual: number;
}

export interface RectangleJson {
  re_lo: number;
  re_hi: number;
  im_lo: number;
  im_hi: number;
}

export interface RootSetJson {
  roots: RootJson[];
  winding: number;
  window: RectangleJson;
  unresolved: RectangleJson[];
}

export interface TrajectoryJson {
  t: number[];
  states: number[][];
  tau: number;
  decay_rate?: number;
}

export interface FieldJson {
  t: number[];
  x: number[];
  phi: number[][];
  trace_in: number[];
  trace_out: number[];
  L: number;
  lambda: number;
}

export interface PendulumDesignJson {
  L: number;
  g: number;
  k_p: number;
  k_d: number;
  tau: number;
  s0: number;
  multiplicity: number;
  rightmost_branch?: boolean;
  certificate?: Certificate;
}

export interface TransportDesignJson {
  L: number;
  lambda: number;
  k_p: number;
  k_i: number;
  tau: number;
  s0: number;
  multiplicity: number;
}

export interface PendulumExample {
  design?: PendulumDesignJson;
  certificate?: Certificate;
  branches?: { plus: PendulumDesignJson; minus: PendulumDesignJson };
}

export interface TransportExample {
  design: TransportDesignJson;
  certificate: Certificate;
}

export interface ChainJson {
  n: number;
  window: number;
  zeta: number[];
}

export interface ApiError {
  code: string;
  message: string;
}

export interface Envelope<T> {
  ok: boolean;
  data?: T;
  error?: ApiError;
  id?: string | null;
}
