// UI state and request lifecycle: control changes debounce into one
// summarize call, and a response only renders if no newer request was
// issued meanwhile (stale responses are dropped).

import { ApiClient, EntityInfo, SummarizeRequest, SummarizeResponse } from "./api.js";

export type Polarity = "all" | "positive" | "negative";

export interface UiState {
  entities: EntityInfo[];
  aspects: string[];
  selectedEntity: string | null;
  activeAspects: string[]; // empty = no aspect filter
  polarity: Polarity;
  k: number;
  theta: number;
  beamSize: number;
  maxLen: number;
  inFlight: boolean;
  response: SummarizeResponse | null;
  error: string | null;
}

export const DEFAULTS = {
  k: 15,
  theta: 0.8,
  beamSize: 5,
  maxLen: 60,
} as const;

export const DEBOUNCE_MS = 250;

type Scheduler = (fn: () => void, ms: number) => () => void;

const defaultScheduler: Scheduler = (fn, ms) => {
  const handle = setTimeout(fn, ms);
  return () => clearTimeout(handle);
};

export class SummaryStore {
  state: UiState = {
    entities: [],
    aspects: [],
    selectedEntity: null,
    activeAspects: [],
    polarity: "all",
    k: DEFAULTS.k,
    theta: DEFAULTS.theta,
    beamSize: DEFAULTS.beamSize,
    maxLen: DEFAULTS.maxLen,
    inFlight: false,
    response: null,
    error: null,
  };

  private listeners: Array<(state: UiState) => void> = [];
  private cancelPending: (() => void) | null = null;
  private requestSeq = 0;

  constructor(
    private api: ApiClient,
    private debounceMs: number = DEBOUNCE_MS,
    private schedule: Scheduler = defaultScheduler,
  ) {}

  subscribe(listener: (state: UiState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  private patch(changes: Partial<UiState>): void {
    this.state = { ...this.state, ...changes };
    this.notify();
  }

  async init(): Promise<void> {
    try {
      const [entities, aspects] = await Promise.all([this.api.entities(), this.api.aspects()]);
      this.patch({ entities, aspects: aspects.aspects });
    } catch (err) {
      this.patch({ error: String(err) });
    }
  }

  selectEntity(entityId: string): void {
    this.patch({ selectedEntity: entityId, response: null, error: null });
    this.refreshNow(); // explicit selection skips the debounce
  }

  toggleAspect(aspect: string): void {
    const active = this.state.activeAspects.includes(aspect)
      ? this.state.activeAspects.filter((a) => a !== aspect)
      : [...this.state.activeAspects, aspect];
    this.patch({ activeAspects: active });
    this.scheduleRefresh();
  }

  setPolarity(polarity: Polarity): void {
    this.patch({ polarity });
    this.scheduleRefresh();
  }

  setK(k: number): void {
    this.patch({ k });
    this.scheduleRefresh();
  }

  setTheta(theta: number): void {
    this.patch({ theta });
    this.scheduleRefresh();
  }

  setBeamSize(beamSize: number): void {
    this.patch({ beamSize });
    this.scheduleRefresh();
  }

  setMaxLen(maxLen: number): void {
    this.patch({ maxLen });
    this.scheduleRefresh();
  }

  private scheduleRefresh(): void {
    if (!this.state.selectedEntity) {
      return;
    }
    if (this.cancelPending) {
      this.cancelPending();
    }
    this.cancelPending = this.schedule(() => {
      this.cancelPending = null;
      void this.refreshNow();
    }, this.debounceMs);
  }

  buildRequest(): SummarizeRequest {
    const s = this.state;
    const req: SummarizeRequest = {
      entity_id: s.selectedEntity ?? "",
      k: s.k,
      theta: s.theta,
      beam_size: s.beamSize,
      max_len: s.maxLen,
    };
    if (s.activeAspects.length > 0) {
      req.aspect = [...s.activeAspects];
    }
    if (s.polarity !== "all") {
      req.polarity = s.polarity;
    }
    return req;
  }

  async refreshNow(): Promise<void> {
    if (!this.state.selectedEntity) {
      return;
    }
    const seq = ++this.requestSeq;
    this.patch({ inFlight: true });
    try {
      const response = await this.api.summarize(this.buildRequest());
      if (seq !== this.requestSeq) {
        return; // superseded by a newer request; never render
      }
      this.patch({ response, error: null, inFlight: false });
    } catch (err) {
      if (seq !== this.requestSeq) {
        return;
      }
      this.patch({ error: String(err), inFlight: false });
    }
  }
}
