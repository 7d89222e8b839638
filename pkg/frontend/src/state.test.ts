import { describe, expect, it, vi } from "vitest";

import { ApiClient, SummarizeRequest, SummarizeResponse } from "./api.js";
import { DEFAULTS, SummaryStore } from "./state.js";

function okResponse(overrides: Partial<SummarizeResponse> = {}): SummarizeResponse {
  return {
    entity_id: "e0",
    status: "ok",
    summary: "the staff was really rude .",
    selected: [
      { phrase: "staff really rude", size: 4, aspect: "service", polarity: "negative",
        review_id: "r1" },
    ],
    clusters: [],
    timing_ms: 1,
    ...overrides,
  };
}

interface Deferred {
  resolve: (r: SummarizeResponse) => void;
  promise: Promise<SummarizeResponse>;
}

function deferred(): Deferred {
  let resolve!: (r: SummarizeResponse) => void;
  const promise = new Promise<SummarizeResponse>((res) => {
    resolve = res;
  });
  return { resolve, promise };
}

class FakeScheduler {
  pending: Array<{ fn: () => void; cancelled: boolean }> = [];

  schedule = (fn: () => void, _ms: number): (() => void) => {
    const task = { fn, cancelled: false };
    this.pending.push(task);
    return () => {
      task.cancelled = true;
    };
  };

  flush(): void {
    const tasks = this.pending;
    this.pending = [];
    for (const t of tasks) {
      if (!t.cancelled) t.fn();
    }
  }
}

type SummarizeMock = (req: SummarizeRequest) => Promise<SummarizeResponse>;

function makeStore(summarize: SummarizeMock) {
  const scheduler = new FakeScheduler();
  const api = {
    entities: async () => [{ entity_id: "e0", review_count: 2 }],
    aspects: async () => ({ domain: "hotel", aspects: ["service", "room"] }),
    summarize,
  } as unknown as ApiClient;
  const store = new SummaryStore(api, 250, scheduler.schedule);
  return { store, scheduler };
}

const flushMicrotasks = () => new Promise<void>((res) => setTimeout(res, 0));

describe("SummaryStore", () => {
  it("starts with the documented slider defaults", () => {
    const { store } = makeStore(async () => okResponse());
    expect(store.state.theta).toBe(0.8);
    expect(store.state.k).toBe(15);
    expect(store.state.beamSize).toBe(5);
    expect(store.state.maxLen).toBe(60);
    expect(DEFAULTS).toEqual({ k: 15, theta: 0.8, beamSize: 5, maxLen: 60 });
  });

  it("selecting an entity queries immediately", async () => {
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(async () => okResponse());
    const { store } = makeStore(summarize);
    store.selectEntity("e0");
    await flushMicrotasks();
    expect(summarize).toHaveBeenCalledTimes(1);
    expect(store.state.response?.summary).toBe("the staff was really rude .");
    expect(store.state.inFlight).toBe(false);
  });

  it("polarity change re-queries with the polarity in the request", async () => {
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(async () => okResponse());
    const { store, scheduler } = makeStore(summarize);
    store.selectEntity("e0");
    await flushMicrotasks();
    store.setPolarity("negative");
    scheduler.flush();
    await flushMicrotasks();
    expect(summarize).toHaveBeenCalledTimes(2);
    const req = summarize.mock.calls[1][0];
    expect(req.polarity).toBe("negative");
    // contract: the service only returns matching opinions; the store
    // renders the response untouched
    expect(store.state.response?.selected.every((o) => o.polarity === "negative")).toBe(true);
  });

  it("aspect chips land in the request, 'all' polarity is omitted", async () => {
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(async () => okResponse());
    const { store, scheduler } = makeStore(summarize);
    store.selectEntity("e0");
    await flushMicrotasks();
    store.toggleAspect("service");
    store.toggleAspect("room");
    store.toggleAspect("service"); // off again
    scheduler.flush();
    await flushMicrotasks();
    const req = summarize.mock.calls.at(-1)![0];
    expect(req.aspect).toEqual(["room"]);
    expect(req.polarity).toBeUndefined();
  });

  it("a burst of slider changes debounces into one request", async () => {
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(async () => okResponse());
    const { store, scheduler } = makeStore(summarize);
    store.selectEntity("e0");
    await flushMicrotasks();
    summarize.mockClear();
    store.setK(5);
    store.setK(4);
    store.setTheta(0.6);
    store.setMaxLen(40);
    expect(summarize).not.toHaveBeenCalled(); // still pending
    scheduler.flush();
    await flushMicrotasks();
    expect(summarize).toHaveBeenCalledTimes(1);
    const req = summarize.mock.calls[0][0];
    expect(req).toMatchObject({ k: 4, theta: 0.6, max_len: 40 });
  });

  it("superseded responses never render", async () => {
    const first = deferred();
    const second = deferred();
    const calls: Deferred[] = [first, second];
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(() => calls.shift()!.promise);
    const { store, scheduler } = makeStore(summarize);

    store.selectEntity("e0"); // request 1 (slow)
    store.setK(2); // request 2 scheduled
    scheduler.flush(); // request 2 issued while 1 is in flight
    await flushMicrotasks();
    expect(summarize).toHaveBeenCalledTimes(2);

    second.resolve(okResponse({ summary: "newer" }));
    await flushMicrotasks();
    expect(store.state.response?.summary).toBe("newer");

    first.resolve(okResponse({ summary: "stale" }));
    await flushMicrotasks();
    expect(store.state.response?.summary).toBe("newer"); // stale one dropped
    expect(store.state.inFlight).toBe(false);
  });

  it("no requests are issued before an entity is selected", () => {
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(async () => okResponse());
    const { store, scheduler } = makeStore(summarize);
    store.setK(3);
    store.setPolarity("positive");
    scheduler.flush();
    expect(summarize).not.toHaveBeenCalled();
  });

  it("service errors surface without clobbering newer requests", async () => {
    const summarize = vi.fn<[SummarizeRequest], Promise<SummarizeResponse>>(async () => {
      throw new Error("boom");
    });
    const { store } = makeStore(summarize);
    store.selectEntity("e0");
    await flushMicrotasks();
    expect(store.state.error).toContain("boom");
    expect(store.state.inFlight).toBe(false);
  });

  it("init loads entities and aspect categories", async () => {
    const { store } = makeStore(async () => okResponse());
    await store.init();
    expect(store.state.entities).toEqual([{ entity_id: "e0", review_count: 2 }]);
    expect(store.state.aspects).toEqual(["service", "room"]);
  });
});
