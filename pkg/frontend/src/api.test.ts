import { describe, expect, it, vi } from "vitest";

import { ApiClient, SummarizeResponse } from "./api.js";

function jsonResponse(body: unknown, ok = true, status = 200): Response {
  return {
    ok,
    status,
    json: async () => body,
  } as unknown as Response;
}

type FetchArgs = [string, RequestInit?];

describe("ApiClient", () => {
  it("fetches entities from the documented endpoint", async () => {
    const fetchFn = vi.fn<FetchArgs, Promise<Response>>(
      async () => jsonResponse([{ entity_id: "e0", review_count: 3 }]),
    );
    const client = new ApiClient("http://svc", fetchFn);
    const entities = await client.entities();
    expect(fetchFn).toHaveBeenCalledWith("http://svc/api/entities");
    expect(entities).toEqual([{ entity_id: "e0", review_count: 3 }]);
  });

  it("posts summarize requests as JSON", async () => {
    const body: Partial<SummarizeResponse> = { entity_id: "e0", status: "ok", summary: "s" };
    const fetchFn = vi.fn<FetchArgs, Promise<Response>>(async () => jsonResponse(body));
    const client = new ApiClient("", fetchFn);
    const res = await client.summarize({ entity_id: "e0", k: 5, polarity: "negative" });
    expect(res.summary).toBe("s");
    const [url, init] = fetchFn.mock.calls[0];
    expect(url).toBe("/api/summarize");
    expect(init?.method).toBe("POST");
    expect(JSON.parse(init?.body as string)).toEqual({
      entity_id: "e0",
      k: 5,
      polarity: "negative",
    });
  });

  it("raises on non-ok responses", async () => {
    const fetchFn = vi.fn<FetchArgs, Promise<Response>>(
      async () => jsonResponse({ detail: "nope" }, false, 404),
    );
    const client = new ApiClient("", fetchFn);
    await expect(client.summarize({ entity_id: "zzz" })).rejects.toThrow("404");
  });
});
