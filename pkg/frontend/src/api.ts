// Typed client for the summarization service. Everything the UI shows
// comes verbatim from these response bodies.

export interface EntityInfo {
  entity_id: string;
  review_count: number;
}

export interface AspectsInfo {
  domain: string;
  aspects: string[];
}

export interface SelectedOpinion {
  phrase: string;
  size: number;
  aspect: string;
  polarity: string;
  review_id: string;
}

export interface ClusterMember {
  phrase: string;
  review_id: string;
  aspect: string;
  polarity: string;
}

export interface ClusterInfo {
  size: number;
  representative: string;
  aspect: string;
  polarity: string;
  members: ClusterMember[];
}

export interface SummarizeResponse {
  entity_id: string;
  status: "ok" | "empty_selection";
  summary: string;
  input_text?: string;
  selected: SelectedOpinion[];
  clusters: ClusterInfo[];
  timing_ms: number;
}

export interface SummarizeRequest {
  entity_id: string;
  k?: number;
  theta?: number;
  seed?: number;
  aspect?: string[];
  polarity?: string;
  beam_size?: number;
  max_len?: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path);
    if (!res.ok) {
      throw new Error(`GET ${path} failed: ${res.status}`);
    }
    return (await res.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.getJson("/api/health");
  }

  entities(): Promise<EntityInfo[]> {
    return this.getJson("/api/entities");
  }

  aspects(): Promise<AspectsInfo> {
    return this.getJson("/api/aspects");
  }

  async summarize(req: SummarizeRequest): Promise<SummarizeResponse> {
    const res = await this.fetchFn(this.baseUrl + "/api/summarize", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
    if (!res.ok) {
      throw new Error(`summarize failed: ${res.status}`);
    }
    return (await res.json()) as SummarizeResponse;
  }
}
