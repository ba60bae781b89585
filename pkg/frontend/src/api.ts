import type { DatasetInfo, ExplainResponse, Recommendation, StarResponse } from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === 'string') detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export function fetchDatasets(): Promise<DatasetInfo[]> {
  return fetch('/api/datasets').then((r) => asJson<DatasetInfo[]>(r));
}

export interface RecommendBody {
  dataset: string;
  weights: Record<string, number>;
  mode?: string;
  k?: number;
}

export function postRecommend(body: RecommendBody): Promise<Recommendation> {
  return fetch('/api/recommend', {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  }).then((r) => asJson<Recommendation>(r));
}

export function fetchStar(dataset: string, models: string[]): Promise<StarResponse> {
  const params = new URLSearchParams({ models: models.join(',') });
  return fetch(`/api/star/${encodeURIComponent(dataset)}?${params}`).then((r) =>
    asJson<StarResponse>(r),
  );
}

export function fetchExplain(dataset: string, model: string): Promise<ExplainResponse> {
  return fetch(`/api/explain/${encodeURIComponent(dataset)}/${encodeURIComponent(model)}`).then(
    (r) => asJson<ExplainResponse>(r),
  );
}
