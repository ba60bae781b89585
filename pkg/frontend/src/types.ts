export interface DatasetInfo {
  name: string;
  group: string;
  horizon: number;
  num_series: number;
}

export interface RankedModel {
  model: string;
  compound: number;
  estimates: Record<string, number>;
  contributions: Record<string, number>;
  labels: Record<string, string>;
}

export interface Recommendation {
  dataset: string;
  mode: string;
  weights: Record<string, number>;
  ranking: RankedModel[];
}

export interface StarAxis {
  property: string;
  value: number;
  source: 'true' | 'estimated';
}

export interface StarResponse {
  dataset: string;
  profiles: Record<string, StarAxis[]>;
}

export interface ExplainResponse {
  dataset: string;
  model: string;
  weights: Record<string, number>;
  compound: number;
  estimates: Record<string, number>;
  contributions: Record<string, number>;
  labels: Record<string, string>;
  importances: Record<string, Record<string, number>>;
}

/** The nine measured properties, in canonical axis order. */
export const PROPERTIES = [
  'mase',
  'rmse',
  'mape',
  'params',
  'size',
  'train_power',
  'train_time',
  'infer_power',
  'infer_time',
] as const;

export type PropertyName = (typeof PROPERTIES)[number];

/** Property groups: prediction error, complexity, resources. */
export const GROUPS: Record<string, PropertyName[]> = {
  P: ['mase', 'rmse', 'mape'],
  C: ['params', 'size'],
  R: ['train_power', 'train_time', 'infer_power', 'infer_time'],
};

export const PROPERTY_LABELS: Record<PropertyName, string> = {
  mase: 'MASE',
  rmse: 'RMSE',
  mape: 'MAPE',
  params: 'Parameters',
  size: 'Model size',
  train_power: 'Train energy',
  train_time: 'Train time',
  infer_power: 'Inference energy',
  infer_time: 'Inference time',
};
