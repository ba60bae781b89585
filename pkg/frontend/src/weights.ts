import { GROUPS, PROPERTIES, type PropertyName } from './types.js';

/**
 * Slider state for the nine property weights plus three group masters.
 *
 * Sliders live on a 0..100 scale; the effective weights sent to the server
 * are the slider values normalized to sum 1. A group master rescales its
 * members proportionally, so within-group ratios survive coarse steering.
 */
export class WeightPanel {
  private sliders: Record<PropertyName, number>;

  constructor(initial?: Partial<Record<PropertyName, number>>) {
    // Defaults mirror the server's equal-thirds weighting, scaled to peak 100:
    // error properties 2/3 of the complexity peak, resource properties half.
    this.sliders = {
      mase: 200 / 3,
      rmse: 200 / 3,
      mape: 200 / 3,
      params: 100,
      size: 100,
      train_power: 50,
      train_time: 50,
      infer_power: 50,
      infer_time: 50,
    };
    if (initial) {
      for (const [name, value] of Object.entries(initial)) {
        this.setSlider(name as PropertyName, value as number);
      }
    }
  }

  setSlider(name: PropertyName, value: number): void {
    if (!(name in this.sliders)) throw new Error(`unknown property ${name}`);
    this.sliders[name] = clamp(value);
  }

  getSlider(name: PropertyName): number {
    return this.sliders[name];
  }

  /** Master position of a group: the maximum of its member sliders. */
  getGroupMaster(group: string): number {
    const members = GROUPS[group];
    if (!members) throw new Error(`unknown group ${group}`);
    return Math.max(...members.map((m) => this.sliders[m]));
  }

  /** Scale every member so the group's peak lands on `value`, keeping ratios. */
  setGroupMaster(group: string, value: number): void {
    const members = GROUPS[group];
    if (!members) throw new Error(`unknown group ${group}`);
    const target = clamp(value);
    const peak = Math.max(...members.map((m) => this.sliders[m]));
    for (const m of members) {
      this.sliders[m] = peak === 0 ? target : clamp((this.sliders[m] / peak) * target);
    }
  }

  /** True when every slider is zero; no valid weighting can be formed. */
  isAllZero(): boolean {
    return PROPERTIES.every((p) => this.sliders[p] === 0);
  }

  /** Normalized effective weights (sum exactly accumulates to 1 in floats). */
  effectiveWeights(): Record<string, number> {
    const total = PROPERTIES.reduce((acc, p) => acc + this.sliders[p], 0);
    if (total === 0) throw new Error('all weights are zero');
    const out: Record<string, number> = {};
    for (const p of PROPERTIES) out[p] = this.sliders[p] / total;
    return out;
  }
}

function clamp(value: number): number {
  if (!Number.isFinite(value)) throw new Error(`slider value must be finite, got ${value}`);
  return Math.min(100, Math.max(0, value));
}
