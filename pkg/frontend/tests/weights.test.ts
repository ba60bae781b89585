import { describe, expect, it } from 'vitest';

import { GROUPS, PROPERTIES } from '../src/types.js';
import { WeightPanel } from '../src/weights.js';

describe('WeightPanel', () => {
  it('normalized weights always sum to 1', () => {
    const panel = new WeightPanel();
    const sum = Object.values(panel.effectiveWeights()).reduce((a, b) => a + b, 0);
    expect(sum).toBeCloseTo(1.0, 12);
    panel.setSlider('mase', 3);
    panel.setSlider('size', 97);
    const sum2 = Object.values(panel.effectiveWeights()).reduce((a, b) => a + b, 0);
    expect(sum2).toBeCloseTo(1.0, 12);
  });

  it('all sliders equal gives one ninth each', () => {
    const panel = new WeightPanel();
    for (const p of PROPERTIES) panel.setSlider(p, 50);
    for (const value of Object.values(panel.effectiveWeights())) {
      expect(value).toBeCloseTo(1 / 9, 12);
    }
  });

  it('defaults reproduce equal-thirds group weighting', () => {
    const weights = new WeightPanel().effectiveWeights();
    for (const members of Object.values(GROUPS)) {
      const groupSum = members.reduce((acc, p) => acc + weights[p], 0);
      expect(groupSum).toBeCloseTo(1 / 3, 12);
    }
  });

  it('group master scales members proportionally', () => {
    const panel = new WeightPanel();
    panel.setSlider('mase', 80);
    panel.setSlider('rmse', 40);
    panel.setSlider('mape', 20);
    panel.setGroupMaster('P', 40); // peak 80 -> 40, halving everything
    expect(panel.getSlider('mase')).toBeCloseTo(40);
    expect(panel.getSlider('rmse')).toBeCloseTo(20);
    expect(panel.getSlider('mape')).toBeCloseTo(10);
    expect(panel.getGroupMaster('P')).toBeCloseTo(40);
  });

  it('master raises an all-zero group uniformly', () => {
    const panel = new WeightPanel();
    panel.setGroupMaster('R', 0);
    panel.setGroupMaster('R', 60);
    for (const p of GROUPS.R) expect(panel.getSlider(p)).toBe(60);
  });

  it('rejects normalization when everything is zero', () => {
    const panel = new WeightPanel();
    for (const p of PROPERTIES) panel.setSlider(p, 0);
    expect(panel.isAllZero()).toBe(true);
    expect(() => panel.effectiveWeights()).toThrow(/zero/);
  });

  it('clamps slider values into [0, 100]', () => {
    const panel = new WeightPanel();
    panel.setSlider('mase', 250);
    expect(panel.getSlider('mase')).toBe(100);
    panel.setSlider('mase', -5);
    expect(panel.getSlider('mase')).toBe(0);
  });
});
