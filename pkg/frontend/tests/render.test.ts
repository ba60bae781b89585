import { beforeEach, describe, expect, it, vi } from 'vitest';

import { renderExplanation } from '../src/explain.js';
import { renderStar } from '../src/star.js';
import { PROPERTIES } from '../src/types.js';
import { fixtures } from './mockServer';

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement('div');
  document.body.append(container);
});

describe('renderStar', () => {
  it('draws nine solid edges for fully measured profiles', () => {
    renderStar(container, fixtures.star.response, fixtures.star.models);
    const edges = container.querySelectorAll('.star-edge');
    expect(edges.length).toBe(9);
    expect(container.querySelectorAll('.star-edge.estimated').length).toBe(0);
    const labels = Array.from(container.querySelectorAll('.axis-label')).map((n) => n.textContent);
    expect(labels.length).toBe(PROPERTIES.length);
  });

  it('dashes edges touching estimated values', () => {
    const model = 'naive';
    const synthetic = {
      dataset: 'x',
      profiles: {
        [model]: PROPERTIES.map((p, i) => ({
          property: p,
          value: 0.5,
          source: i === 0 ? 'estimated' : 'true',
        })),
      },
    };
    renderStar(container, synthetic as any, [model]);
    // Axis 0 touches two edges: into it and out of it.
    expect(container.querySelectorAll('.star-edge.estimated').length).toBe(2);
  });

  it('renders a placeholder for an empty selection', () => {
    renderStar(container, null, []);
    expect(container.querySelector('.placeholder')).toBeTruthy();
    expect(container.querySelector('svg')).toBeNull();
  });

  it('draws at most three overlaid polygons with a legend', () => {
    const axes = PROPERTIES.map((p) => ({ property: p, value: 0.7, source: 'true' }));
    const star = {
      dataset: 'x',
      profiles: { m1: axes, m2: axes, m3: axes, m4: axes },
    };
    renderStar(container, star as any, ['m1', 'm2', 'm3', 'm4']);
    expect(container.querySelectorAll('g[data-model]').length).toBe(3);
    expect(container.querySelectorAll('.legend li').length).toBe(3);
  });
});

describe('renderExplanation', () => {
  it('shows contribution bars that sum to one hundred percent', () => {
    renderExplanation(container, fixtures.explain.response);
    const spans = container.querySelectorAll<HTMLElement>('.contributions [data-score]');
    const total = Array.from(spans).reduce((acc, n) => acc + Number(n.dataset.raw), 0);
    expect(total).toBeCloseTo(1.0, 9);
  });

  it('switches importance tabs without any network request', () => {
    const spy = vi.fn();
    vi.stubGlobal('fetch', spy);
    renderExplanation(container, fixtures.explain.response, 'mase');
    const panel = container.querySelector<HTMLElement>('.importance-bars');
    expect(panel!.dataset.property).toBe('mase');
    const tabs = container.querySelectorAll<HTMLButtonElement>('.tabs button');
    const sizeTab = Array.from(tabs).find((t) => t.dataset.property === 'size');
    sizeTab!.click();
    expect(panel!.dataset.property).toBe('size');
    expect(spy).not.toHaveBeenCalled();
    vi.unstubAllGlobals();
  });

  it('renders the not-available placeholder on missing explanations', () => {
    renderExplanation(container, null);
    expect(container.querySelector('.placeholder')!.textContent).toMatch(/no explanation/);
  });

  it('importance bars carry the data-score contract', () => {
    renderExplanation(container, fixtures.explain.response);
    const bars = container.querySelectorAll<HTMLElement>('.importance-bars [data-score]');
    expect(bars.length).toBeGreaterThan(0);
    for (const bar of bars) {
      expect(bar.dataset.raw).toBeTruthy();
    }
  });
});
