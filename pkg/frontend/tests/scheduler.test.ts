import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { RequestPipeline } from '../src/scheduler.js';

describe('RequestPipeline', () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it('debounces a burst into one request', async () => {
    const pipeline = new RequestPipeline(150);
    let runs = 0;
    for (let i = 0; i < 25; i++) {
      pipeline.schedule(async () => {
        runs += 1;
      });
      vi.advanceTimersByTime(10); // rapid drag, under the debounce window
    }
    await vi.runAllTimersAsync();
    expect(runs).toBe(1);
  });

  it('keeps at most one request in flight, latest wins', async () => {
    const pipeline = new RequestPipeline(10);
    const order: string[] = [];
    let release: (() => void) | null = null;

    pipeline.schedule(async () => {
      order.push('first');
      await new Promise<void>((resolve) => {
        release = resolve;
      });
    });
    await vi.advanceTimersByTimeAsync(10); // first is now in flight

    pipeline.schedule(async () => {
      order.push('superseded');
    });
    await vi.advanceTimersByTimeAsync(10);
    pipeline.schedule(async () => {
      order.push('latest');
    });
    await vi.advanceTimersByTimeAsync(10);

    expect(pipeline.maxObservedInFlight).toBe(1);
    release!();
    await vi.runAllTimersAsync();
    expect(order).toEqual(['first', 'latest']);
    expect(pipeline.maxObservedInFlight).toBe(1);
  });

  it('runs queued work after the in-flight request settles', async () => {
    const pipeline = new RequestPipeline(5);
    const seen: number[] = [];
    pipeline.schedule(async () => {
      seen.push(1);
    });
    await vi.runAllTimersAsync();
    pipeline.schedule(async () => {
      seen.push(2);
    });
    await vi.runAllTimersAsync();
    expect(seen).toEqual([1, 2]);
  });
});
