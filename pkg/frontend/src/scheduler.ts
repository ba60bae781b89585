/**
 * Debounced, latest-wins request pipeline.
 *
 * Slider drags fire dozens of change events per second; the pipeline keeps
 * at most one request in flight and one pending. A newly scheduled task
 * replaces the pending one, so the view always converges on the latest
 * weights without a request storm.
 */
export class RequestPipeline {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private pending: (() => Promise<void>) | null = null;
  inFlightCount = 0;
  maxObservedInFlight = 0;

  constructor(private readonly debounceMs = 150) {}

  schedule(task: () => Promise<void>): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.submit(task);
    }, this.debounceMs);
  }

  private submit(task: () => Promise<void>): void {
    if (this.inFlight) {
      this.pending = task; // latest wins
      return;
    }
    void this.run(task);
  }

  private async run(task: () => Promise<void>): Promise<void> {
    this.inFlight = true;
    this.inFlightCount += 1;
    this.maxObservedInFlight = Math.max(this.maxObservedInFlight, this.inFlightCount);
    try {
      await task();
    } finally {
      this.inFlightCount -= 1;
      this.inFlight = false;
      const next = this.pending;
      this.pending = null;
      if (next) void this.run(next);
    }
  }
}
