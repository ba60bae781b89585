import { PROPERTIES, PROPERTY_LABELS, type PropertyName, type Recommendation } from './types.js';

/** Format a score for display; raw server value travels in data-raw. */
export function fmtScore(value: number): string {
  return value.toFixed(3);
}

export function fmtPercent(value: number): string {
  return `${(100 * value).toFixed(1)}%`;
}

function scoreSpan(path: string, value: number, text: string, cls = 'score'): HTMLSpanElement {
  const span = document.createElement('span');
  span.className = cls;
  span.dataset.score = path;
  span.dataset.raw = String(value);
  span.textContent = text;
  return span;
}

function badge(label: string, title: string): HTMLSpanElement {
  const span = document.createElement('span');
  span.className = `badge label-${label}`;
  span.textContent = label;
  span.title = title;
  return span;
}

export interface RankingCallbacks {
  onSelect?: (model: string) => void;
  onExpand?: (model: string, card: HTMLElement) => void;
}

/**
 * Render model cards in exactly the server's ranking order. Every number
 * shown originates from the response; nothing is recomputed client-side.
 */
export function renderRanking(
  container: HTMLElement,
  rec: Recommendation,
  callbacks: RankingCallbacks = {},
): void {
  container.replaceChildren();
  rec.ranking.forEach((entry, idx) => {
    const card = document.createElement('article');
    card.className = 'model-card';
    card.dataset.model = entry.model;
    card.dataset.rank = String(idx + 1);

    const header = document.createElement('header');
    const rank = document.createElement('span');
    rank.className = 'rank';
    rank.textContent = `#${idx + 1}`;
    const name = document.createElement('h3');
    name.textContent = entry.model;
    header.append(rank, name);
    header.append(scoreSpan(`ranking.${idx}.compound`, entry.compound, fmtScore(entry.compound), 'score compound'));
    if (entry.labels.overall) {
      header.append(badge(entry.labels.overall, 'overall rating'));
    }
    card.append(header);

    const badges = document.createElement('div');
    badges.className = 'property-badges';
    for (const prop of PROPERTIES) {
      const label = entry.labels[prop];
      if (!label) continue;
      const cell = document.createElement('span');
      cell.className = 'property-cell';
      cell.title = `${PROPERTY_LABELS[prop as PropertyName]}: estimate ${fmtScore(entry.estimates[prop])}`;
      const tag = document.createElement('small');
      tag.textContent = PROPERTY_LABELS[prop as PropertyName];
      cell.append(tag, badge(label, `${prop} rating`));
      badges.append(cell);
    }
    card.append(badges);

    const bars = document.createElement('div');
    bars.className = 'contribution-bars';
    for (const prop of PROPERTIES) {
      const value = entry.contributions[prop];
      if (value === undefined) continue;
      const row = document.createElement('div');
      row.className = 'bar-row';
      const tag = document.createElement('small');
      tag.textContent = PROPERTY_LABELS[prop as PropertyName];
      const track = document.createElement('div');
      track.className = 'bar-track';
      const fill = document.createElement('div');
      fill.className = 'bar-fill';
      fill.style.width = `${Math.min(100, 100 * value)}%`;
      track.append(fill);
      row.append(tag, track, scoreSpan(`ranking.${idx}.contributions.${prop}`, value, fmtPercent(value)));
      bars.append(row);
    }
    card.append(bars);

    const expand = document.createElement('button');
    expand.type = 'button';
    expand.className = 'expand';
    expand.textContent = 'feature importances';
    expand.addEventListener('click', (ev) => {
      ev.stopPropagation();
      callbacks.onExpand?.(entry.model, card);
    });
    card.append(expand);

    card.addEventListener('click', () => callbacks.onSelect?.(entry.model));
    container.append(card);
  });
}

export function renderedOrder(container: HTMLElement): string[] {
  return Array.from(container.querySelectorAll<HTMLElement>('.model-card')).map(
    (el) => el.dataset.model ?? '',
  );
}
