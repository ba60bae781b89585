import { PROPERTIES, PROPERTY_LABELS, type ExplainResponse, type PropertyName } from './types.js';
import { fmtPercent } from './ranking.js';

/**
 * Contribution bars plus a per-property feature-importance panel.
 *
 * The explain response already carries importances for every property, so
 * switching tabs only re-renders; no further requests are made.
 */
export function renderExplanation(
  container: HTMLElement,
  explain: ExplainResponse | null,
  selectedProperty: PropertyName = 'mase',
): void {
  container.replaceChildren();
  if (!explain) {
    const placeholder = document.createElement('p');
    placeholder.className = 'placeholder';
    placeholder.textContent = 'no explanation available';
    return void container.append(placeholder);
  }

  const heading = document.createElement('h3');
  heading.textContent = `Why ${explain.model}?`;
  container.append(heading);

  const contrib = document.createElement('section');
  contrib.className = 'contributions';
  const contribTitle = document.createElement('h4');
  contribTitle.textContent = 'Contribution to compound estimate';
  contrib.append(contribTitle);
  for (const prop of PROPERTIES) {
    const value = explain.contributions[prop];
    if (value === undefined) continue;
    const row = document.createElement('div');
    row.className = 'bar-row';
    const tag = document.createElement('small');
    tag.textContent = PROPERTY_LABELS[prop as PropertyName];
    const track = document.createElement('div');
    track.className = 'bar-track';
    const fill = document.createElement('div');
    fill.className = 'bar-fill contrib';
    fill.style.width = `${Math.min(100, 100 * value)}%`;
    track.append(fill);
    const score = document.createElement('span');
    score.dataset.score = `contributions.${prop}`;
    score.dataset.raw = String(value);
    score.textContent = fmtPercent(value);
    row.append(tag, track, score);
    contrib.append(row);
  }
  container.append(contrib);

  const importancesSection = document.createElement('section');
  importancesSection.className = 'importances';
  const impTitle = document.createElement('h4');
  impTitle.textContent = 'Feature importance per property estimator';
  importancesSection.append(impTitle);

  const tabs = document.createElement('div');
  tabs.className = 'tabs';
  const panel = document.createElement('div');
  panel.className = 'importance-bars';

  const drawPanel = (prop: PropertyName) => {
    panel.replaceChildren();
    panel.dataset.property = prop;
    const importances = explain.importances[prop] ?? {};
    const entries = Object.entries(importances).sort((a, b) => b[1] - a[1]).slice(0, 8);
    for (const [feature, value] of entries) {
      const row = document.createElement('div');
      row.className = 'bar-row';
      const tag = document.createElement('small');
      tag.textContent = feature;
      const track = document.createElement('div');
      track.className = 'bar-track';
      const fill = document.createElement('div');
      fill.className = 'bar-fill importance';
      fill.style.width = `${Math.min(100, 100 * value)}%`;
      track.append(fill);
      const score = document.createElement('span');
      score.dataset.score = `importances.${prop}.${feature}`;
      score.dataset.raw = String(value);
      score.textContent = fmtPercent(value);
      row.append(tag, track, score);
      panel.append(row);
    }
    tabs.querySelectorAll('button').forEach((b) => {
      b.classList.toggle('active', b.dataset.property === prop);
    });
  };

  for (const prop of PROPERTIES) {
    if (!(prop in explain.importances)) continue;
    const tab = document.createElement('button');
    tab.type = 'button';
    tab.dataset.property = prop;
    tab.textContent = PROPERTY_LABELS[prop as PropertyName];
    tab.addEventListener('click', () => drawPanel(prop));
    tabs.append(tab);
  }
  importancesSection.append(tabs, panel);
  container.append(importancesSection);
  drawPanel(selectedProperty in explain.importances ? selectedProperty : (PROPERTIES.find((p) => p in explain.importances) ?? 'mase'));
}
