import { ApiError, fetchDatasets, fetchExplain, fetchStar, postRecommend } from './api.js';
import { renderExplanation } from './explain.js';
import { fmtPercent, renderRanking } from './ranking.js';
import { RequestPipeline } from './scheduler.js';
import { renderStar } from './star.js';
import { GROUPS, PROPERTIES, PROPERTY_LABELS, type PropertyName, type Recommendation } from './types.js';
import { WeightPanel } from './weights.js';

const GROUP_TITLES: Record<string, string> = {
  P: 'Prediction error',
  C: 'Complexity',
  R: 'Resources',
};

export interface App {
  panel: WeightPanel;
  pipeline: RequestPipeline;
  root: HTMLElement;
  dataset: string | null;
  lastResponse: Recommendation | null;
  setDataset(name: string): void;
  setSlider(name: PropertyName, value: number): void;
  setGroupMaster(group: string, value: number): void;
  requestRecommendation(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function mountApp(root: HTMLElement, debounceMs = 150): App {
  root.replaceChildren();
  const panel = new WeightPanel();
  const pipeline = new RequestPipeline(debounceMs);

  const header = el('header', 'topbar');
  header.append(el('h1', undefined, 'modelrank'));
  const datasetSelect = el('select', 'dataset-select');
  datasetSelect.id = 'dataset-select';
  header.append(datasetSelect);
  const errorBanner = el('p', 'error-banner');
  errorBanner.hidden = true;
  header.append(errorBanner);
  root.append(header);

  const layout = el('div', 'layout');
  const weightsSection = el('section', 'weights-panel');
  weightsSection.append(el('h2', undefined, 'Property weights'));
  const sliderInputs = new Map<PropertyName, HTMLInputElement>();
  const masterInputs = new Map<string, HTMLInputElement>();
  const echoSpans = new Map<PropertyName, HTMLSpanElement>();

  for (const [group, members] of Object.entries(GROUPS)) {
    const block = el('fieldset', 'weight-group');
    block.dataset.group = group;
    const legend = el('legend', undefined, GROUP_TITLES[group]);
    block.append(legend);

    const masterRow = el('div', 'slider-row master');
    masterRow.append(el('small', undefined, 'group master'));
    const master = document.createElement('input');
    master.type = 'range';
    master.min = '0';
    master.max = '100';
    master.step = 'any';
    master.value = String(panel.getGroupMaster(group));
    master.dataset.group = group;
    master.addEventListener('input', () => {
      app.setGroupMaster(group, Number(master.value));
    });
    masterInputs.set(group, master);
    masterRow.append(master);
    block.append(masterRow);

    for (const prop of members) {
      const row = el('div', 'slider-row');
      row.append(el('small', undefined, PROPERTY_LABELS[prop]));
      const input = document.createElement('input');
      input.type = 'range';
      input.min = '0';
      input.max = '100';
      input.step = 'any';
      input.value = String(panel.getSlider(prop));
      input.dataset.property = prop;
      input.addEventListener('input', () => {
        app.setSlider(prop, Number(input.value));
      });
      sliderInputs.set(prop, input);
      const echo = el('span', 'weight-echo');
      echo.dataset.weightFor = prop;
      echoSpans.set(prop, echo);
      row.append(input, echo);
      block.append(row);
    }
    weightsSection.append(block);
  }
  layout.append(weightsSection);

  const rankingSection = el('section', 'ranking-panel');
  rankingSection.append(el('h2', undefined, 'Recommended models'));
  const rankingContainer = el('div', 'ranking');
  rankingSection.append(rankingContainer);
  layout.append(rankingSection);

  const detailSection = el('section', 'detail-panel');
  const starContainer = el('div', 'star');
  const explainContainer = el('div', 'explain');
  detailSection.append(el('h2', undefined, 'Property profile'), starContainer, explainContainer);
  layout.append(detailSection);
  root.append(layout);

  let selection: string[] = [];

  const app: App = {
    panel,
    pipeline,
    root,
    dataset: null,
    lastResponse: null,
    setDataset(name: string) {
      app.dataset = name;
      selection = [];
      datasetSelect.value = name;
      app.requestRecommendation();
    },
    setSlider(name, value) {
      panel.setSlider(name, value);
      syncSliderInputs();
      app.requestRecommendation();
    },
    setGroupMaster(group, value) {
      panel.setGroupMaster(group, value);
      syncSliderInputs();
      app.requestRecommendation();
    },
    requestRecommendation() {
      if (!app.dataset) return;
      const dataset = app.dataset;
      pipeline.schedule(async () => {
        let weights: Record<string, number>;
        try {
          weights = panel.effectiveWeights();
        } catch (e) {
          showError((e as Error).message);
          return;
        }
        try {
          const response = await postRecommend({ dataset, weights, mode: 'compositional' });
          hideError();
          app.lastResponse = response;
          renderRanking(rankingContainer, response, {
            onSelect: (model) => void selectModel(model),
            onExpand: (model) => void showExplanation(model),
          });
          renderWeightEcho(response.weights);
          await refreshDetails(response);
        } catch (e) {
          if (e instanceof ApiError && e.status === 422) {
            showError(e.detail); // sliders keep their positions
          } else {
            showError(String(e));
          }
        }
      });
    },
  };

  function syncSliderInputs(): void {
    for (const [prop, input] of sliderInputs) {
      input.value = String(panel.getSlider(prop));
    }
    for (const [group, input] of masterInputs) {
      input.value = String(panel.getGroupMaster(group));
    }
  }

  function renderWeightEcho(weights: Record<string, number>): void {
    for (const prop of PROPERTIES) {
      const span = echoSpans.get(prop);
      if (!span) continue;
      const value = weights[prop];
      span.dataset.score = `weights.${prop}`;
      span.dataset.raw = String(value);
      span.textContent = fmtPercent(value ?? 0);
    }
  }

  function showError(message: string): void {
    errorBanner.textContent = message;
    errorBanner.hidden = false;
  }

  function hideError(): void {
    errorBanner.hidden = true;
    errorBanner.textContent = '';
  }

  async function refreshDetails(response: Recommendation): Promise<void> {
    const ranked = response.ranking.map((r) => r.model);
    selection = selection.filter((m) => ranked.includes(m));
    if (selection.length === 0 && ranked.length > 0) selection = [ranked[0]];
    await Promise.all([drawStar(), showExplanation(selection[0])]);
  }

  async function selectModel(model: string): Promise<void> {
    if (selection.includes(model)) {
      selection = selection.filter((m) => m !== model);
    } else {
      selection = [...selection, model].slice(-3);
    }
    await Promise.all([drawStar(), showExplanation(model)]);
  }

  async function drawStar(): Promise<void> {
    if (!app.dataset || selection.length === 0) {
      renderStar(starContainer, null, []);
      return;
    }
    try {
      const star = await fetchStar(app.dataset, selection);
      renderStar(starContainer, star, selection);
    } catch {
      renderStar(starContainer, null, []);
    }
  }

  async function showExplanation(model: string | undefined): Promise<void> {
    if (!app.dataset || !model) {
      renderExplanation(explainContainer, null);
      return;
    }
    try {
      const explain = await fetchExplain(app.dataset, model);
      renderExplanation(explainContainer, explain);
    } catch {
      renderExplanation(explainContainer, null);
    }
  }

  datasetSelect.addEventListener('change', () => app.setDataset(datasetSelect.value));

  void fetchDatasets()
    .then((datasets) => {
      datasetSelect.replaceChildren(
        ...datasets.map((d) => {
          const option = document.createElement('option');
          option.value = d.name;
          option.textContent = `${d.name} (${d.group}, h=${d.horizon}, ${d.num_series} series)`;
          return option;
        }),
      );
      if (datasets.length > 0) app.setDataset(datasets[0].name);
    })
    .catch((e) => showError(String(e)));

  return app;
}
