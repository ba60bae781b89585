import { PROPERTIES, PROPERTY_LABELS, type PropertyName, type StarResponse } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const COLORS = ['#2563eb', '#dc2626', '#059669'];

function polar(center: number, radius: number, axis: number, total: number): [number, number] {
  const angle = (2 * Math.PI * axis) / total - Math.PI / 2;
  return [center + radius * Math.cos(angle), center + radius * Math.sin(angle)];
}

/**
 * Radar chart over the nine property axes, scale (0, 1]. Edges touching an
 * estimated value are dashed, measured-only edges solid. At most three
 * models are drawn; an empty selection renders a placeholder.
 */
export function renderStar(container: HTMLElement, star: StarResponse | null, models: string[]): void {
  container.replaceChildren();
  if (!star || models.length === 0) {
    const placeholder = document.createElement('p');
    placeholder.className = 'placeholder';
    placeholder.textContent = 'Select up to three models to compare their property profiles.';
    container.append(placeholder);
    return;
  }
  const size = 300;
  const center = size / 2;
  const radius = size / 2 - 40;
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${size} ${size}`);
  svg.setAttribute('role', 'img');

  const n = PROPERTIES.length;
  for (let ring = 1; ring <= 4; ring++) {
    const poly = document.createElementNS(SVG_NS, 'polygon');
    const points = PROPERTIES.map((_, i) => polar(center, (radius * ring) / 4, i, n).join(','));
    poly.setAttribute('points', points.join(' '));
    poly.setAttribute('class', 'grid-ring');
    svg.append(poly);
  }
  PROPERTIES.forEach((prop, i) => {
    const [x, y] = polar(center, radius, i, n);
    const axis = document.createElementNS(SVG_NS, 'line');
    axis.setAttribute('x1', String(center));
    axis.setAttribute('y1', String(center));
    axis.setAttribute('x2', String(x));
    axis.setAttribute('y2', String(y));
    axis.setAttribute('class', 'grid-axis');
    svg.append(axis);
    const [lx, ly] = polar(center, radius + 18, i, n);
    const label = document.createElementNS(SVG_NS, 'text');
    label.setAttribute('x', String(lx));
    label.setAttribute('y', String(ly));
    label.setAttribute('class', 'axis-label');
    label.setAttribute('text-anchor', 'middle');
    label.textContent = PROPERTY_LABELS[prop as PropertyName];
    svg.append(label);
  });

  models.slice(0, 3).forEach((model, mi) => {
    const axes = star.profiles[model];
    if (!axes || axes.length === 0) return;
    const byProp = new Map(axes.map((a) => [a.property, a]));
    const coords = PROPERTIES.map((prop, i) => {
      const axis = byProp.get(prop);
      const value = axis ? axis.value : 0;
      return { point: polar(center, radius * value, i, n), axis };
    });
    const group = document.createElementNS(SVG_NS, 'g');
    group.setAttribute('data-model', model);
    for (let i = 0; i < coords.length; i++) {
      const next = coords[(i + 1) % coords.length];
      const edge = document.createElementNS(SVG_NS, 'line');
      edge.setAttribute('x1', String(coords[i].point[0]));
      edge.setAttribute('y1', String(coords[i].point[1]));
      edge.setAttribute('x2', String(next.point[0]));
      edge.setAttribute('y2', String(next.point[1]));
      const estimated =
        coords[i].axis?.source === 'estimated' || next.axis?.source === 'estimated';
      edge.setAttribute('class', estimated ? 'star-edge estimated' : 'star-edge');
      edge.setAttribute('stroke', COLORS[mi]);
      if (estimated) edge.setAttribute('stroke-dasharray', '5,4');
      group.append(edge);
    }
    coords.forEach(({ point, axis }, i) => {
      if (!axis) return;
      const dot = document.createElementNS(SVG_NS, 'circle');
      dot.setAttribute('cx', String(point[0]));
      dot.setAttribute('cy', String(point[1]));
      dot.setAttribute('r', '2.5');
      dot.setAttribute('fill', COLORS[mi]);
      dot.dataset.score = `profiles.${model}.${i}.value`;
      dot.dataset.raw = String(axis.value);
      group.append(dot);
    });
    svg.append(group);
  });
  container.append(svg);

  const legend = document.createElement('ul');
  legend.className = 'legend';
  models.slice(0, 3).forEach((model, mi) => {
    const item = document.createElement('li');
    const swatch = document.createElement('span');
    swatch.className = 'swatch';
    swatch.style.background = COLORS[mi];
    item.append(swatch, document.createTextNode(model));
    legend.append(item);
  });
  container.append(legend);
}
