/**
 * Layered dependency-graph rendering for a finalized spec.
 *
 * Layout: each resource's layer is its longest dependency path length
 * (dependencies drawn to the left of their dependents). Cycles, if a
 * malformed spec ever contains one, are cut by the visited set rather than
 * looping. Aesthetics are not a contract — the layout only needs to be
 * readable and deterministic.
 */

import type { SpecJson } from './api';

export interface LayoutNode {
  label: string;
  type: string;
  layer: number;
  /** position within the layer, 0-based top to bottom */
  slot: number;
  x: number;
  y: number;
}

export interface LayoutEdge {
  from: string;
  to: string;
}

export interface GraphLayout {
  nodes: LayoutNode[];
  edges: LayoutEdge[];
  width: number;
  height: number;
}

const NODE_W = 168;
const NODE_H = 44;
const GAP_X = 72;
const GAP_Y = 20;
const PAD = 16;

export function resourceType(address: string): string {
  const dot = address.indexOf('.');
  return dot === -1 ? address : address.slice(0, dot);
}

/** Longest-path layer assignment over the dependency DAG. */
export function assignLayers(spec: SpecJson): Map<string, number> {
  const layers = new Map<string, number>();
  const visiting = new Set<string>();

  const depth = (label: string): number => {
    const known = layers.get(label);
    if (known !== undefined) return known;
    if (visiting.has(label)) return 0; // cycle guard
    visiting.add(label);
    const deps = (spec.topology[label] ?? []).filter((d) => d in spec.resources);
    const d = deps.length === 0 ? 0 : 1 + Math.max(...deps.map(depth));
    visiting.delete(label);
    layers.set(label, d);
    return d;
  };

  for (const label of Object.keys(spec.resources).sort()) depth(label);
  return layers;
}

export function layoutSpec(spec: SpecJson): GraphLayout {
  const layers = assignLayers(spec);
  const byLayer = new Map<number, string[]>();
  for (const label of Object.keys(spec.resources).sort()) {
    const l = layers.get(label) ?? 0;
    const bucket = byLayer.get(l) ?? [];
    bucket.push(label);
    byLayer.set(l, bucket);
  }

  const nodes: LayoutNode[] = [];
  let maxRows = 1;
  for (const [layer, labels] of byLayer) {
    maxRows = Math.max(maxRows, labels.length);
    labels.forEach((label, slot) => {
      nodes.push({
        label,
        type: resourceType(spec.resources[label]),
        layer,
        slot,
        x: PAD + layer * (NODE_W + GAP_X),
        y: PAD + slot * (NODE_H + GAP_Y),
      });
    });
  }

  const edges: LayoutEdge[] = [];
  for (const [from, deps] of Object.entries(spec.topology)) {
    if (!(from in spec.resources)) continue;
    for (const to of deps) {
      if (to in spec.resources) edges.push({ from, to });
    }
  }
  edges.sort((a, b) => (a.from + a.to).localeCompare(b.from + b.to));

  const nLayers = byLayer.size === 0 ? 1 : Math.max(...byLayer.keys()) + 1;
  return {
    nodes,
    edges,
    width: 2 * PAD + nLayers * NODE_W + (nLayers - 1) * GAP_X,
    height: 2 * PAD + maxRows * NODE_H + (maxRows - 1) * GAP_Y,
  };
}

/** Deterministic pastel fill per resource type. */
export function typeColor(type: string): string {
  let h = 0;
  for (let i = 0; i < type.length; i++) h = (h * 31 + type.charCodeAt(i)) >>> 0;
  return `hsl(${h % 360}, 55%, 82%)`;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = doc.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

/** Render the spec as an SVG element; nodes carry class="graph-node". */
export function renderGraph(spec: SpecJson, doc: Document = document): SVGSVGElement {
  const layout = layoutSpec(spec);
  const svg = svgEl(doc, 'svg', {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    width: String(layout.width),
    height: String(layout.height),
    role: 'img',
    'aria-label': 'final configuration dependency graph',
  });

  const defs = svgEl(doc, 'defs', {});
  const marker = svgEl(doc, 'marker', {
    id: 'arrow',
    viewBox: '0 0 8 8',
    refX: '8',
    refY: '4',
    markerWidth: '7',
    markerHeight: '7',
    orient: 'auto-start-reverse',
  });
  marker.appendChild(svgEl(doc, 'path', { d: 'M0,0 L8,4 L0,8 z', fill: '#555' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const pos = new Map(layout.nodes.map((n) => [n.label, n]));
  for (const edge of layout.edges) {
    // edge points from dependent to its dependency
    const a = pos.get(edge.from)!;
    const b = pos.get(edge.to)!;
    svg.appendChild(
      svgEl(doc, 'line', {
        class: 'graph-edge',
        x1: String(a.x),
        y1: String(a.y + NODE_H / 2),
        x2: String(b.x + NODE_W),
        y2: String(b.y + NODE_H / 2),
        stroke: '#555',
        'stroke-width': '1.5',
        'marker-end': 'url(#arrow)',
        'data-from': edge.from,
        'data-to': edge.to,
      }),
    );
  }

  for (const node of layout.nodes) {
    const g = svgEl(doc, 'g', {
      class: 'graph-node',
      'data-label': node.label,
      'data-type': node.type,
      transform: `translate(${node.x}, ${node.y})`,
    });
    g.appendChild(
      svgEl(doc, 'rect', {
        width: String(NODE_W),
        height: String(NODE_H),
        rx: '6',
        fill: typeColor(node.type),
        stroke: '#333',
      }),
    );
    const title = svgEl(doc, 'text', {
      x: String(NODE_W / 2),
      y: '18',
      'text-anchor': 'middle',
      'font-size': '12',
      'font-weight': 'bold',
    });
    title.textContent = node.label;
    const sub = svgEl(doc, 'text', {
      x: String(NODE_W / 2),
      y: '34',
      'text-anchor': 'middle',
      'font-size': '10',
      fill: '#333',
    });
    sub.textContent = node.type;
    g.appendChild(title);
    g.appendChild(sub);
    svg.appendChild(g);
  }
  return svg;
}
