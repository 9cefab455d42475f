import { describe, expect, it } from 'vitest';

import type { SpecJson } from '../src/api';
import {
  assignLayers,
  layoutSpec,
  renderGraph,
  resourceType,
  typeColor,
} from '../src/graph';

const WEB: SpecJson = {
  resources: {
    main: 'aws_vpc.main',
    public: 'aws_subnet.public',
    web: 'aws_instance.web',
  },
  topology: { public: ['main'], web: ['public'] },
  attributes: { web: { instance_type: 't3.micro' } },
};

describe('resourceType', () => {
  it('takes the address prefix before the first dot', () => {
    expect(resourceType('aws_vpc.main')).toBe('aws_vpc');
    expect(resourceType('bare')).toBe('bare');
  });
});

describe('assignLayers', () => {
  it('uses longest dependency path depth', () => {
    const layers = assignLayers(WEB);
    expect(layers.get('main')).toBe(0);
    expect(layers.get('public')).toBe(1);
    expect(layers.get('web')).toBe(2);
  });

  it('ignores dangling dependency targets', () => {
    const spec: SpecJson = {
      resources: { a: 't.a' },
      topology: { a: ['ghost'] },
      attributes: {},
    };
    expect(assignLayers(spec).get('a')).toBe(0);
  });

  it('terminates on a cyclic topology', () => {
    const spec: SpecJson = {
      resources: { a: 't.a', b: 't.b' },
      topology: { a: ['b'], b: ['a'] },
      attributes: {},
    };
    const layers = assignLayers(spec);
    expect(layers.size).toBe(2);
  });
});

describe('layoutSpec', () => {
  it('emits one node per resource and one edge per dependency', () => {
    const layout = layoutSpec(WEB);
    expect(layout.nodes).toHaveLength(3);
    expect(layout.edges).toHaveLength(2);
  });

  it('places dependencies to the left of dependents', () => {
    const layout = layoutSpec(WEB);
    const x = Object.fromEntries(layout.nodes.map((n) => [n.label, n.x]));
    expect(x.main).toBeLessThan(x.public);
    expect(x.public).toBeLessThan(x.web);
  });

  it('is deterministic regardless of key order', () => {
    const shuffled: SpecJson = {
      resources: { web: 'aws_instance.web', main: 'aws_vpc.main', public: 'aws_subnet.public' },
      topology: { web: ['public'], public: ['main'] },
      attributes: {},
    };
    expect(layoutSpec(shuffled)).toEqual(layoutSpec(WEB));
  });

  it('handles the empty spec', () => {
    const layout = layoutSpec({ resources: {}, topology: {}, attributes: {} });
    expect(layout.nodes).toHaveLength(0);
    expect(layout.width).toBeGreaterThan(0);
  });
});

describe('typeColor', () => {
  it('is stable and varies by type', () => {
    expect(typeColor('aws_vpc')).toBe(typeColor('aws_vpc'));
    expect(typeColor('aws_vpc')).not.toBe(typeColor('aws_sqs_queue'));
  });
});

describe('renderGraph', () => {
  it('renders one .graph-node per resource with label and type', () => {
    const svg = renderGraph(WEB, document);
    const nodes = svg.querySelectorAll('.graph-node');
    expect(nodes).toHaveLength(3);
    const labels = Array.from(nodes).map((n) => n.getAttribute('data-label'));
    expect(labels.sort()).toEqual(['main', 'public', 'web']);
    expect(svg.querySelectorAll('.graph-edge')).toHaveLength(2);
  });
});
