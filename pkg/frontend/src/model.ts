// Pure helpers over the feature-model payload: tree shape, locked set,
// xor sibling resolution. No validity logic lives here; the server's
// /api/validate verdict is the only authority.

import type { FeatureModelPayload, FeaturePayload } from './types.js';

export interface TreeNode {
  name: string;
  kind: 'root' | 'mandatory' | 'optional' | 'xor';
  xorSiblings: string[]; // other members of the same xor group
  children: TreeNode[];
}

export function buildTree(fm: FeatureModelPayload): TreeNode {
  const byName = new Map<string, FeaturePayload>();
  for (const f of fm.features) byName.set(f.name, f);

  function node(name: string, kind: TreeNode['kind'], xorSiblings: string[]): TreeNode {
    const feature = byName.get(name);
    const children: TreeNode[] = [];
    for (const group of feature?.groups ?? []) {
      if (group.kind === 'xor') {
        for (const child of group.children) {
          children.push(node(child, 'xor', group.children.filter((c) => c !== child)));
        }
      } else {
        children.push(node(group.children[0], group.kind, []));
      }
    }
    return { name, kind, xorSiblings, children };
  }
  return node(fm.root, 'root', []);
}

/** Features that are always selected: the root plus everything reachable
 * through mandatory edges only. Rendered checked and locked. */
export function lockedFeatures(fm: FeatureModelPayload): Set<string> {
  const byName = new Map(fm.features.map((f) => [f.name, f]));
  const locked = new Set<string>();
  const stack = [fm.root];
  while (stack.length > 0) {
    const name = stack.pop()!;
    if (locked.has(name)) continue;
    locked.add(name);
    for (const group of byName.get(name)?.groups ?? []) {
      if (group.kind === 'mandatory') stack.push(group.children[0]);
    }
  }
  return locked;
}

/** New selection after toggling `name`: xor siblings are deselected when
 * a member is selected; deselecting removes the feature and any selected
 * descendants (the server re-validates either way). */
export function toggleSelection(
  tree: TreeNode,
  selected: Set<string>,
  name: string,
): Set<string> {
  const next = new Set(selected);
  const node = findNode(tree, name);
  if (next.has(name)) {
    for (const gone of subtreeNames(node)) next.delete(gone);
  } else {
    next.add(name);
    if (node) for (const sibling of node.xorSiblings) {
      const sib = findNode(tree, sibling);
      for (const gone of subtreeNames(sib)) next.delete(gone);
    }
  }
  return next;
}

function findNode(tree: TreeNode, name: string): TreeNode | null {
  if (tree.name === name) return tree;
  for (const child of tree.children) {
    const found = findNode(child, name);
    if (found) return found;
  }
  return null;
}

function subtreeNames(node: TreeNode | null): string[] {
  if (!node) return [];
  return [node.name, ...node.children.flatMap(subtreeNames)];
}
