// Pure renderers: payloads in, HTML strings out. Keeping these free of
// fetch and DOM state makes the thin-client property directly testable.

import type { TreeNode } from './model.js';
import type { ValidatePayload, ViewModel } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderFeatureTree(
  tree: TreeNode,
  selected: Set<string>,
  locked: Set<string>,
): string {
  function renderNode(node: TreeNode): string {
    const isLocked = locked.has(node.name);
    const checked = selected.has(node.name) ? ' checked' : '';
    const disabled = isLocked ? ' disabled' : '';
    const badge =
      node.kind === 'xor'
        ? '<span class="badge xor">alt</span>'
        : node.kind === 'mandatory' || node.kind === 'root'
          ? '<span class="badge mandatory">&#9679;</span>'
          : '<span class="badge optional">&#9675;</span>';
    const children =
      node.children.length > 0
        ? `<ul>${node.children.map(renderNode).join('')}</ul>`
        : '';
    return (
      `<li><label><input type="checkbox" data-feature="${escapeHtml(node.name)}"` +
      `${checked}${disabled}> ${badge} ${escapeHtml(node.name)}</label>${children}</li>`
    );
  }
  return `<ul class="feature-tree">${renderNode(tree)}</ul>`;
}

export function renderVerdict(verdict: ValidatePayload | null): string {
  if (verdict === null) return '<p class="verdict pending">validating&hellip;</p>';
  if (verdict.valid) return '<p class="verdict valid">configuration valid</p>';
  const items = verdict.violations
    .map((v) => `<li><code>${escapeHtml(v.code)}</code> ${escapeHtml(v.message)}</li>`)
    .join('');
  return `<ul class="verdict invalid">${items}</ul>`;
}

export function renderScreen(view: ViewModel): string {
  const lines = view.lines
    .map((line) => {
      const cls = `${line.kind}${line.highlighted ? ' highlighted' : ''}`;
      return `<li class="${cls}">${escapeHtml(line.text)}</li>`;
    })
    .join('');
  let dialog = '';
  if (view.dialog !== null) {
    const buttons = view.dialog.buttons
      .map(
        (b) =>
          `<span class="button${b.highlighted ? ' highlighted' : ''}">` +
          `${escapeHtml(b.label)}</span>`,
      )
      .join('');
    dialog =
      `<div class="dialog"><p>${escapeHtml(view.dialog.text)}</p>` +
      `<div class="buttons">${buttons}</div></div>`;
  }
  return (
    `<div class="screen"><h2>${escapeHtml(view.title)}</h2>` +
    `<ul class="lines">${lines}</ul>${dialog}` +
    `<p class="config">features: ${view.config.map(escapeHtml).join(', ')}</p></div>`
  );
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}
